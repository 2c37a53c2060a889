#include <cmath>
#include <numbers>
#include <string>

#include <Eigen/Eigenvalues>

#include "protmeas/errors.hpp"
#include "protmeas/weak_measurement.hpp"

namespace protmeas {

namespace {

// The pointer has no Hamiltonian of its own, so its momentum is conserved and
// the joint state is block diagonal in pointer momentum. Each retained
// momentum carries one system vector; the coupling step is diagonal in the
// eigenbasis of the observable, where the joint state is stored.
struct PointerGrid {
    std::vector<double> x;
    std::vector<double> p;
    Eigen::VectorXcd amplitude; // initial pointer amplitude per retained momentum
    Eigen::MatrixXcd to_position; // x_j <- p_k synthesis, M x K
    double dx = 0.0;
};

PointerGrid make_pointer_grid(const PointerModel& model) {
    if (model.grid_points < 8 || !(model.sigma > 0.0) || !(model.extent_sigmas > 0.0)) {
        throw RangeError("bipartite: pointer grid needs >= 8 points, positive sigma and extent");
    }
    PointerGrid g;
    const std::size_t M = model.grid_points;
    const double half = model.extent_sigmas * model.sigma;
    g.dx = 2.0 * half / static_cast<double>(M);
    g.x.resize(M);
    Eigen::VectorXcd chi(static_cast<Eigen::Index>(M));
    double norm2 = 0.0;
    for (std::size_t j = 0; j < M; ++j) {
        g.x[j] = -half + g.dx * static_cast<double>(j);
        const double v = std::exp(-g.x[j] * g.x[j] / (4.0 * model.sigma * model.sigma));
        chi(static_cast<Eigen::Index>(j)) = v;
        norm2 += v * v * g.dx;
    }
    chi /= std::sqrt(norm2);

    std::vector<double> all_p(M);
    std::vector<Complex> all_amp(M);
    double peak = 0.0;
    const double dp = 2.0 * std::numbers::pi / (static_cast<double>(M) * g.dx);
    for (std::size_t k = 0; k < M; ++k) {
        const double p = dp * (static_cast<double>(k) - static_cast<double>(M / 2));
        Complex sum = 0.0;
        for (std::size_t j = 0; j < M; ++j) {
            sum += chi(static_cast<Eigen::Index>(j)) * std::polar(1.0, -p * g.x[j]);
        }
        all_p[k] = p;
        all_amp[k] = sum;
        peak = std::max(peak, std::norm(sum));
    }
    // Momenta below the spectral floor left by cutting the Gaussian at the
    // grid edge carry no signal; dropping them bounds the lost norm by M * 1e-16.
    std::vector<std::size_t> kept;
    for (std::size_t k = 0; k < M; ++k) {
        if (std::norm(all_amp[k]) >= 1e-16 * peak) {
            kept.push_back(k);
        }
    }
    g.p.resize(kept.size());
    g.amplitude.resize(static_cast<Eigen::Index>(kept.size()));
    g.to_position.resize(static_cast<Eigen::Index>(M), static_cast<Eigen::Index>(kept.size()));
    for (std::size_t i = 0; i < kept.size(); ++i) {
        const auto ii = static_cast<Eigen::Index>(i);
        g.p[i] = all_p[kept[i]];
        g.amplitude(ii) = all_amp[kept[i]];
        for (std::size_t j = 0; j < M; ++j) {
            g.to_position(static_cast<Eigen::Index>(j), ii) =
                std::polar(1.0 / static_cast<double>(M), g.p[i] * g.x[j]);
        }
    }
    return g;
}

// Normalized pointer position density (sum_j rho_j dx = 1) and its mean.
std::pair<std::vector<double>, double> pointer_density(const PointerGrid& grid,
                                                       const Eigen::MatrixXcd& fock_state) {
    // fock_state: system levels x retained momenta.
    const Eigen::MatrixXcd psi = grid.to_position * fock_state.transpose();
    std::vector<double> rho(grid.x.size());
    double total = 0.0;
    double mean = 0.0;
    for (std::size_t j = 0; j < grid.x.size(); ++j) {
        rho[j] = psi.row(static_cast<Eigen::Index>(j)).squaredNorm();
        total += rho[j] * grid.dx;
    }
    for (std::size_t j = 0; j < grid.x.size(); ++j) {
        rho[j] /= total;
        mean += grid.x[j] * rho[j] * grid.dx;
    }
    return {std::move(rho), mean};
}

} // namespace

BipartiteSimResult bipartite_protective_run(const BipartiteConfig& config) {
    const OscillatorBasis& basis = config.pre.basis();
    const auto N = static_cast<Eigen::Index>(basis.dim());
    const OperatorMatrix& A = config.observable;
    if (A.rows() != N || A.cols() != N) {
        throw ContractError("bipartite: observable shape does not match the system basis");
    }
    if (hermiticity_defect(A) > kHermitianTolerance * std::max(1.0, A.cwiseAbs().maxCoeff())) {
        throw ContractError("bipartite: observable is not Hermitian");
    }
    const MeasurementSchedule& sched = config.schedule;
    const PointerGrid grid = make_pointer_grid(config.pointer);
    const auto K = static_cast<Eigen::Index>(grid.p.size());

    Eigen::SelfAdjointEigenSolver<OperatorMatrix> eig(A);
    const Eigen::VectorXd lambda = eig.eigenvalues();
    const OperatorMatrix& V = eig.eigenvectors();

    const double dt = sched.dt();
    auto free_in_eigenbasis = [&](double tau) -> OperatorMatrix {
        return V.adjoint() * basis.phases(tau).asDiagonal() * V;
    };
    const OperatorMatrix half_step = free_in_eigenbasis(0.5 * dt);
    const OperatorMatrix full_step = free_in_eigenbasis(dt);

    // Joint state in the observable eigenbasis: column k is the system vector
    // attached to pointer momentum p_k.
    Eigen::MatrixXcd state = (V.adjoint() * config.pre.amplitudes()) * grid.amplitude.transpose();
    const Eigen::MatrixXcd initial_fock = V * state;

    BipartiteSimResult result;
    const std::size_t steps = sched.steps();
    const std::size_t mid_step = steps / 2;
    state = half_step * state;
    Eigen::ArrayXXcd phase(N, K);
    for (std::size_t s = 0; s < steps; ++s) {
        const double t_mid = (static_cast<double>(s) + 0.5) * dt;
        const double g = config.coupling_scale * sched.coupling(t_mid);
        for (Eigen::Index k = 0; k < K; ++k) {
            const double kick = g * grid.p[static_cast<std::size_t>(k)] * dt;
            for (Eigen::Index j = 0; j < N; ++j) {
                phase(j, k) = std::polar(1.0, -kick * lambda(j));
            }
        }
        state.array() *= phase;
        if (s + 1 == mid_step) {
            // State at t = T/2 for the energy-shift readout.
            const Eigen::MatrixXcd at_mid = half_step * state;
            double weighted = 0.0;
            double weight = 0.0;
            for (Eigen::Index k = 0; k < K; ++k) {
                const double w = at_mid.col(k).squaredNorm();
                const double a = (lambda.array() * at_mid.col(k).array().abs2()).sum() / w;
                weighted += w * a;
                weight += w;
            }
            const double t_half = static_cast<double>(mid_step) * dt;
            result.energy_shift_per_p =
                config.coupling_scale * sched.coupling(t_half) * weighted / weight;
        }
        state = (s + 1 == steps ? half_step : full_step) * state;
    }

    const Eigen::MatrixXcd final_fock = V * state;
    auto [rho0, mean0] = pointer_density(grid, initial_fock);
    auto [rho1, mean1] = pointer_density(grid, final_fock);
    result.pointer_shift = mean1 - mean0;
    result.pointer_x = grid.x;
    result.pointer_density_initial = std::move(rho0);
    result.pointer_density_final = std::move(rho1);

    OperatorMatrix rho_sys = final_fock * final_fock.adjoint();
    rho_sys /= rho_sys.trace().real();
    const ComplexVector free_final =
        config.pre.amplitudes().cwiseProduct(basis.phases(sched.duration()));
    result.survival_probability = free_final.dot(rho_sys * free_final).real();
    result.system_density = std::move(rho_sys);
    result.steps_used = steps;
    return result;
}

BipartiteSimResult bipartite_protective_sim(const BipartiteConfig& config) {
    BipartiteConfig cfg = config;
    BipartiteSimResult coarse = bipartite_protective_run(cfg);
    for (std::size_t d = 0; d < config.max_doublings; ++d) {
        cfg.schedule = cfg.schedule.with_steps(cfg.schedule.steps() * 2);
        BipartiteSimResult fine = bipartite_protective_run(cfg);
        const double change = std::abs(fine.pointer_shift - coarse.pointer_shift);
        if (change < config.shift_tolerance) {
            return fine;
        }
        coarse = std::move(fine);
    }
    throw ConvergenceError("bipartite: pointer shift still changing after " +
                           std::to_string(config.max_doublings) + " step doublings (last " +
                           std::to_string(coarse.steps_used) + " steps)");
}

} // namespace protmeas
