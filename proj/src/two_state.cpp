#include "protmeas/two_state.hpp"

#include <cmath>
#include <string>

#include <Eigen/Eigenvalues>

#include "protmeas/errors.hpp"

namespace protmeas {

namespace {

constexpr double kThermalTailLimit = 1e-10;

void check_beta(double beta, const char* where) {
    if (!(beta > 0.0) || !std::isfinite(beta)) {
        throw RangeError(std::string(where) + ": beta must be positive and finite");
    }
}

// Boltzmann factors e^{-n x}, n < dim, normalized to unit sum.
Eigen::VectorXd boltzmann_weights(double beta, const OscillatorBasis& basis, const char* where) {
    check_beta(beta, where);
    const double tail = thermal_truncation_tail(beta, basis);
    if (tail > kThermalTailLimit) {
        const double x = beta * basis.omega();
        const auto need = static_cast<std::size_t>(
            std::ceil((-std::log(kThermalTailLimit) - std::log1p(-std::exp(-x))) / x));
        throw TruncationError(std::string(where) + ": Boltzmann tail " + std::to_string(tail) +
                                  " at dim " + std::to_string(basis.dim()) +
                                  "; requires dim >= " + std::to_string(need),
                              need);
    }
    const double x = beta * basis.omega();
    Eigen::VectorXd w(static_cast<Eigen::Index>(basis.dim()));
    for (Eigen::Index n = 0; n < w.size(); ++n) {
        w(n) = std::exp(-static_cast<double>(n) * x);
    }
    return w / w.sum();
}

} // namespace

double thermal_truncation_tail(double beta, const OscillatorBasis& basis) {
    const double x = beta * basis.omega();
    return std::exp(-static_cast<double>(basis.dim()) * x) / -std::expm1(-x);
}

DensityMatrix thermal_density(double beta, const OscillatorBasis& basis) {
    const Eigen::VectorXd w = boltzmann_weights(beta, basis, "thermal_density");
    return {w.cast<Complex>().asDiagonal(), basis};
}

StateVector thermal_purification(double beta, const OscillatorBasis& basis) {
    const Eigen::VectorXd w = boltzmann_weights(beta, basis, "thermal_purification");
    return StateVector(basis, w.cwiseSqrt().cast<Complex>());
}

Complex trace_product(const OperatorMatrix& A, const OperatorMatrix& rho) {
    // tr(A rho) = sum_{ij} A_ij rho_ji
    return (A.array() * rho.transpose().array()).sum();
}

TwoStateDensity two_state_density(const StateVector& pre, const DualState& post, double t,
                                  double T, double overlap_floor) {
    if (!(pre.basis() == post.basis())) {
        throw ContractError("two_state_density: pre and post use different bases");
    }
    if (!(t >= 0.0 && t <= T)) {
        throw RangeError("two_state_density: t outside [0, T]");
    }
    const StateVector ket = evolve(pre, t);
    const DualState bra = backward_state(post, t, T);
    const Complex overlap = inner(bra, ket);
    if (std::abs(overlap) <= overlap_floor) {
        throw OrthogonalPostSelectionError(
            "two_state_density: pre- and post-selected states are orthogonal (|overlap| = " +
                std::to_string(std::abs(overlap)) + ")",
            std::abs(overlap));
    }
    OperatorMatrix rho = ket.amplitudes() * bra.amplitudes().transpose() / overlap;
    return {std::move(rho), pre, post, t, T};
}

Complex weak_value_from_density(const OperatorMatrix& A, const TwoStateDensity& rho) {
    if (A.rows() != rho.entries.rows() || A.cols() != rho.entries.cols()) {
        throw ContractError("weak_value_from_density: operator shape mismatch");
    }
    return trace_product(A, rho.entries) / rho.entries.trace();
}

OperatorMatrix two_state_density_with(const OperatorMatrix& H, const StateVector& pre,
                                      const DualState& post, double t, double T) {
    if (hermiticity_defect(H) > kHermitianTolerance * std::max(1.0, H.cwiseAbs().maxCoeff())) {
        throw ContractError("two_state_density_with: Hamiltonian is not Hermitian");
    }
    Eigen::SelfAdjointEigenSolver<OperatorMatrix> eig(H);
    const OperatorMatrix& V = eig.eigenvectors();
    auto propagator = [&](double tau) -> OperatorMatrix {
        ComplexVector ph(eig.eigenvalues().size());
        for (Eigen::Index i = 0; i < ph.size(); ++i) {
            ph(i) = std::polar(1.0, -eig.eigenvalues()(i) * tau);
        }
        return V * ph.asDiagonal() * V.adjoint();
    };
    const ComplexVector ket = propagator(t) * pre.amplitudes();
    const Eigen::RowVectorXcd bra = post.amplitudes().transpose() * propagator(T - t);
    const Complex overlap = (bra * ket)(0);
    if (std::abs(overlap) <= kOverlapFloor) {
        throw OrthogonalPostSelectionError("two_state_density_with: orthogonal pre/post",
                                           std::abs(overlap));
    }
    return ket * bra / overlap;
}

double von_neumann_residual(const StateVector& pre, const DualState& post,
                            const OperatorMatrix& H, double t, double T, double dt) {
    if (!(dt > 0.0)) {
        throw RangeError("von_neumann_residual: dt must be positive");
    }
    // The central difference may reach outside [0, T]; the propagators are
    // defined for any real time, so the density is continued analytically.
    const OperatorMatrix rho = two_state_density_with(H, pre, post, t, T);
    const OperatorMatrix plus = two_state_density_with(H, pre, post, t + dt, T);
    const OperatorMatrix minus = two_state_density_with(H, pre, post, t - dt, T);
    const OperatorMatrix lhs = Complex(0.0, 1.0) * (plus - minus) / (2.0 * dt);
    const OperatorMatrix commutator = H * rho - rho * H;
    return (lhs - commutator).norm();
}

OperatorMatrix CanonicalTwoStateDensity::forward_marginal() const {
    const Eigen::VectorXd d = weights.rowwise().sum();
    return d.cast<Complex>().asDiagonal();
}

OperatorMatrix CanonicalTwoStateDensity::backward_marginal() const {
    const Eigen::VectorXd d = weights.colwise().sum().transpose();
    return d.cast<Complex>().asDiagonal();
}

Complex CanonicalTwoStateDensity::weak_value(const OperatorMatrix& A) const {
    // The doubled density is diagonal, so only diagonal entries of A enter.
    return trace_product(A, forward_marginal()) / trace();
}

Complex CanonicalTwoStateDensity::backward_weak_value(const OperatorMatrix& A) const {
    return trace_product(A, backward_marginal()) / trace();
}

double CanonicalTwoStateDensity::distance_from_maximally_mixed() const {
    const double uniform = 1.0 / static_cast<double>(weights.size());
    return (weights.array() - uniform).abs().maxCoeff();
}

CanonicalTwoStateDensity two_state_canonical(double beta, const OscillatorBasis& basis) {
    check_beta(beta, "two_state_canonical");
    const std::size_t dim = basis.dim();
    const double top = beta * basis.energy(dim - 1);
    if (std::abs(top) > 700.0) {
        throw RangeError("two_state_canonical: beta * E_max = " + std::to_string(top) +
                         " overflows; reduce dim or beta");
    }
    Eigen::VectorXd down(static_cast<Eigen::Index>(dim));
    Eigen::VectorXd up(static_cast<Eigen::Index>(dim));
    for (std::size_t n = 0; n < dim; ++n) {
        down(static_cast<Eigen::Index>(n)) = std::exp(-beta * basis.energy(n));
        up(static_cast<Eigen::Index>(n)) = std::exp(beta * basis.energy(n));
    }
    // Normalize each factor first so the product never overflows.
    down /= down.sum();
    up /= up.sum();
    CanonicalTwoStateDensity rho;
    rho.weights = down * up.transpose();
    rho.weights /= rho.weights.sum();
    rho.beta = beta;
    rho.basis = basis;
    return rho;
}

std::size_t sample_boltzmann_level(double beta, const OscillatorBasis& basis,
                                   std::mt19937_64& rng) {
    const Eigen::VectorXd w = boltzmann_weights(beta, basis, "sample_boltzmann_level");
    std::discrete_distribution<std::size_t> dist(w.data(), w.data() + w.size());
    return dist(rng);
}

double thermal_pointer_reading(const OperatorMatrix& observable, const DensityMatrix& rho) {
    return trace_product(observable, rho.entries).real();
}

} // namespace protmeas
