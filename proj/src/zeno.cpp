#include <cmath>
#include <string>

#include <Eigen/Eigenvalues>

#include "protmeas/errors.hpp"
#include "protmeas/weak_measurement.hpp"

namespace protmeas {

namespace {

OperatorMatrix interval_propagator(const OscillatorBasis& basis,
                                   const std::optional<ZenoMeasurement>& measurement,
                                   double tau) {
    if (!measurement || measurement->strength == 0.0) {
        return basis.phases(tau).asDiagonal();
    }
    const OperatorMatrix H = basis.hamiltonian() + measurement->strength * measurement->observable;
    Eigen::SelfAdjointEigenSolver<OperatorMatrix> eig(H);
    ComplexVector ph(eig.eigenvalues().size());
    for (Eigen::Index i = 0; i < ph.size(); ++i) {
        ph(i) = std::polar(1.0, -eig.eigenvalues()(i) * tau);
    }
    return eig.eigenvectors() * ph.asDiagonal() * eig.eigenvectors().adjoint();
}

} // namespace

ZenoResult zeno_protect_sim(const ZenoConfig& config) {
    if (config.n_protections < 1) {
        throw RangeError("zeno_protect_sim: need at least one protection");
    }
    if (!(config.duration > 0.0)) {
        throw RangeError("zeno_protect_sim: duration must be positive");
    }
    const OscillatorBasis& basis = config.initial.basis();
    const auto N = static_cast<Eigen::Index>(basis.dim());
    if (config.measurement) {
        const auto& A = config.measurement->observable;
        if (A.rows() != N || A.cols() != N) {
            throw ContractError("zeno_protect_sim: observable shape does not match the basis");
        }
        if (hermiticity_defect(A) > kHermitianTolerance * std::max(1.0, A.cwiseAbs().maxCoeff())) {
            throw ContractError("zeno_protect_sim: observable is not Hermitian");
        }
    }

    const std::size_t n = config.n_protections;
    const double tau = config.duration / static_cast<double>(n);
    const OperatorMatrix U = interval_propagator(basis, config.measurement, tau);
    const ComplexVector& psi = config.initial.amplitudes();
    const OperatorMatrix projector = psi * psi.adjoint();

    ZenoResult out;
    out.survival_history.reserve(n);
    out.protection_times.reserve(n);

    // Survival only needs the amplitude <psi|U|psi> per interval.
    const Complex stay = psi.dot(U * psi);
    const double per_step = std::norm(stay);

    // Heisenberg picture: the accumulated map K_k = (Pi U)^k carries the
    // dynamics while the state stays fixed; the measured operator seen by
    // psi is K^dagger A K, normalized by the survival probability.
    const bool track_operator = config.measurement.has_value();
    OperatorMatrix K = OperatorMatrix::Identity(N, N);
    double survival = 1.0;
    for (std::size_t k = 1; k <= n; ++k) {
        const double t = tau * static_cast<double>(k);
        const double before_survival = survival;
        survival *= per_step;
        out.protection_times.push_back(t);
        out.survival_history.push_back(survival);
        if (!track_operator) {
            continue;
        }
        const OperatorMatrix& A = config.measurement->observable;
        const OperatorMatrix UK = U * K;
        OperatorMatrix before = UK.adjoint() * A * UK;
        // ||U K psi||^2 equals the survival reached before this protection.
        if (before_survival > 0.0) {
            before /= before_survival;
        }
        K = projector * UK;
        OperatorMatrix after = K.adjoint() * A * K;
        if (survival > 0.0) {
            after /= survival;
        }
        out.expectation_before.push_back(psi.dot(before * psi).real());
        out.expectation_after.push_back(psi.dot(after * psi).real());
        out.jump_norms.push_back((after - before).norm());
        if (config.record_snapshots) {
            out.snapshots.push_back({t, std::move(before), std::move(after)});
        }
    }
    out.survival_probability = survival;
    return out;
}

} // namespace protmeas
