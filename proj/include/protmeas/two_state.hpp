#pragma once

#include <cstddef>
#include <random>

#include "protmeas/oscillator.hpp"
#include "protmeas/weak_measurement.hpp"

namespace protmeas {

/// Ordinary (one-state) density operator: Hermitian, unit trace, positive.
struct DensityMatrix {
    OperatorMatrix entries;
    OscillatorBasis basis;
};

/// Two-state density |Psi(t)><Phi(t)| / <Phi(t)|Psi(t)>; generally not Hermitian.
struct TwoStateDensity {
    OperatorMatrix entries;
    StateVector pre;
    DualState post;
    double t = 0.0;
    double T = 0.0;
};

/// Truncation bound e^{-dim x} / (1 - e^{-x}) on the discarded Boltzmann mass, x = beta * omega.
double thermal_truncation_tail(double beta, const OscillatorBasis& basis);

/// Boltzmann weights (1 - e^{-x}) e^{-n x}, renormalized on the truncated basis.
/// Throws TruncationError when the discarded tail exceeds 1e-10.
DensityMatrix thermal_density(double beta, const OscillatorBasis& basis);

/// Pure state with amplitudes proportional to e^{-n x / 2}; reproduces thermal
/// averages of energy-diagonal observables.
StateVector thermal_purification(double beta, const OscillatorBasis& basis);

/// Tr(A rho).
Complex trace_product(const OperatorMatrix& A, const OperatorMatrix& rho);

TwoStateDensity two_state_density(const StateVector& pre, const DualState& post, double t,
                                  double T, double overlap_floor = kOverlapFloor);

/// tr(A rho) / tr(rho).
Complex weak_value_from_density(const OperatorMatrix& A, const TwoStateDensity& rho);

/// Two-state density propagated with an arbitrary Hermitian H (pre forward
/// from 0, post backward from T).
OperatorMatrix two_state_density_with(const OperatorMatrix& H, const StateVector& pre,
                                      const DualState& post, double t, double T);

/// Frobenius norm of i (rho(t+dt) - rho(t-dt)) / (2 dt) - [H, rho(t)].
double von_neumann_residual(const StateVector& pre, const DualState& post,
                            const OperatorMatrix& H, double t, double T, double dt);

/// Canonical two-state ensemble exp{-beta [H' - H'']} in the doubled
/// coordinates (x', x''): a diagonal operator on the doubled truncated basis
/// |m>|n> with weights e^{-beta E_m} e^{+beta E_n}, normalized to unit trace.
/// Every quantity derived from it depends on the truncation dimension.
struct CanonicalTwoStateDensity {
    /// weights(m, n), sums to 1.
    Eigen::MatrixXd weights;
    double beta = 0.0;
    OscillatorBasis basis;

    std::size_t truncation_dim() const noexcept { return basis.dim(); }
    double trace() const { return weights.sum(); }

    /// Reduced operator on the forward (x') coordinate: sum_n weights(m, n) |m><m|.
    OperatorMatrix forward_marginal() const;
    /// Reduced operator on the backward (x'') coordinate.
    OperatorMatrix backward_marginal() const;

    /// tr((A x 1) rho) / tr(rho): A acting on the forward coordinate.
    Complex weak_value(const OperatorMatrix& A) const;
    /// tr((1 x A) rho) / tr(rho): A acting on the backward coordinate.
    Complex backward_weak_value(const OperatorMatrix& A) const;
    /// Largest deviation from the maximally mixed doubled state 1/dim^2.
    double distance_from_maximally_mixed() const;
};

/// Throws RangeError when |beta E_{dim-1}| > 700 (exp overflow).
CanonicalTwoStateDensity two_state_canonical(double beta, const OscillatorBasis& basis);

/// Level drawn from the Boltzmann distribution (bath switched off before measuring).
std::size_t sample_boltzmann_level(double beta, const OscillatorBasis& basis,
                                   std::mt19937_64& rng);

/// Final reading of a protective measurement performed while the bath stays on:
/// the pointer drifts at the thermal average Tr(P rho).
double thermal_pointer_reading(const OperatorMatrix& observable, const DensityMatrix& rho);

} // namespace protmeas
