#pragma once

// Truncated Fock-space harmonic oscillator in units where hbar = 1 and
// positions are measured in sqrt(hbar / m omega).

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace protmeas {

using Complex = std::complex<double>;
using ComplexVector = Eigen::VectorXcd;
using OperatorMatrix = Eigen::MatrixXcd;

inline constexpr std::size_t kDefaultDim = 64;
/// Largest admissible probability mass lost by truncating a coherent state.
inline constexpr double kCoherentTailLimit = 1e-10;

class OscillatorBasis {
public:
    explicit OscillatorBasis(std::size_t dim = kDefaultDim, double omega = 1.0,
                             bool include_zero_point = true);

    std::size_t dim() const noexcept { return dim_; }
    double omega() const noexcept { return omega_; }
    bool include_zero_point() const noexcept { return include_zero_point_; }

    /// E_n = omega * n, plus omega / 2 when the zero point is kept.
    double energy(std::size_t n) const noexcept {
        return omega_ * (static_cast<double>(n) + (include_zero_point_ ? 0.5 : 0.0));
    }

    /// exp(-i E_n t) for every level.
    ComplexVector phases(double t) const;

    OperatorMatrix hamiltonian() const;

    bool operator==(const OscillatorBasis&) const = default;

private:
    std::size_t dim_;
    double omega_;
    bool include_zero_point_;
};

/// Normalized ket over the truncated basis.
class StateVector {
public:
    /// Normalizes `amplitudes`; throws ContractError on a zero vector or size mismatch.
    StateVector(OscillatorBasis basis, ComplexVector amplitudes);

    const OscillatorBasis& basis() const noexcept { return basis_; }
    const ComplexVector& amplitudes() const noexcept { return amplitudes_; }
    Complex operator[](std::size_t n) const { return amplitudes_(static_cast<Eigen::Index>(n)); }
    double norm() const { return amplitudes_.norm(); }

private:
    OscillatorBasis basis_;
    ComplexVector amplitudes_;
};

/// Normalized bra; amplitudes are <Phi|n>.
class DualState {
public:
    DualState(OscillatorBasis basis, ComplexVector amplitudes);

    const OscillatorBasis& basis() const noexcept { return basis_; }
    const ComplexVector& amplitudes() const noexcept { return amplitudes_; }
    double norm() const { return amplitudes_.norm(); }

    /// The ket this bra is the adjoint of.
    StateVector ket() const;

private:
    OscillatorBasis basis_;
    ComplexVector amplitudes_;
};

DualState dual(const StateVector& state);

/// <bra|ket>.
Complex inner(const DualState& bra, const StateVector& ket);
/// <a|b> between two kets.
Complex inner(const StateVector& a, const StateVector& b);

/// |<a|b>|^2; the comparison used wherever global phases are irrelevant.
double fidelity(const StateVector& a, const StateVector& b);
double fidelity(const DualState& a, const DualState& b);

StateVector number_state(const OscillatorBasis& basis, std::size_t n);

/// Probability mass sum_{n >= dim} |alpha|^{2n} e^{-|alpha|^2} / n! cut off by truncation.
double coherent_truncation_tail(double alpha_mod, std::size_t dim);
/// Smallest dimension that keeps the coherent tail below kCoherentTailLimit.
std::size_t coherent_required_dim(double alpha_mod);

/// |alpha>, renormalized after truncation. Throws TruncationError if the tail is too large.
StateVector coherent_state(const OscillatorBasis& basis, Complex alpha);

/// Schroedinger evolution c_n -> exp(-i E_n t) c_n.
StateVector evolve(const StateVector& state, double t);

/// <Phi_f(t)| = <Phi_f| U(T - t) for a bra fixed at the final time T.
DualState backward_state(const DualState& final_state, double t, double T);

/// Normalized Hermite-Gauss eigenfunctions phi_0..phi_{count-1} at x, by the
/// three-term recurrence with running exponent rescaling.
std::vector<double> hermite_functions(double x, std::size_t count);

/// Row i holds phi_0..phi_{count-1} evaluated at xs[i].
Eigen::MatrixXd hermite_function_table(std::span<const double> xs, std::size_t count);

/// sum_n c_n phi_n(x).
Complex position_wavefunction(const StateVector& state, double x);

} // namespace protmeas
