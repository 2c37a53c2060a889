#include "protmeas/oscillator.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "protmeas/errors.hpp"

namespace protmeas {

namespace {

void check_same_basis(const OscillatorBasis& a, const OscillatorBasis& b, const char* where) {
    if (!(a == b)) {
        throw ContractError(std::string(where) + ": states live on different bases");
    }
}

ComplexVector normalized(ComplexVector v, std::size_t dim, const char* what) {
    if (static_cast<std::size_t>(v.size()) != dim) {
        throw ContractError(std::string(what) + ": amplitude count " + std::to_string(v.size()) +
                            " does not match basis dimension " + std::to_string(dim));
    }
    const double n = v.norm();
    if (!(n > 0.0) || !std::isfinite(n)) {
        throw ContractError(std::string(what) + ": amplitudes have zero or non-finite norm");
    }
    v /= n;
    return v;
}

} // namespace

OscillatorBasis::OscillatorBasis(std::size_t dim, double omega, bool include_zero_point)
    : dim_(dim), omega_(omega), include_zero_point_(include_zero_point) {
    if (dim < 2) {
        throw RangeError("OscillatorBasis: dim must be at least 2, got " + std::to_string(dim));
    }
    if (!(omega > 0.0) || !std::isfinite(omega)) {
        throw RangeError("OscillatorBasis: omega must be positive");
    }
}

ComplexVector OscillatorBasis::phases(double t) const {
    ComplexVector out(static_cast<Eigen::Index>(dim_));
    for (std::size_t n = 0; n < dim_; ++n) {
        out(static_cast<Eigen::Index>(n)) = std::polar(1.0, -energy(n) * t);
    }
    return out;
}

OperatorMatrix OscillatorBasis::hamiltonian() const {
    OperatorMatrix h = OperatorMatrix::Zero(static_cast<Eigen::Index>(dim_),
                                            static_cast<Eigen::Index>(dim_));
    for (std::size_t n = 0; n < dim_; ++n) {
        h(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n)) = energy(n);
    }
    return h;
}

StateVector::StateVector(OscillatorBasis basis, ComplexVector amplitudes)
    : basis_(basis), amplitudes_(normalized(std::move(amplitudes), basis.dim(), "StateVector")) {}

DualState::DualState(OscillatorBasis basis, ComplexVector amplitudes)
    : basis_(basis), amplitudes_(normalized(std::move(amplitudes), basis.dim(), "DualState")) {}

StateVector DualState::ket() const { return StateVector(basis_, amplitudes_.conjugate()); }

DualState dual(const StateVector& state) {
    return DualState(state.basis(), state.amplitudes().conjugate());
}

Complex inner(const DualState& bra, const StateVector& ket) {
    check_same_basis(bra.basis(), ket.basis(), "inner");
    return (bra.amplitudes().array() * ket.amplitudes().array()).sum();
}

Complex inner(const StateVector& a, const StateVector& b) {
    check_same_basis(a.basis(), b.basis(), "inner");
    return a.amplitudes().dot(b.amplitudes());
}

double fidelity(const StateVector& a, const StateVector& b) { return std::norm(inner(a, b)); }

double fidelity(const DualState& a, const DualState& b) {
    return fidelity(a.ket(), b.ket());
}

StateVector number_state(const OscillatorBasis& basis, std::size_t n) {
    if (n >= basis.dim()) {
        throw RangeError("number_state: n = " + std::to_string(n) + " outside [0, " +
                         std::to_string(basis.dim()) + ")");
    }
    ComplexVector v = ComplexVector::Zero(static_cast<Eigen::Index>(basis.dim()));
    v(static_cast<Eigen::Index>(n)) = 1.0;
    return StateVector(basis, std::move(v));
}

double coherent_truncation_tail(double alpha_mod, std::size_t dim) {
    const double mean = alpha_mod * alpha_mod;
    if (mean == 0.0) {
        return 0.0;
    }
    // Poisson(mean) mass beyond dim, summed in log space until terms vanish.
    double tail = 0.0;
    for (std::size_t n = dim;; ++n) {
        const double nd = static_cast<double>(n);
        const double term = std::exp(nd * std::log(mean) - mean - std::lgamma(nd + 1.0));
        tail += term;
        if (nd > mean && term < 1e-300 + 1e-18 * tail) {
            break;
        }
    }
    return tail;
}

std::size_t coherent_required_dim(double alpha_mod) {
    std::size_t d = 2;
    while (coherent_truncation_tail(alpha_mod, d) >= kCoherentTailLimit) {
        ++d;
    }
    return d;
}

StateVector coherent_state(const OscillatorBasis& basis, Complex alpha) {
    const double r = std::abs(alpha);
    const double tail = coherent_truncation_tail(r, basis.dim());
    if (tail >= kCoherentTailLimit) {
        const std::size_t need = coherent_required_dim(r);
        throw TruncationError("coherent_state: |alpha| = " + std::to_string(r) +
                                  " loses probability " + std::to_string(tail) + " at dim " +
                                  std::to_string(basis.dim()) + "; requires dim >= " +
                                  std::to_string(need),
                              need);
    }
    const double delta = std::arg(alpha);
    ComplexVector c(static_cast<Eigen::Index>(basis.dim()));
    for (std::size_t n = 0; n < basis.dim(); ++n) {
        const double nd = static_cast<double>(n);
        double mag = 0.0;
        if (n == 0) {
            mag = std::exp(-0.5 * r * r);
        } else if (r > 0.0) {
            mag = std::exp(-0.5 * r * r + nd * std::log(r) - 0.5 * std::lgamma(nd + 1.0));
        }
        c(static_cast<Eigen::Index>(n)) = std::polar(mag, nd * delta);
    }
    return StateVector(basis, std::move(c));
}

StateVector evolve(const StateVector& state, double t) {
    ComplexVector c = state.amplitudes().cwiseProduct(state.basis().phases(t));
    return StateVector(state.basis(), std::move(c));
}

DualState backward_state(const DualState& final_state, double t, double T) {
    if (!(t >= 0.0 && t <= T)) {
        throw RangeError("backward_state: t = " + std::to_string(t) + " outside [0, " +
                         std::to_string(T) + "]");
    }
    ComplexVector d = final_state.amplitudes().cwiseProduct(final_state.basis().phases(T - t));
    return DualState(final_state.basis(), std::move(d));
}

std::vector<double> hermite_functions(double x, std::size_t count) {
    std::vector<double> out(count, 0.0);
    if (count == 0) {
        return out;
    }
    constexpr double kRescale = 1e150;
    const double log_rescale = std::log(kRescale);
    // phi_n = v_n * exp(scale); v_0 = 1.
    double scale = -0.5 * x * x - 0.25 * std::log(std::numbers::pi);
    auto emit = [&](std::size_t n, double v) {
        out[n] = (v == 0.0) ? 0.0 : std::copysign(std::exp(scale + std::log(std::abs(v))), v);
    };
    double prev = 1.0;
    emit(0, prev);
    if (count == 1) {
        return out;
    }
    double cur = std::numbers::sqrt2 * x;
    emit(1, cur);
    for (std::size_t k = 1; k + 1 < count; ++k) {
        const double kd = static_cast<double>(k);
        const double next =
            std::sqrt(2.0 / (kd + 1.0)) * x * cur - std::sqrt(kd / (kd + 1.0)) * prev;
        prev = cur;
        cur = next;
        if (std::abs(cur) > kRescale) {
            cur /= kRescale;
            prev /= kRescale;
            scale += log_rescale;
        }
        emit(k + 1, cur);
    }
    return out;
}

Eigen::MatrixXd hermite_function_table(std::span<const double> xs, std::size_t count) {
    Eigen::MatrixXd table(static_cast<Eigen::Index>(xs.size()), static_cast<Eigen::Index>(count));
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const auto row = hermite_functions(xs[i], count);
        for (std::size_t n = 0; n < count; ++n) {
            table(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(n)) = row[n];
        }
    }
    return table;
}

Complex position_wavefunction(const StateVector& state, double x) {
    const auto phi = hermite_functions(x, state.basis().dim());
    Complex sum = 0.0;
    for (std::size_t n = 0; n < phi.size(); ++n) {
        sum += state[n] * phi[n];
    }
    return sum;
}

} // namespace protmeas
