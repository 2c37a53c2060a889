#pragma once

#include <cmath>
#include <random>

#include "protmeas/oscillator.hpp"

namespace protmeas::testing {

inline ComplexVector random_amplitudes(std::mt19937_64& rng, std::size_t dim) {
    std::normal_distribution<double> g(0.0, 1.0);
    ComplexVector v(static_cast<Eigen::Index>(dim));
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        v(i) = Complex(g(rng), g(rng));
    }
    return v;
}

inline StateVector random_state(std::mt19937_64& rng, const OscillatorBasis& basis) {
    return StateVector(basis, random_amplitudes(rng, basis.dim()));
}

inline DualState random_dual(std::mt19937_64& rng, const OscillatorBasis& basis) {
    return DualState(basis, random_amplitudes(rng, basis.dim()));
}

inline OperatorMatrix random_hermitian(std::mt19937_64& rng, std::size_t dim) {
    std::normal_distribution<double> g(0.0, 1.0);
    const auto n = static_cast<Eigen::Index>(dim);
    OperatorMatrix m(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            m(i, j) = Complex(g(rng), g(rng));
        }
    }
    return 0.5 * (m + m.adjoint());
}

/// Hermite function from the explicit polynomial formula; valid for small n.
inline double hermite_function_explicit(unsigned n, double x) {
    const double norm = std::sqrt(std::pow(2.0, n) * std::tgamma(n + 1.0) * std::sqrt(M_PI));
    return std::hermite(n, x) * std::exp(-0.5 * x * x) / norm;
}

/// Plain composite Simpson rule, independent of the library's quadrature.
template <class F>
double simpson(F&& f, double a, double b, int intervals = 20000) {
    if (intervals % 2) {
        ++intervals;
    }
    const double h = (b - a) / intervals;
    double s = f(a) + f(b);
    for (int i = 1; i < intervals; ++i) {
        s += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
    }
    return s * h / 3.0;
}

} // namespace protmeas::testing
