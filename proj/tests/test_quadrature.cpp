#include <doctest.h>

#include <cmath>
#include <numbers>

#include "protmeas/errors.hpp"
#include "protmeas/quadrature.hpp"

using namespace protmeas;

TEST_CASE("Gauss-Legendre rule") {
    const auto rule = quad::gauss_legendre(20);
    double wsum = 0.0;
    for (double w : rule.weights) {
        wsum += w;
    }
    CHECK(wsum == doctest::Approx(2.0).epsilon(1e-14));
    // Exact for polynomials up to degree 39.
    double m38 = 0.0;
    for (std::size_t i = 0; i < rule.size(); ++i) {
        m38 += rule.weights[i] * std::pow(rule.nodes[i], 38);
    }
    CHECK(m38 == doctest::Approx(2.0 / 39.0).epsilon(1e-13));
    CHECK_THROWS_AS(quad::gauss_legendre(0), RangeError);

    const auto two = quad::gauss_legendre(2);
    CHECK(two.nodes[1] == doctest::Approx(1.0 / std::sqrt(3.0)).epsilon(1e-15));
}

TEST_CASE("adaptive integration") {
    const auto r = quad::integrate([](double x) { return std::exp(-x * x); }, 1.0, 12.0);
    CHECK(r.value == doctest::Approx(0.5 * std::sqrt(std::numbers::pi) * std::erfc(1.0))
                         .epsilon(1e-11));
    CHECK(r.error_estimate <= 1e-10);

    const auto empty = quad::integrate([](double) { return 1.0; }, 2.0, 2.0);
    CHECK(empty.value == 0.0);

    // A discontinuous integrand cannot meet 1e-16 with few panels.
    CHECK_THROWS_AS(quad::integrate([](double x) { return x < 0.3 ? 0.0 : 1.0; }, 0.0, 1.0, 1e-16,
                                    64),
                    QuadratureError);
}
