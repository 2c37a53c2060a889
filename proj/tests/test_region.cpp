#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include <Eigen/Eigenvalues>

#include "protmeas/errors.hpp"
#include "protmeas/region.hpp"
#include "test_support.hpp"

using namespace protmeas;

TEST_CASE("interval regions") {
    CHECK_THROWS_AS(IntervalRegion(1.0, 1.0), RangeError);
    CHECK_THROWS_AS(IntervalRegion(2.0, 1.0), RangeError);
    CHECK_THROWS_AS(IntervalRegion::centered(0.0, 0.0), RangeError);
    const auto c = IntervalRegion::centered(1.0, 0.05);
    CHECK(c.lower() == doctest::Approx(0.975));
    CHECK(c.upper() == doctest::Approx(1.025));
    CHECK(IntervalRegion::whole_line().contains(1e300));
    CHECK_FALSE(IntervalRegion::whole_line().bounded());

    const auto bins = bin_partition(0.1, 6.0);
    CHECK(bins.size() == 120);
    CHECK(bins.front().lower() == -6.0);
    CHECK(bins.back().upper() == 6.0);
    for (std::size_t i = 1; i < bins.size(); ++i) {
        CHECK(bins[i].lower() == bins[i - 1].upper());
    }
    const auto tails = bin_partition_with_tails(0.5, 4.0);
    CHECK(tails.size() == 18);
    CHECK(std::isinf(tails.front().lower()));
    CHECK(std::isinf(tails.back().upper()));
}

TEST_CASE("projector matrix") {
    const OscillatorBasis basis(64);

    SUBCASE("whole line is the identity") {
        const auto P = projector_matrix(IntervalRegion::whole_line(), basis);
        const OperatorMatrix id = OperatorMatrix::Identity(64, 64);
        CHECK((P.entries - id).cwiseAbs().maxCoeff() < 1e-8);
    }

    SUBCASE("half line ground-state entry") {
        const auto P = projector_matrix({0.0, kInf}, basis);
        CHECK(P.entries(0, 0).real() == doctest::Approx(0.5).epsilon(1e-12));
    }

    SUBCASE("tail entry against an independent Simpson oracle") {
        const auto P = projector_matrix({1.0, kInf}, basis);
        const double oracle = protmeas::testing::simpson(
            [](double x) { return std::exp(-x * x) / std::sqrt(std::numbers::pi); }, 1.0, 12.0);
        CHECK(oracle == doctest::Approx(0.5 * std::erfc(1.0)).epsilon(1e-10));
        CHECK(std::abs(P.entries(0, 0).real() - oracle) < 1e-10);
        CHECK(P.entries(0, 0).real() == doctest::Approx(0.078649603).epsilon(1e-8));
    }

    SUBCASE("off-diagonal entries against the explicit Hermite formula") {
        const IntervalRegion region(-0.4, 1.7);
        const auto P = projector_matrix(region, basis);
        for (unsigned m : {0u, 3u, 7u}) {
            for (unsigned n : {1u, 4u, 9u}) {
                const double oracle = protmeas::testing::simpson(
                    [&](double x) {
                        return protmeas::testing::hermite_function_explicit(m, x) *
                               protmeas::testing::hermite_function_explicit(n, x);
                    },
                    region.lower(), region.upper());
                CHECK(std::abs(P.entries(m, n).real() - oracle) < 1e-10);
            }
        }
    }

    SUBCASE("Hermitian with spectrum in [0, 1]") {
        for (const IntervalRegion& r :
             {IntervalRegion(0.975, 1.025), IntervalRegion(-2.0, 3.0), IntervalRegion(1.0, kInf)}) {
            const auto P = projector_matrix(r, basis);
            CHECK((P.entries - P.entries.adjoint()).cwiseAbs().maxCoeff() < 1e-10);
            Eigen::SelfAdjointEigenSolver<OperatorMatrix> eig(P.entries);
            CHECK(eig.eigenvalues().minCoeff() >= -1e-8);
            CHECK(eig.eigenvalues().maxCoeff() <= 1.0 + 1e-8);
        }
    }

    SUBCASE("regions beyond every retained level vanish") {
        const auto P = projector_matrix({500.0, 600.0}, basis);
        CHECK(P.entries.cwiseAbs().maxCoeff() == 0.0);
    }

    SUBCASE("partition sums to the identity") {
        OperatorMatrix sum = OperatorMatrix::Zero(64, 64);
        for (const auto& r : bin_partition_with_tails(0.5, 6.0)) {
            sum += projector_matrix(r, basis).entries;
        }
        CHECK((sum - OperatorMatrix::Identity(64, 64)).cwiseAbs().maxCoeff() < 1e-8);
    }
}

TEST_CASE("Heisenberg projector") {
    const OscillatorBasis basis(32, 1.0);
    const auto P = projector_matrix({0.5, 2.0}, basis);

    CHECK((heisenberg_projector(P, 0.0) - P.entries).cwiseAbs().maxCoeff() == 0.0);
    const auto period = heisenberg_projector(P, 2.0 * std::numbers::pi);
    CHECK((period - P.entries).cwiseAbs().maxCoeff() < 1e-12);

    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> ut(0.0, 200.0);
    Eigen::SelfAdjointEigenSolver<OperatorMatrix> ref(P.entries);
    for (int i = 0; i < 10; ++i) {
        const double t = ut(rng);
        const auto H = heisenberg_projector(P, t);
        for (Eigen::Index n = 0; n < 32; ++n) {
            CHECK(H(n, n) == P.entries(n, n));
        }
        CHECK((H - H.adjoint()).cwiseAbs().maxCoeff() < 1e-12);
        Eigen::SelfAdjointEigenSolver<OperatorMatrix> eig(H);
        CHECK((eig.eigenvalues() - ref.eigenvalues()).cwiseAbs().maxCoeff() < 1e-8);
    }

    SUBCASE("stationary expectation equals the diagonal entry") {
        // <n(t)|P|n(t)> is constant, so its long-time average is <n|P|n>.
        for (Eigen::Index n : {0, 5, 17}) {
            ComplexVector e = ComplexVector::Zero(32);
            e(n) = 1.0;
            for (double t : {0.0, 3.3, 91.0}) {
                const Complex v = e.dot(heisenberg_projector(P, t) * e);
                CHECK(std::abs(v - P.entries(n, n)) < 1e-12);
            }
        }
    }
}

TEST_CASE("time-averaged projector") {
    const OscillatorBasis basis(32, 1.0);
    const auto P = projector_matrix({1.0, kInf}, basis);
    CHECK_THROWS_AS(time_averaged_projector(P, 0.0), RangeError);

    for (double T : {10.0, 100.0}) {
        const auto avg = time_averaged_projector(P, T);
        CHECK((avg - avg.adjoint()).cwiseAbs().maxCoeff() < 1e-12);
        for (Eigen::Index m = 0; m < 20; ++m) {
            CHECK(avg(m, m) == P.entries(m, m));
            for (Eigen::Index n = 0; n < 20; ++n) {
                if (m == n) {
                    continue;
                }
                const double bound = 2.0 * std::abs(P.entries(m, n)) /
                                     (std::abs(static_cast<double>(m - n)) * T);
                CHECK(std::abs(avg(m, n)) <= bound + 1e-15);
            }
        }
    }

    SUBCASE("closed form matches direct quadrature of the phase") {
        const double T = 7.0;
        for (int gap : {1, -2, 5}) {
            const double re = protmeas::testing::simpson(
                [&](double t) { return std::cos(gap * t); }, 0.0, T) / T;
            const double im = protmeas::testing::simpson(
                [&](double t) { return -std::sin(gap * t); }, 0.0, T) / T;
            const Complex f = averaged_phase_factor(gap, 1.0, T);
            CHECK(std::abs(f - Complex(re, im)) < 1e-12);
        }
    }

    SUBCASE("T = 100, levels (0, 1)") {
        const auto avg = time_averaged_projector(P, 100.0);
        CHECK(std::abs(avg(0, 1)) <= 0.02 * std::abs(P.entries(0, 1)));
    }
}
