#include <doctest.h>

#include <cmath>
#include <random>

#include "protmeas/errors.hpp"
#include "protmeas/two_state.hpp"
#include "test_support.hpp"

using namespace protmeas;
using protmeas::testing::random_dual;
using protmeas::testing::random_hermitian;
using protmeas::testing::random_state;

namespace {

OperatorMatrix number_operator(std::size_t dim) {
    OperatorMatrix N = OperatorMatrix::Zero(static_cast<Eigen::Index>(dim),
                                            static_cast<Eigen::Index>(dim));
    for (std::size_t n = 0; n < dim; ++n) {
        N(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n)) = static_cast<double>(n);
    }
    return N;
}

// Direct summation of the untruncated Boltzmann series.
double boltzmann_mean_number(double x) {
    double num = 0.0;
    double den = 0.0;
    for (int n = 0; n < 5000; ++n) {
        const double w = std::exp(-n * x);
        num += n * w;
        den += w;
    }
    return num / den;
}

} // namespace

TEST_CASE("thermal density") {
    SUBCASE("low temperature collapses to the ground state") {
        const OscillatorBasis basis(16);
        const auto rho = thermal_density(50.0, basis);
        CHECK(rho.entries(0, 0).real() == doctest::Approx(1.0).epsilon(1e-15));
        CHECK(std::abs(rho.entries(1, 1)) < 1e-21);
    }

    SUBCASE("mean occupation is Bose-Einstein") {
        const OscillatorBasis basis(64);
        const auto rho = thermal_density(1.0, basis);
        const double mean = trace_product(number_operator(64), rho.entries).real();
        CHECK(std::abs(mean - 1.0 / (std::exp(1.0) - 1.0)) < 1e-8);
        CHECK(std::abs(mean - boltzmann_mean_number(1.0)) < 1e-8);
        CHECK(std::abs(rho.entries.trace() - 1.0) < 1e-14);
        CHECK(rho.entries.isApprox(rho.entries.adjoint()));
    }

    SUBCASE("truncation tail is enforced") {
        const OscillatorBasis basis(16);
        CHECK(thermal_truncation_tail(0.1, basis) > 1e-10);
        CHECK_THROWS_AS(thermal_density(0.1, basis), TruncationError);
        try {
            thermal_density(0.1, basis);
        } catch (const TruncationError& e) {
            const OscillatorBasis enough(e.required_dim());
            CHECK(thermal_truncation_tail(0.1, enough) <= 1e-10);
            CHECK_NOTHROW(thermal_density(0.1, enough));
        }
        CHECK_THROWS_AS(thermal_density(0.0, basis), RangeError);
        CHECK_THROWS_AS(thermal_density(-1.0, basis), RangeError);
    }
}

TEST_CASE("purification reproduces diagonal thermal averages") {
    const OscillatorBasis basis(64);
    const double beta = 1.0;
    const auto rho = thermal_density(beta, basis);
    const auto psi = thermal_purification(beta, basis);
    std::mt19937_64 rng(99);
    std::normal_distribution<double> g(0.0, 1.0);
    for (int trial = 0; trial < 20; ++trial) {
        OperatorMatrix A = OperatorMatrix::Zero(64, 64);
        for (Eigen::Index n = 0; n < 64; ++n) {
            A(n, n) = g(rng);
        }
        CHECK(std::abs(expectation(A, psi) - trace_product(A, rho.entries).real()) < 1e-12);
    }

    // Off-diagonal observables see coherences the mixed state lacks.
    const OperatorMatrix P = projector_matrix({1.0, kInf}, basis).entries;
    const double mixed = thermal_pointer_reading(P, rho);
    const double pure = expectation(P, psi);
    MESSAGE("P[1,inf): thermal " << mixed << ", purification " << pure);
    CHECK(std::abs(mixed - pure) > 1e-3);
    // Exact thermal position density is Gaussian with variance coth(beta/2)/2.
    const double var = 0.5 / std::tanh(0.5 * beta);
    CHECK(mixed == doctest::Approx(0.5 * std::erfc(1.0 / std::sqrt(2.0 * var))).epsilon(1e-9));
}

TEST_CASE("two-state density") {
    const OscillatorBasis basis(32);
    std::mt19937_64 rng(5);
    const double T = 20.0;

    SUBCASE("trace formula equals the weak value") {
        for (int trial = 0; trial < 100; ++trial) {
            const auto pre = random_state(rng, basis);
            const auto post = random_dual(rng, basis);
            const auto A = random_hermitian(rng, 32);
            const double t = std::uniform_real_distribution<double>(0.0, T)(rng);
            const auto rho = two_state_density(pre, post, t, T);
            const Complex a = weak_value_from_density(A, rho);
            const Complex b = weak_value(A, pre, post, t, T);
            CHECK(std::abs(a - b) <= 1e-12 * std::max(1.0, std::abs(b)));
            CHECK(std::abs(rho.entries.trace() - 1.0) < 1e-12);
        }
    }

    SUBCASE("trivial post-selection gives an ordinary pure state") {
        const auto pre = random_state(rng, basis);
        const auto post = dual(evolve(pre, T));
        for (double t : {0.0, 7.0, T}) {
            const auto rho = two_state_density(pre, post, t, T).entries;
            CHECK(hermiticity_defect(rho) < 1e-12);
            CHECK((rho * rho - rho).norm() < 1e-12);
        }
    }

    SUBCASE("coherent post-selection is not Hermitian") {
        const OscillatorBasis big(64);
        const auto rho =
            two_state_density(number_state(big, 0), dual(coherent_state(big, 2.5)), 3.0, 100.0);
        CHECK(hermiticity_defect(rho.entries) > 0.1);
        CHECK((rho.entries * rho.entries - rho.entries).norm() < 1e-10);
    }

    SUBCASE("orthogonal and malformed inputs") {
        CHECK_THROWS_AS(
            two_state_density(number_state(basis, 0), dual(number_state(basis, 3)), 1.0, T),
            OrthogonalPostSelectionError);
        CHECK_THROWS_AS(two_state_density(number_state(basis, 0), dual(number_state(basis, 0)),
                                          T + 1.0, T),
                        RangeError);
        const OscillatorBasis other(16);
        CHECK_THROWS_AS(
            two_state_density(number_state(basis, 0), dual(number_state(other, 0)), 1.0, T),
            ContractError);
    }
}

TEST_CASE("two-state density obeys the von Neumann equation") {
    const OscillatorBasis basis(16);
    const OperatorMatrix H = basis.hamiltonian();
    std::mt19937_64 rng(17);
    const auto pre = random_state(rng, basis);
    const auto post = random_dual(rng, basis);
    const double T = 5.0;

    std::vector<double> residuals;
    for (double dt = 0.02; residuals.size() < 5; dt *= 0.5) {
        residuals.push_back(von_neumann_residual(pre, post, H, 2.0, T, dt));
    }
    for (std::size_t k = 1; k < residuals.size(); ++k) {
        CHECK(residuals[k] / residuals[k - 1] == doctest::Approx(0.25).epsilon(0.2));
    }

    SUBCASE("general Hermitian generator") {
        const auto G = random_hermitian(rng, 16);
        const double r1 = von_neumann_residual(pre, post, G, 1.0, T, 1e-3);
        const double r2 = von_neumann_residual(pre, post, G, 1.0, T, 5e-4);
        CHECK(r2 / r1 == doctest::Approx(0.25).epsilon(0.2));
    }

    SUBCASE("stationary states have no residual") {
        const auto n3 = number_state(basis, 3);
        CHECK(von_neumann_residual(n3, dual(n3), H, 2.0, T, 1e-3) < 1e-12);
    }

    CHECK_THROWS_AS(von_neumann_residual(pre, post, H, 2.0, T, 0.0), RangeError);
    OperatorMatrix bad = H;
    bad(0, 1) = 1.0;
    CHECK_THROWS_AS(two_state_density_with(bad, pre, post, 1.0, T), ContractError);
}

TEST_CASE("canonical two-state ensemble") {
    SUBCASE("high-temperature limit is maximally mixed") {
        const OscillatorBasis basis(16);
        const auto rho = two_state_canonical(1e-12, basis);
        CHECK(rho.distance_from_maximally_mixed() < 1e-10);
        CHECK(rho.trace() == doctest::Approx(1.0).epsilon(1e-14));
    }

    SUBCASE("forward coordinate is thermal, backward depends on truncation") {
        const double beta = 1.0;
        std::vector<double> forward;
        std::vector<double> backward;
        for (std::size_t dim : {std::size_t{32}, std::size_t{64}}) {
            const OscillatorBasis basis(dim);
            const auto rho = two_state_canonical(beta, basis);
            const OperatorMatrix H = basis.hamiltonian();
            forward.push_back(rho.weak_value(H).real());
            backward.push_back(rho.backward_weak_value(H).real());
            const double thermal = trace_product(H, thermal_density(beta, basis).entries).real();
            CHECK(std::abs(forward.back() - thermal) < 1e-10);
            CHECK(std::abs(rho.weak_value(H).imag()) == 0.0);
        }
        MESSAGE("H weak value forward " << forward[0] << " / " << forward[1] << ", backward "
                                        << backward[0] << " / " << backward[1]);
        CHECK(std::abs(forward[0] - forward[1]) < 1e-10);
        CHECK(backward[1] - backward[0] > 10.0);
    }

    SUBCASE("energy weak value at dim 16 and 32") {
        const OscillatorBasis small(16);
        const OscillatorBasis large(32);
        const auto a = two_state_canonical(1.0, small);
        const auto b = two_state_canonical(1.0, large);
        const double fa = a.weak_value(small.hamiltonian()).real();
        const double fb = b.weak_value(large.hamiltonian()).real();
        const double ba = a.backward_weak_value(small.hamiltonian()).real();
        const double bb = b.backward_weak_value(large.hamiltonian()).real();
        MESSAGE("dim 16: forward " << fa << ", backward " << ba << "; dim 32: forward " << fb
                                   << ", backward " << bb);
        CHECK(std::abs(fa - fb) < 1e-5);
        CHECK(std::abs(ba - bb) > 10.0);
    }

    SUBCASE("overflow guard") {
        const OscillatorBasis basis(64);
        CHECK_THROWS_AS(two_state_canonical(20.0, basis), RangeError);
        CHECK_NOTHROW(two_state_canonical(10.0, basis));
        CHECK_THROWS_AS(two_state_canonical(0.0, basis), RangeError);
    }
}

TEST_CASE("Boltzmann sampling") {
    const OscillatorBasis basis(64);
    std::mt19937_64 rng(3);
    const double beta = 1.0;
    constexpr int draws = 200000;
    double mean = 0.0;
    for (int i = 0; i < draws; ++i) {
        mean += static_cast<double>(sample_boltzmann_level(beta, basis, rng));
    }
    mean /= draws;
    const double expected = 1.0 / (std::exp(1.0) - 1.0);
    // Variance of the Bose-Einstein occupation is n (n + 1).
    const double se = std::sqrt(expected * (expected + 1.0) / draws);
    CHECK(std::abs(mean - expected) < 5.0 * se);
}
