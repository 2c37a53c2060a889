#include <doctest.h>

#include <cmath>
#include <numbers>

#include "protmeas/errors.hpp"
#include "protmeas/weak_measurement.hpp"

using namespace protmeas;

namespace {

StateVector even_superposition(const OscillatorBasis& basis) {
    ComplexVector v = ComplexVector::Zero(static_cast<Eigen::Index>(basis.dim()));
    v(0) = 1.0;
    v(1) = 1.0;
    return StateVector(basis, v);
}

} // namespace

TEST_CASE("single protection matches the two-level closed form") {
    for (bool zero_point : {true, false}) {
        const OscillatorBasis basis(16, 1.0, zero_point);
        for (double T : {std::numbers::pi, 1.0, 2.5}) {
            const auto r = zeno_protect_sim({even_superposition(basis), 1, T});
            const double expected = std::pow(std::cos(0.5 * T), 2);
            CHECK(std::abs(r.survival_probability - expected) < 1e-14);
        }
    }
}

TEST_CASE("frequent protection freezes the state") {
    const OscillatorBasis basis(16);
    const double T = std::numbers::pi;
    double previous = 0.0;
    for (std::size_t n = 4; n <= 256; n *= 2) {
        const auto r = zeno_protect_sim({even_superposition(basis), n, T});
        CHECK(r.survival_probability > previous);
        previous = r.survival_probability;
        CHECK(r.survival_history.size() == n);
        CHECK(r.protection_times.back() == doctest::Approx(T));
        // Oracle: each interval keeps cos^2(omega tau / 2).
        const double oracle = std::pow(std::cos(0.5 * T / static_cast<double>(n)), 2.0 * n);
        CHECK(r.survival_probability == doctest::Approx(oracle).epsilon(1e-12));
    }
    CHECK(previous > 0.99);
}

TEST_CASE("loss scales as 1/n") {
    const OscillatorBasis basis(16);
    const double T = std::numbers::pi;
    // Fit C as the largest n (1 - s(n)) on the ladder, then check the bound and
    // that the product has settled near its limit (omega T)^2 / 4.
    std::vector<double> loss_times_n;
    for (std::size_t n = 4; n <= 256; n *= 2) {
        const auto r = zeno_protect_sim({even_superposition(basis), n, T});
        loss_times_n.push_back(static_cast<double>(n) * (1.0 - r.survival_probability));
    }
    const double C = *std::max_element(loss_times_n.begin(), loss_times_n.end());
    std::size_t i = 0;
    for (std::size_t n = 4; n <= 256; n *= 2, ++i) {
        CHECK(loss_times_n[i] / static_cast<double>(n) <= C / static_cast<double>(n));
    }
    CHECK(loss_times_n.back() == doctest::Approx(T * T / 4.0).epsilon(0.01));
}

TEST_CASE("Heisenberg-picture operator jumps at each protection") {
    const OscillatorBasis basis(16);
    const auto psi = even_superposition(basis);
    const auto P = projector_matrix({0.0, kInf}, basis).entries;
    ZenoConfig cfg{psi, 8, std::numbers::pi};
    cfg.measurement = ZenoMeasurement{P, 0.0};
    cfg.record_snapshots = true;
    const auto r = zeno_protect_sim(cfg);
    REQUIRE(r.snapshots.size() == 8);
    const double static_value = expectation(P, psi);
    for (std::size_t k = 0; k < 8; ++k) {
        // Right after a protection the state is psi again.
        CHECK(r.expectation_after[k] == doctest::Approx(static_value).epsilon(1e-12));
        CHECK(r.jump_norms[k] > 1e-3);
        CHECK((r.snapshots[k].before - r.snapshots[k].before.adjoint()).cwiseAbs().maxCoeff() <
              1e-12);
    }
    // Just before a protection the state has rotated towards the other half line.
    CHECK(std::abs(r.expectation_before[0] - static_value) > 1e-3);

    SUBCASE("coupling to the measured operator enters the free evolution") {
        ZenoConfig coupled = cfg;
        coupled.measurement->strength = 0.3;
        const auto c = zeno_protect_sim(coupled);
        CHECK(c.survival_probability != doctest::Approx(r.survival_probability));
        CHECK(c.survival_probability <= 1.0);
    }
}

TEST_CASE("zeno error paths") {
    const OscillatorBasis basis(8);
    CHECK_THROWS_AS(zeno_protect_sim({even_superposition(basis), 0, 1.0}), RangeError);
    CHECK_THROWS_AS(zeno_protect_sim({even_superposition(basis), 4, 0.0}), RangeError);
    ZenoConfig cfg{even_superposition(basis), 4, 1.0};
    OperatorMatrix A = OperatorMatrix::Zero(8, 8);
    A(0, 1) = 1.0;
    cfg.measurement = ZenoMeasurement{A, 0.1};
    CHECK_THROWS_AS(zeno_protect_sim(cfg), ContractError);
}
