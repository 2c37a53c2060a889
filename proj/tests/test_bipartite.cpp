#include <doctest.h>

#include <cmath>

#include "protmeas/errors.hpp"
#include "protmeas/weak_measurement.hpp"

using namespace protmeas;

namespace {

const double kGroundTail = 0.5 * std::erfc(1.0);

BipartiteConfig ground_state_config(double T) {
    const OscillatorBasis basis(32);
    return BipartiteConfig{number_state(basis, 0),
                           projector_matrix({1.0, kInf}, basis).entries,
                           MeasurementSchedule(T, 0.05, 4096)};
}

} // namespace

TEST_CASE("switched-off coupling leaves pointer and system alone") {
    auto cfg = ground_state_config(50.0);
    cfg.coupling_scale = 0.0;
    const auto r = bipartite_protective_run(cfg);
    CHECK(std::abs(r.pointer_shift) < 1e-12);
    CHECK(r.survival_probability == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(r.energy_shift_per_p == 0.0);
}

TEST_CASE("protective limit records the expectation value") {
    const auto r = bipartite_protective_sim(ground_state_config(100.0));
    CHECK(std::abs(r.pointer_shift - kGroundTail) <= 0.05 * kGroundTail);
    CHECK(r.survival_probability >= 0.99);
    CHECK(r.survival_probability <= 1.0 + 1e-10);

    double norm = 0.0;
    for (std::size_t j = 0; j < r.pointer_x.size(); ++j) {
        norm += r.pointer_density_final[j];
    }
    CHECK(norm * (r.pointer_x[1] - r.pointer_x[0]) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(r.system_density.trace().real() - 1.0) < 1e-12);
}

TEST_CASE("energy shift per unit pointer momentum scales as 1/T") {
    const auto a = bipartite_protective_sim(ground_state_config(50.0));
    const auto b = bipartite_protective_sim(ground_state_config(100.0));
    CHECK(b.energy_shift_per_p / a.energy_shift_per_p == doctest::Approx(0.5).epsilon(0.1));
    // Plateau value of <H_int>/p is <P> g = <P> / ((1 - ramp) T).
    CHECK(b.energy_shift_per_p == doctest::Approx(kGroundTail / (0.95 * 100.0)).epsilon(1e-3));
}

TEST_CASE("pointer shift approaches the expectation monotonically in T") {
    double previous_error = 1.0;
    for (double T : {10.0, 20.0, 40.0, 80.0}) {
        const auto r = bipartite_protective_sim(ground_state_config(T));
        const double err = std::abs(r.pointer_shift - kGroundTail);
        CHECK(err <= previous_error + 1e-9);
        previous_error = err;
    }
}

TEST_CASE("a sharp pointer disturbs the system") {
    auto cfg = ground_state_config(10.0);
    cfg.pointer.sigma = 0.05;
    const auto r = bipartite_protective_run(cfg);
    CHECK(r.survival_probability < 0.99);
}

TEST_CASE("bipartite error paths") {
    auto cfg = ground_state_config(10.0);
    cfg.shift_tolerance = 0.0;
    cfg.max_doublings = 1;
    CHECK_THROWS_AS(bipartite_protective_sim(cfg), ConvergenceError);

    auto bad = ground_state_config(10.0);
    bad.observable(0, 1) += 0.5;
    CHECK_THROWS_AS(bipartite_protective_run(bad), ContractError);

    auto grid = ground_state_config(10.0);
    grid.pointer.grid_points = 4;
    CHECK_THROWS_AS(bipartite_protective_run(grid), RangeError);
}
