#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>

#include <json.hpp>

namespace protmeas::cli {

enum class Experiment {
    sketch,
    pointer_trace,
    heisenberg_projector,
    bipartite,
    zeno,
    thermal,
    two_state,
    ergodic,
    correspondence,
};

std::optional<Experiment> parse_experiment(std::string_view name);
std::string_view experiment_name(Experiment e);
std::string experiment_list();

struct ExperimentConfig {
    Experiment experiment = Experiment::sketch;

    // Oscillator and states.
    std::size_t dim = 64;
    double omega = 1.0;
    bool zero_point = true;
    std::size_t n = 0;
    double alpha = 2.5;
    double delta = 0.0;

    // Measured region: an interval of width w centred on x0, or explicit limits.
    double x0 = 1.0;
    double w = 0.05;
    std::optional<double> lower;
    std::optional<double> upper;

    // Schedule.
    double T = 100.0;
    double ramp = 0.05;
    std::size_t steps = 4096;

    // Comparison traces.
    double alpha_compare = 1.0;
    double x0_compare = 1.5;

    // Bin scans.
    double bin_width = 0.1;
    double half_extent = 4.0;

    // Bipartite pointer.
    std::size_t pointer_points = 512;
    double pointer_sigma = 10.0;
    double shift_tolerance = 1e-4;
    std::size_t max_doublings = 6;
    std::size_t sweep = 4;

    // Zeno.
    std::size_t max_protections = 256;

    // Thermal.
    double beta = 1.0;

    // Ergodic.
    double amplitude = 1.0;
    std::size_t samples = 100000;
    std::size_t ensemble = 100000;
    std::optional<std::uint64_t> seed;

    // Sampled points for time grids.
    std::size_t points = 401;

    bool plots = true;
    std::filesystem::path out = ".";
};

/// Builds a config from a JSON object and flag overrides (flags win).
/// Override values are parsed as JSON when possible and kept as strings
/// otherwise; "inf" and "-inf" are accepted for real parameters. Unknown keys
/// and type mismatches throw ConfigError naming the key.
ExperimentConfig make_config(Experiment experiment, const nlohmann::json& file,
                             const std::map<std::string, std::string>& overrides);

nlohmann::json read_config_file(const std::filesystem::path& path);

/// Checks every precondition of the selected experiment; throws ConfigError
/// naming the violated one.
void validate(const ExperimentConfig& config);

} // namespace protmeas::cli
