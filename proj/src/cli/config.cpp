#include "protmeas/cli/config.hpp"

#include <array>
#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <numbers>
#include <utility>

#include "protmeas/errors.hpp"
#include "protmeas/oscillator.hpp"
#include "protmeas/two_state.hpp"

namespace protmeas::cli {

namespace {

using nlohmann::json;

constexpr std::array<std::pair<std::string_view, Experiment>, 9> kExperiments{{
    {"sketch", Experiment::sketch},
    {"pointer-trace", Experiment::pointer_trace},
    {"heisenberg-projector", Experiment::heisenberg_projector},
    {"bipartite", Experiment::bipartite},
    {"zeno", Experiment::zeno},
    {"thermal", Experiment::thermal},
    {"two-state", Experiment::two_state},
    {"ergodic", Experiment::ergodic},
    {"correspondence", Experiment::correspondence},
}};

double read_real(const std::string& key, const json& v) {
    if (v.is_number()) {
        return v.get<double>();
    }
    if (v.is_string()) {
        const auto s = v.get<std::string>();
        if (s == "inf" || s == "+inf") {
            return std::numeric_limits<double>::infinity();
        }
        if (s == "-inf") {
            return -std::numeric_limits<double>::infinity();
        }
    }
    throw ConfigError("parameter '" + key + "' must be a real number, got " + v.dump());
}

std::uint64_t read_unsigned(const std::string& key, const json& v) {
    if (v.is_number_unsigned()) {
        return v.get<std::uint64_t>();
    }
    if (v.is_number_integer() && v.get<std::int64_t>() >= 0) {
        return static_cast<std::uint64_t>(v.get<std::int64_t>());
    }
    throw ConfigError("parameter '" + key + "' must be a non-negative integer, got " + v.dump());
}

bool read_bool(const std::string& key, const json& v) {
    if (v.is_boolean()) {
        return v.get<bool>();
    }
    throw ConfigError("parameter '" + key + "' must be true or false, got " + v.dump());
}

using Setter = std::function<void(ExperimentConfig&, const std::string&, const json&)>;

Setter real(double ExperimentConfig::*field) {
    return [field](ExperimentConfig& c, const std::string& k, const json& v) {
        c.*field = read_real(k, v);
    };
}

Setter optional_real(std::optional<double> ExperimentConfig::*field) {
    return [field](ExperimentConfig& c, const std::string& k, const json& v) {
        if (v.is_null()) {
            (c.*field).reset();
        } else {
            c.*field = read_real(k, v);
        }
    };
}

Setter count(std::size_t ExperimentConfig::*field) {
    return [field](ExperimentConfig& c, const std::string& k, const json& v) {
        c.*field = static_cast<std::size_t>(read_unsigned(k, v));
    };
}

const std::map<std::string, Setter, std::less<>>& setters() {
    static const std::map<std::string, Setter, std::less<>> table = {
        {"dim", count(&ExperimentConfig::dim)},
        {"omega", real(&ExperimentConfig::omega)},
        {"zero_point",
         [](ExperimentConfig& c, const std::string& k, const json& v) {
             c.zero_point = read_bool(k, v);
         }},
        {"n", count(&ExperimentConfig::n)},
        {"alpha", real(&ExperimentConfig::alpha)},
        {"delta", real(&ExperimentConfig::delta)},
        {"x0", real(&ExperimentConfig::x0)},
        {"w", real(&ExperimentConfig::w)},
        {"lower", optional_real(&ExperimentConfig::lower)},
        {"upper", optional_real(&ExperimentConfig::upper)},
        {"T", real(&ExperimentConfig::T)},
        {"ramp", real(&ExperimentConfig::ramp)},
        {"steps", count(&ExperimentConfig::steps)},
        {"alpha_compare", real(&ExperimentConfig::alpha_compare)},
        {"x0_compare", real(&ExperimentConfig::x0_compare)},
        {"bin_width", real(&ExperimentConfig::bin_width)},
        {"half_extent", real(&ExperimentConfig::half_extent)},
        {"pointer_points", count(&ExperimentConfig::pointer_points)},
        {"pointer_sigma", real(&ExperimentConfig::pointer_sigma)},
        {"shift_tolerance", real(&ExperimentConfig::shift_tolerance)},
        {"max_doublings", count(&ExperimentConfig::max_doublings)},
        {"sweep", count(&ExperimentConfig::sweep)},
        {"max_protections", count(&ExperimentConfig::max_protections)},
        {"beta", real(&ExperimentConfig::beta)},
        {"amplitude", real(&ExperimentConfig::amplitude)},
        {"samples", count(&ExperimentConfig::samples)},
        {"ensemble", count(&ExperimentConfig::ensemble)},
        {"seed",
         [](ExperimentConfig& c, const std::string& k, const json& v) {
             c.seed = read_unsigned(k, v);
         }},
        {"points", count(&ExperimentConfig::points)},
        {"plots",
         [](ExperimentConfig& c, const std::string& k, const json& v) {
             c.plots = read_bool(k, v);
         }},
        {"out",
         [](ExperimentConfig& c, const std::string& k, const json& v) {
             if (!v.is_string()) {
                 throw ConfigError("parameter '" + k + "' must be a path string");
             }
             c.out = v.get<std::string>();
         }},
    };
    return table;
}

std::string normalize_key(std::string key) {
    for (char& ch : key) {
        if (ch == '-') {
            ch = '_';
        }
    }
    return key;
}

void apply(ExperimentConfig& c, const std::string& raw_key, const json& value) {
    const std::string key = normalize_key(raw_key);
    const auto it = setters().find(key);
    if (it == setters().end()) {
        throw ConfigError("unknown parameter '" + raw_key + "'");
    }
    it->second(c, key, value);
}

ExperimentConfig defaults_for(Experiment e) {
    ExperimentConfig c;
    c.experiment = e;
    switch (e) {
    case Experiment::bipartite:
        c.dim = 32;
        c.T = 25.0;
        c.lower = 1.0;
        c.upper = std::numeric_limits<double>::infinity();
        break;
    case Experiment::zeno:
        c.T = std::numbers::pi;
        c.dim = 16;
        break;
    case Experiment::thermal:
        c.lower = 1.0;
        c.upper = std::numeric_limits<double>::infinity();
        break;
    case Experiment::ergodic:
        c.bin_width = 0.25;
        break;
    case Experiment::correspondence:
        c.n = 50;
        c.dim = 128;
        c.bin_width = 0.5;
        c.half_extent = 12.0;
        break;
    default:
        break;
    }
    return c;
}

void require(bool ok, const std::string& what) {
    if (!ok) {
        throw ConfigError("invalid configuration: " + what);
    }
}

bool finite_positive(double v) { return std::isfinite(v) && v > 0.0; }

} // namespace

std::optional<Experiment> parse_experiment(std::string_view name) {
    for (const auto& [n, e] : kExperiments) {
        if (n == name) {
            return e;
        }
    }
    return std::nullopt;
}

std::string_view experiment_name(Experiment e) {
    for (const auto& [n, x] : kExperiments) {
        if (x == e) {
            return n;
        }
    }
    return "unknown";
}

std::string experiment_list() {
    std::string out;
    for (const auto& [n, e] : kExperiments) {
        if (!out.empty()) {
            out += ", ";
        }
        out += n;
    }
    return out;
}

ExperimentConfig make_config(Experiment experiment, const json& file,
                             const std::map<std::string, std::string>& overrides) {
    ExperimentConfig c = defaults_for(experiment);
    if (!file.is_null()) {
        if (!file.is_object()) {
            throw ConfigError("config file must contain a JSON object");
        }
        for (const auto& [key, value] : file.items()) {
            if (key == "experiment") {
                if (!value.is_string() || parse_experiment(value.get<std::string>()) != experiment) {
                    throw ConfigError("config file names experiment " + value.dump() +
                                      " but '" + std::string(experiment_name(experiment)) +
                                      "' was requested");
                }
                continue;
            }
            apply(c, key, value);
        }
    }
    for (const auto& [key, text] : overrides) {
        json value = json::parse(text, nullptr, false);
        if (value.is_discarded()) {
            value = text;
        }
        apply(c, key, value);
    }
    return c;
}

json read_config_file(const std::filesystem::path& path) {
    std::ifstream f(path);
    if (!f) {
        throw IoError("cannot read config file '" + path.string() + "'");
    }
    json j = json::parse(f, nullptr, false);
    if (j.is_discarded()) {
        throw ConfigError("config file '" + path.string() + "' is not valid JSON");
    }
    return j;
}

void validate(const ExperimentConfig& c) {
    require(c.dim >= 2, "dim must be at least 2");
    require(finite_positive(c.omega), "omega must be positive and finite");
    require(finite_positive(c.T), "T must be positive and finite");
    require(c.ramp >= 0.0 && c.ramp < 0.5, "ramp must lie in [0, 0.5)");
    require(c.steps >= 1, "steps must be at least 1");
    require(std::isfinite(c.x0), "x0 must be finite");
    require(finite_positive(c.w), "w must be positive and finite");
    require(std::isfinite(c.delta), "delta must be finite");
    require(c.points >= 2, "points must be at least 2");
    if (c.lower || c.upper) {
        require(c.lower.has_value() && c.upper.has_value(),
                "lower and upper must be given together");
        require(!std::isnan(*c.lower) && !std::isnan(*c.upper) && *c.lower < *c.upper,
                "lower must be less than upper");
    }
    const OscillatorBasis basis(c.dim, c.omega, c.zero_point);
    auto coherent_fits = [&](double alpha, const char* name) {
        require(std::isfinite(alpha) && alpha >= 0.0, std::string(name) + " must be finite and >= 0");
        require(coherent_truncation_tail(alpha, c.dim) < kCoherentTailLimit,
                std::string(name) + " = " + std::to_string(alpha) + " needs dim >= " +
                    std::to_string(coherent_required_dim(alpha)));
    };

    switch (c.experiment) {
    case Experiment::sketch:
        require(c.n < c.dim, "n must be below dim");
        require(finite_positive(c.bin_width), "bin_width must be positive");
        require(finite_positive(c.half_extent), "half_extent must be positive");
        break;
    case Experiment::pointer_trace:
        coherent_fits(c.alpha, "alpha");
        coherent_fits(c.alpha_compare, "alpha_compare");
        require(std::isfinite(c.x0_compare), "x0_compare must be finite");
        break;
    case Experiment::heisenberg_projector:
        break;
    case Experiment::bipartite:
        require(c.n < c.dim, "n must be below dim");
        require(c.pointer_points >= 8, "pointer_points must be at least 8");
        require(finite_positive(c.pointer_sigma), "pointer_sigma must be positive");
        require(finite_positive(c.shift_tolerance), "shift_tolerance must be positive");
        require(c.sweep >= 1 && c.sweep <= 16, "sweep must lie in [1, 16]");
        break;
    case Experiment::zeno:
        require(c.max_protections >= 4, "max_protections must be at least 4");
        break;
    case Experiment::thermal: {
        require(finite_positive(c.beta), "beta must be positive and finite");
        require(c.sweep >= 1 && c.sweep <= 64, "sweep must lie in [1, 64]");
        require(thermal_truncation_tail(c.beta, basis) <= 1e-10,
                "beta = " + std::to_string(c.beta) + " leaves a Boltzmann tail above 1e-10 at dim " +
                    std::to_string(c.dim));
        const double beta_max = c.beta * static_cast<double>(c.sweep);
        require(beta_max * basis.energy(c.dim - 1) <= 700.0,
                "largest beta times the top level energy exceeds 700");
        break;
    }
    case Experiment::two_state:
        require(c.n < c.dim, "n must be below dim");
        coherent_fits(c.alpha, "alpha");
        break;
    case Experiment::ergodic:
        require(c.seed.has_value(), "seed is required for the ergodic experiment");
        require(finite_positive(c.amplitude), "amplitude must be positive");
        require(c.samples >= 1, "samples must be at least 1");
        require(c.ensemble >= 1, "ensemble must be at least 1");
        require(finite_positive(c.bin_width), "bin_width must be positive");
        break;
    case Experiment::correspondence:
        require(c.n < c.dim && c.dim >= 2 * c.n,
                "correspondence at n = " + std::to_string(c.n) + " needs dim >= " +
                    std::to_string(std::max(2 * c.n, c.n + 1)));
        require(finite_positive(c.bin_width), "bin_width must be positive");
        require(finite_positive(c.half_extent), "half_extent must be positive");
        break;
    }
}

} // namespace protmeas::cli
