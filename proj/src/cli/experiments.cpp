#include "protmeas/cli/experiments.hpp"

#include <cmath>
#include <iostream>
#include <numbers>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "protmeas/ergodicity.hpp"
#include "protmeas/errors.hpp"
#include "protmeas/parallel.hpp"
#include "protmeas/region.hpp"
#include "protmeas/two_state.hpp"
#include "protmeas/weak_measurement.hpp"

namespace protmeas::cli {

namespace {

OscillatorBasis basis_of(const ExperimentConfig& c) {
    return OscillatorBasis(c.dim, c.omega, c.zero_point);
}

IntervalRegion measured_region(const ExperimentConfig& c) {
    if (c.lower && c.upper) {
        return {*c.lower, *c.upper};
    }
    return IntervalRegion::centered(c.x0, c.w);
}

std::vector<IntervalRegion> scan_regions(const ExperimentConfig& c, double half_extent) {
    if (c.lower && c.upper) {
        return {IntervalRegion(*c.lower, *c.upper)};
    }
    return bin_partition(c.bin_width, half_extent);
}

std::vector<double> linspace(double a, double b, std::size_t count) {
    std::vector<double> out(count);
    for (std::size_t i = 0; i < count; ++i) {
        out[i] = i + 1 == count ? b : a + (b - a) * static_cast<double>(i) / (count - 1.0);
    }
    return out;
}

void add_region_columns(ResultTable& table, const std::vector<IntervalRegion>& regions) {
    std::vector<double> lo;
    std::vector<double> hi;
    for (const auto& r : regions) {
        lo.push_back(r.lower());
        hi.push_back(r.upper());
    }
    table.add_column("lower", "length", std::move(lo));
    table.add_column("upper", "length", std::move(hi));
}

ExperimentOutput sketch(const ExperimentConfig& c) {
    const auto basis = basis_of(c);
    const auto psi = number_state(basis, c.n);
    const auto bins = bin_partition(c.bin_width, c.half_extent);
    const auto probs = parallel_map<double>(bins.size(), [&](std::size_t i) {
        return expectation(projector_matrix(bins[i], basis).entries, psi);
    });
    std::vector<double> mid;
    std::vector<double> density;
    for (std::size_t i = 0; i < bins.size(); ++i) {
        const double width = bins[i].upper() - bins[i].lower();
        mid.push_back(0.5 * (bins[i].lower() + bins[i].upper()));
        density.push_back(probs[i] / width);
    }
    ExperimentOutput out{"sketch", {}, {}};
    add_region_columns(out.table, bins);
    out.table.add_column("x_mid", "length", std::move(mid));
    out.table.add_column("probability", "1", probs);
    out.table.add_column("density", "1/length", std::move(density));
    out.plots.push_back({"sketch_density.svg",
                         {fmt::format("Bin probabilities of level {}", c.n),
                          "x_mid",
                          {{"density", "probability / width", ""}},
                          "x",
                          "density"}});
    return out;
}

ExperimentOutput pointer_trace_experiment(const ExperimentConfig& c) {
    const auto basis = basis_of(c);
    const MeasurementSchedule schedule(c.T, c.ramp, c.steps);
    const auto pre = number_state(basis, c.n);
    const auto P = projector_matrix(measured_region(c), basis).entries;
    const auto P_cmp = projector_matrix(IntervalRegion::centered(c.x0_compare, c.w), basis).entries;
    const auto post = dual(coherent_state(basis, std::polar(c.alpha, c.delta)));
    const auto post_cmp = dual(coherent_state(basis, std::polar(c.alpha_compare, c.delta)));

    const auto trivial = pointer_trace(schedule, pre, std::nullopt, P);
    const auto with_alpha = pointer_trace(schedule, pre, post, P);
    const auto with_alpha_cmp = pointer_trace(schedule, pre, post_cmp, P);
    const auto with_x0_cmp = pointer_trace(schedule, pre, post, P_cmp);

    auto weak = [](const PointerTrace& tr) {
        std::vector<Complex> v(tr.weak_re.size());
        for (std::size_t i = 0; i < v.size(); ++i) {
            v[i] = {tr.weak_re[i], tr.weak_im[i]};
        }
        return v;
    };
    std::vector<double> closed(trivial.times.size());
    for (std::size_t i = 0; i < closed.size(); ++i) {
        closed[i] = closed_form_pvi_weak(c.alpha, c.delta, c.x0, c.omega, c.T,
                                         std::min(trivial.times[i], c.T));
    }

    ExperimentOutput out{"pointer-trace", {}, {}};
    auto& t = out.table;
    t.add_column("t", "time", trivial.times);
    t.add_column("reading_trivial", "1", trivial.readings);
    t.add_column("reading_alpha", "1", with_alpha.readings);
    t.add_column("reading_alpha_compare", "1", with_alpha_cmp.readings);
    t.add_column("reading_x0_compare", "1", with_x0_cmp.readings);
    t.add_complex_column("weak_alpha", "1", weak(with_alpha));
    t.add_complex_column("weak_alpha_compare", "1", weak(with_alpha_cmp));
    t.add_column("closed_form_alpha", "1/length", std::move(closed));

    out.plots.push_back({"pointer_trace_readings.svg",
                         {fmt::format("Pointer reading, x0 = {}, alpha = {}", c.x0, c.alpha),
                          "t",
                          {{"reading_trivial", "trivial post-selection", "#c0392b"},
                           {"reading_alpha", fmt::format("alpha = {}", c.alpha), "#1f4e9c"}},
                          "t",
                          "pointer reading"}});
    out.plots.push_back({"pointer_trace_weak_values.svg",
                         {"Real part of the weak value",
                          "t",
                          {{"weak_alpha_re", fmt::format("alpha = {}", c.alpha), "#1f4e9c"},
                           {"weak_alpha_compare_re", fmt::format("alpha = {}", c.alpha_compare),
                            "#c0392b"}},
                          "t",
                          "Re P_w"}});
    out.plots.push_back({"pointer_trace_x0.svg",
                         {fmt::format("Pointer reading, alpha = {}", c.alpha),
                          "t",
                          {{"reading_alpha", fmt::format("x0 = {}", c.x0), "#1f4e9c"},
                           {"reading_x0_compare", fmt::format("x0 = {}", c.x0_compare),
                            "#c0392b"}},
                          "t",
                          "pointer reading"}});
    return out;
}

ExperimentOutput heisenberg_projector_experiment(const ExperimentConfig& c) {
    const auto basis = basis_of(c);
    const auto P = projector_matrix(measured_region(c), basis);
    const OperatorMatrix avg = time_averaged_projector(P, c.T);
    const auto limit = static_cast<Eigen::Index>(std::min<std::size_t>(c.dim, 20));
    std::vector<double> ms;
    std::vector<double> ns;
    std::vector<double> entry;
    std::vector<double> averaged;
    std::vector<double> bound;
    for (Eigen::Index m = 0; m < limit; ++m) {
        for (Eigen::Index n = m + 1; n < limit; ++n) {
            ms.push_back(static_cast<double>(m));
            ns.push_back(static_cast<double>(n));
            entry.push_back(std::abs(P.entries(m, n)));
            averaged.push_back(std::abs(avg(m, n)));
            bound.push_back(2.0 * std::abs(P.entries(m, n)) /
                            (static_cast<double>(n - m) * c.omega * c.T));
        }
    }
    ExperimentOutput out{"heisenberg-projector", {}, {}};
    out.table.add_column("m", "1", std::move(ms));
    out.table.add_column("n", "1", std::move(ns));
    out.table.add_column("abs_entry", "1", std::move(entry));
    out.table.add_column("abs_time_averaged", "1", std::move(averaged));
    out.table.add_column("dephasing_bound", "1", std::move(bound));
    out.plots.push_back({"heisenberg_projector.svg",
                         {fmt::format("Time-averaged projector, T = {}", c.T),
                          "",
                          {{"abs_entry", "|<m|P|n>|", ""},
                           {"abs_time_averaged", "time averaged", ""},
                           {"dephasing_bound", "bound", ""}},
                          "pair index (m < n)",
                          "magnitude"}});
    return out;
}

ExperimentOutput bipartite_experiment(const ExperimentConfig& c) {
    const auto basis = basis_of(c);
    const auto pre = number_state(basis, c.n);
    const auto A = projector_matrix(measured_region(c), basis).entries;
    const double expected = expectation(A, pre);
    const auto results = parallel_map<BipartiteSimResult>(c.sweep, [&](std::size_t k) {
        const double T = c.T * std::ldexp(1.0, static_cast<int>(k));
        BipartiteConfig cfg{pre, A, MeasurementSchedule(T, c.ramp, c.steps)};
        cfg.pointer.grid_points = c.pointer_points;
        cfg.pointer.sigma = c.pointer_sigma;
        cfg.shift_tolerance = c.shift_tolerance;
        cfg.max_doublings = c.max_doublings;
        return bipartite_protective_sim(cfg);
    });
    std::vector<double> Ts;
    std::vector<double> shift;
    std::vector<double> rel;
    std::vector<double> survival;
    std::vector<double> energy;
    std::vector<double> energy_T;
    std::vector<double> steps;
    for (std::size_t k = 0; k < results.size(); ++k) {
        const double T = c.T * std::ldexp(1.0, static_cast<int>(k));
        Ts.push_back(T);
        shift.push_back(results[k].pointer_shift);
        rel.push_back(std::abs(results[k].pointer_shift - expected) / std::abs(expected));
        survival.push_back(results[k].survival_probability);
        energy.push_back(results[k].energy_shift_per_p);
        energy_T.push_back(results[k].energy_shift_per_p * T);
        steps.push_back(static_cast<double>(results[k].steps_used));
    }
    ExperimentOutput out{"bipartite", {}, {}};
    auto& t = out.table;
    t.add_column("T", "time", std::move(Ts));
    t.add_column("pointer_shift", "length", std::move(shift));
    t.add_column("expectation", "1", std::vector<double>(results.size(), expected));
    t.add_column("relative_error", "1", std::move(rel));
    t.add_column("survival", "1", std::move(survival));
    t.add_column("energy_shift_per_p", "energy/momentum", std::move(energy));
    t.add_column("energy_shift_per_p_times_T", "1", std::move(energy_T));
    t.add_column("steps", "1", std::move(steps));
    out.plots.push_back({"bipartite_shift.svg",
                         {"Protective pointer shift",
                          "T",
                          {{"pointer_shift", "simulated shift", "#1f4e9c"},
                           {"expectation", "<P>", "#c0392b"}},
                          "T",
                          "pointer shift"}});
    return out;
}

ExperimentOutput zeno_experiment(const ExperimentConfig& c) {
    const auto basis = basis_of(c);
    ComplexVector v = ComplexVector::Zero(static_cast<Eigen::Index>(c.dim));
    v(0) = 1.0;
    v(1) = 1.0;
    const StateVector psi(basis, v);
    std::vector<std::size_t> counts;
    for (std::size_t n = 1; n <= c.max_protections; n *= 2) {
        counts.push_back(n);
    }
    const auto results = parallel_map<ZenoResult>(counts.size(), [&](std::size_t i) {
        ZenoConfig cfg{psi, counts[i], c.T, std::nullopt, false};
        return zeno_protect_sim(cfg);
    });
    std::vector<double> ns;
    std::vector<double> survival;
    std::vector<double> oracle;
    std::vector<double> loss_n;
    for (std::size_t i = 0; i < counts.size(); ++i) {
        const double n = static_cast<double>(counts[i]);
        ns.push_back(n);
        survival.push_back(results[i].survival_probability);
        oracle.push_back(std::pow(std::cos(0.5 * c.omega * c.T / n), 2.0 * n));
        loss_n.push_back(n * (1.0 - results[i].survival_probability));
    }
    ExperimentOutput out{"zeno", {}, {}};
    out.table.add_column("protections", "1", std::move(ns));
    out.table.add_column("survival", "1", std::move(survival));
    out.table.add_column("two_level_oracle", "1", std::move(oracle));
    out.table.add_column("loss_times_protections", "1", std::move(loss_n));
    out.plots.push_back({"zeno_survival.svg",
                         {"Survival under repeated protection",
                          "protections",
                          {{"survival", "survival", "#1f4e9c"}},
                          "protections",
                          "survival probability"}});
    return out;
}

ExperimentOutput thermal_experiment(const ExperimentConfig& c) {
    const auto basis = basis_of(c);
    const auto P = projector_matrix(measured_region(c), basis).entries;
    const OperatorMatrix H = basis.hamiltonian();
    OperatorMatrix N = OperatorMatrix::Zero(H.rows(), H.cols());
    for (Eigen::Index k = 0; k < N.rows(); ++k) {
        N(k, k) = static_cast<double>(k);
    }
    ExperimentOutput out{"thermal", {}, {}};
    std::vector<double> betas;
    std::vector<double> mean;
    std::vector<double> bose;
    std::vector<double> thermal;
    std::vector<double> pure;
    std::vector<double> forward;
    std::vector<double> backward;
    std::vector<double> tail;
    for (std::size_t k = 0; k < c.sweep; ++k) {
        const double beta = c.beta * static_cast<double>(k + 1);
        const auto rho = thermal_density(beta, basis);
        const auto psi = thermal_purification(beta, basis);
        const auto canonical = two_state_canonical(beta, basis);
        betas.push_back(beta);
        mean.push_back(trace_product(N, rho.entries).real());
        bose.push_back(1.0 / std::expm1(beta * c.omega));
        thermal.push_back(thermal_pointer_reading(P, rho));
        pure.push_back(expectation(P, psi));
        forward.push_back(canonical.weak_value(H).real());
        backward.push_back(canonical.backward_weak_value(H).real());
        tail.push_back(thermal_truncation_tail(beta, basis));
    }
    auto& t = out.table;
    t.add_column("beta", "1/energy", std::move(betas));
    t.add_column("mean_number", "1", std::move(mean));
    t.add_column("bose_einstein", "1", std::move(bose));
    t.add_column("reading_thermal", "1", std::move(thermal));
    t.add_column("reading_purification", "1", std::move(pure));
    t.add_column("canonical_forward_energy", "energy", std::move(forward));
    t.add_column("canonical_backward_energy", "energy", std::move(backward));
    t.add_column("truncation_tail", "1", std::move(tail));
    out.plots.push_back({"thermal_readings.svg",
                         {"Thermal protective readings",
                          "beta",
                          {{"reading_thermal", "bath on", "#1f4e9c"},
                           {"reading_purification", "purification", "#c0392b"}},
                          "beta",
                          "reading"}});
    return out;
}

ExperimentOutput two_state_experiment(const ExperimentConfig& c) {
    const auto basis = basis_of(c);
    const auto pre = number_state(basis, c.n);
    const auto post = dual(coherent_state(basis, std::polar(c.alpha, c.delta)));
    const auto P = projector_matrix(measured_region(c), basis).entries;
    const auto times = linspace(0.0, c.T, c.points);
    std::vector<Complex> from_density;
    std::vector<Complex> direct;
    std::vector<double> defect;
    std::vector<double> idempotency;
    for (double t : times) {
        const auto rho = two_state_density(pre, post, t, c.T);
        from_density.push_back(weak_value_from_density(P, rho));
        direct.push_back(weak_value(P, pre, post, t, c.T));
        defect.push_back(hermiticity_defect(rho.entries));
        idempotency.push_back((rho.entries * rho.entries - rho.entries).norm());
    }
    ExperimentOutput out{"two-state", {}, {}};
    auto& t = out.table;
    t.add_column("t", "time", times);
    t.add_complex_column("weak_trace", "1", from_density);
    t.add_complex_column("weak_direct", "1", direct);
    t.add_column("hermiticity_defect", "1", std::move(defect));
    t.add_column("idempotency_defect", "1", std::move(idempotency));
    out.plots.push_back({"two_state_weak_value.svg",
                         {"Weak value from the two-state density",
                          "t",
                          {{"weak_trace_re", "Re", "#1f4e9c"}, {"weak_trace_im", "Im", "#c0392b"}},
                          "t",
                          "weak value"}});
    return out;
}

ExperimentOutput ergodic_experiment(const ExperimentConfig& c) {
    const auto regions = scan_regions(c, c.amplitude);
    std::vector<DwellReport> reports;
    for (const auto& r : regions) {
        reports.push_back(ergodic_comparison(c.amplitude, c.omega, r, c.samples, c.ensemble, *c.seed));
    }
    std::vector<double> time_avg;
    std::vector<double> ens_avg;
    std::vector<double> analytic;
    std::vector<double> err;
    std::vector<double> z;
    for (const auto& r : reports) {
        time_avg.push_back(r.time_average);
        ens_avg.push_back(r.ensemble_average);
        analytic.push_back(r.analytic_fraction);
        err.push_back(r.statistical_error);
        z.push_back(r.statistical_error > 0.0
                        ? (r.time_average - r.ensemble_average) / r.statistical_error
                        : 0.0);
    }
    ExperimentOutput out{"ergodic", {}, {}};
    add_region_columns(out.table, regions);
    out.table.add_column("time_average", "1", std::move(time_avg));
    out.table.add_column("ensemble_average", "1", std::move(ens_avg));
    out.table.add_column("analytic_dwell", "1", std::move(analytic));
    out.table.add_column("standard_error", "1", std::move(err));
    out.table.add_column("z_score", "1", std::move(z));
    out.plots.push_back({"ergodic_dwell.svg",
                         {"Time versus ensemble dwell fractions",
                          "lower",
                          {{"time_average", "time average", "#1f4e9c"},
                           {"ensemble_average", "ensemble average", "#c0392b"},
                           {"analytic_dwell", "arcsine law", "#2e8b57"}},
                          "bin lower edge",
                          "dwell fraction"}});
    return out;
}

ExperimentOutput correspondence_experiment(const ExperimentConfig& c) {
    const auto basis = basis_of(c);
    const auto regions = scan_regions(c, c.half_extent);
    const auto reports = parallel_map<DwellReport>(regions.size(), [&](std::size_t i) {
        return correspondence_check(c.n, regions[i], basis);
    });
    std::vector<double> mid;
    std::vector<double> quantum;
    std::vector<double> classical;
    for (std::size_t i = 0; i < regions.size(); ++i) {
        mid.push_back(0.5 * (regions[i].lower() + regions[i].upper()));
        quantum.push_back(*reports[i].quantum_fraction);
        classical.push_back(reports[i].analytic_fraction);
    }
    ExperimentOutput out{"correspondence", {}, {}};
    add_region_columns(out.table, regions);
    out.table.add_column("x_mid", "length", std::move(mid));
    out.table.add_column("quantum", "1", std::move(quantum));
    out.table.add_column("classical", "1", std::move(classical));
    out.plots.push_back({"correspondence.svg",
                         {fmt::format("Level {} against the classical dwell", c.n),
                          "x_mid",
                          {{"quantum", "<n|P|n>", "#1f4e9c"},
                           {"classical", "classical dwell", "#c0392b"}},
                          "bin centre",
                          "probability"}});
    return out;
}

} // namespace

ExperimentOutput run(const ExperimentConfig& config) {
    validate(config);
    switch (config.experiment) {
    case Experiment::sketch: return sketch(config);
    case Experiment::pointer_trace: return pointer_trace_experiment(config);
    case Experiment::heisenberg_projector: return heisenberg_projector_experiment(config);
    case Experiment::bipartite: return bipartite_experiment(config);
    case Experiment::zeno: return zeno_experiment(config);
    case Experiment::thermal: return thermal_experiment(config);
    case Experiment::two_state: return two_state_experiment(config);
    case Experiment::ergodic: return ergodic_experiment(config);
    case Experiment::correspondence: return correspondence_experiment(config);
    }
    throw ConfigError("unhandled experiment");
}

void write_outputs(const ExperimentOutput& output, const ExperimentConfig& config) {
    std::error_code ec;
    std::filesystem::create_directories(config.out, ec);
    if (ec || !std::filesystem::is_directory(config.out)) {
        throw IoError("cannot create output directory '" + config.out.string() + "'");
    }
    output.table.write_csv(config.out / (output.name + ".csv"));
    if (config.plots) {
        for (const auto& plot : output.plots) {
            emit_plot(output.table, plot.spec, config.out / plot.file_name);
        }
    }
}

int run_cli(int argc, char** argv) {
    CLI::App app{"Protective and weak measurement experiments on the harmonic oscillator"};
    std::string experiment;
    std::string config_path;
    std::string out_dir;
    app.add_option("experiment", experiment, "One of: " + experiment_list())->required();
    app.add_option("--config", config_path, "JSON file with experiment parameters");
    app.add_option("--out", out_dir, "Output directory for CSV and SVG files")->required();
    app.allow_extras();
    app.footer("Any parameter may be given as --name value; flags override the config file.");
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    const auto kind = parse_experiment(experiment);
    if (!kind) {
        std::cerr << "protmeas: unknown experiment '" << experiment << "' (expected one of "
                  << experiment_list() << ")\n";
        return 2;
    }
    const std::string context = "protmeas " + experiment + ": ";
    try {
        std::map<std::string, std::string> overrides;
        const auto extras = app.remaining();
        for (std::size_t i = 0; i < extras.size(); ++i) {
            const std::string& arg = extras[i];
            if (arg.rfind("--", 0) != 0 || arg.size() <= 2) {
                throw ConfigError("unexpected argument '" + arg + "'");
            }
            const auto eq = arg.find('=');
            if (eq != std::string::npos) {
                overrides[arg.substr(2, eq - 2)] = arg.substr(eq + 1);
            } else if (i + 1 < extras.size()) {
                overrides[arg.substr(2)] = extras[++i];
            } else {
                throw ConfigError("parameter '" + arg + "' has no value");
            }
        }
        const nlohmann::json file =
            config_path.empty() ? nlohmann::json() : read_config_file(config_path);
        ExperimentConfig config = make_config(*kind, file, overrides);
        config.out = out_dir;
        const ExperimentOutput output = run(config);
        write_outputs(output, config);
        std::cout << "wrote " << (config.out / (output.name + ".csv")).string() << '\n';
        return 0;
    } catch (const ConfigError& e) {
        std::cerr << context << e.what() << '\n';
        return 2;
    } catch (const IoError& e) {
        std::cerr << context << e.what() << '\n';
        return 4;
    } catch (const std::exception& e) {
        std::cerr << context << e.what() << '\n';
        return 3;
    }
}

} // namespace protmeas::cli
