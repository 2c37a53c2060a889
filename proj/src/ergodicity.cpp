#include "protmeas/ergodicity.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "protmeas/errors.hpp"
#include "protmeas/parallel.hpp"

namespace protmeas {

ClassicalEnsemble::ClassicalEnsemble(std::vector<double> amps, std::vector<double> phs,
                                     double w, std::vector<double> wts)
    : amplitudes(std::move(amps)), phases(std::move(phs)), weights(std::move(wts)), omega(w) {
    if (amplitudes.empty()) {
        throw RangeError("ClassicalEnsemble: needs at least one member");
    }
    if (phases.size() != amplitudes.size()) {
        throw RangeError("ClassicalEnsemble: amplitude and phase counts differ");
    }
    if (weights.empty()) {
        weights.assign(amplitudes.size(), 1.0 / static_cast<double>(amplitudes.size()));
    }
    if (weights.size() != amplitudes.size()) {
        throw RangeError("ClassicalEnsemble: weight count differs from member count");
    }
    double total = 0.0;
    for (std::size_t i = 0; i < amplitudes.size(); ++i) {
        if (!(amplitudes[i] > 0.0)) {
            throw RangeError("ClassicalEnsemble: amplitudes must be positive");
        }
        if (weights[i] < 0.0) {
            throw RangeError("ClassicalEnsemble: weights must be non-negative");
        }
        total += weights[i];
    }
    if (!(total > 0.0)) {
        throw RangeError("ClassicalEnsemble: weights sum to zero");
    }
    for (double& x : weights) {
        x /= total;
    }
}

ClassicalEnsemble uniform_phase_ensemble(std::size_t size, double amplitude, double omega,
                                         std::uint64_t seed) {
    constexpr std::size_t kChunk = 4096;
    const std::size_t chunks = (size + kChunk - 1) / kChunk;
    std::vector<double> phases(size);
    parallel_for(chunks, [&](std::size_t c) {
        std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                          static_cast<std::uint32_t>(c), static_cast<std::uint32_t>(c >> 32)};
        std::mt19937_64 rng(seq);
        std::uniform_real_distribution<double> dist(0.0, 2.0 * std::numbers::pi);
        const std::size_t end = std::min(size, (c + 1) * kChunk);
        for (std::size_t i = c * kChunk; i < end; ++i) {
            phases[i] = dist(rng);
        }
    });
    return ClassicalEnsemble(std::vector<double>(size, amplitude), std::move(phases), omega);
}

double classical_time_average(double amplitude, double phase, double omega,
                              const IntervalRegion& region, double T, std::size_t n_samples) {
    if (n_samples < 1) {
        throw RangeError("classical_time_average: n_samples must be >= 1");
    }
    std::size_t inside = 0;
    for (std::size_t j = 1; j <= n_samples; ++j) {
        const double t = T * static_cast<double>(j) / static_cast<double>(n_samples);
        if (region.contains(amplitude * std::cos(omega * t + phase))) {
            ++inside;
        }
    }
    return static_cast<double>(inside) / static_cast<double>(n_samples);
}

double classical_ensemble_average(const ClassicalEnsemble& ensemble, const IntervalRegion& region,
                                  double t) {
    double sum = 0.0;
    for (std::size_t i = 0; i < ensemble.size(); ++i) {
        const double x = ensemble.amplitudes[i] * std::cos(ensemble.omega * t + ensemble.phases[i]);
        if (region.contains(x)) {
            sum += ensemble.weights[i];
        }
    }
    return sum;
}

double ensemble_standard_error(const ClassicalEnsemble& ensemble, double fraction) {
    double w2 = 0.0;
    for (double w : ensemble.weights) {
        w2 += w * w;
    }
    // Kish effective sample size 1 / sum w^2 for normalized weights.
    return std::sqrt(std::max(0.0, fraction * (1.0 - fraction)) * w2);
}

double classical_dwell_fraction(double amplitude, const IntervalRegion& region) {
    if (!(amplitude > 0.0)) {
        throw RangeError("classical_dwell_fraction: amplitude must be positive");
    }
    const double lo = std::max(region.lower(), -amplitude);
    const double hi = std::min(region.upper(), amplitude);
    if (!(lo < hi)) {
        return 0.0;
    }
    return (std::asin(hi / amplitude) - std::asin(lo / amplitude)) / std::numbers::pi;
}

double incommensurate_duration(double omega, std::size_t periods) {
    // Golden-ratio offset keeps T / period irrational.
    const double period = 2.0 * std::numbers::pi / omega;
    return period * (static_cast<double>(periods) + std::numbers::phi - 1.0);
}

DwellReport ergodic_comparison(double amplitude, double omega, const IntervalRegion& region,
                               std::size_t n_samples, std::size_t ensemble_size,
                               std::uint64_t seed) {
    DwellReport report;
    const double T = incommensurate_duration(omega, std::max<std::size_t>(1000, n_samples / 64));
    report.time_average = classical_time_average(amplitude, 0.0, omega, region, T, n_samples);
    const auto ensemble = uniform_phase_ensemble(ensemble_size, amplitude, omega, seed);
    report.ensemble_average = classical_ensemble_average(ensemble, region, 0.0);
    report.analytic_fraction = classical_dwell_fraction(amplitude, region);
    const double p = report.analytic_fraction;
    const double se_time =
        std::sqrt(std::max(0.0, p * (1.0 - p)) / static_cast<double>(n_samples));
    const double se_ens = ensemble_standard_error(ensemble, p);
    report.statistical_error = std::hypot(se_time, se_ens);
    return report;
}

DwellReport correspondence_check(std::size_t n, const IntervalRegion& region,
                                 const OscillatorBasis& basis) {
    if (n >= basis.dim() || basis.dim() < 2 * n) {
        throw TruncationError("correspondence_check: level " + std::to_string(n) +
                                  " needs dim >= " + std::to_string(std::max(2 * n, n + 1)) +
                                  ", got " + std::to_string(basis.dim()),
                              std::max(2 * n, n + 1));
    }
    const ProjectorMatrix P = projector_matrix(region, basis);
    const auto idx = static_cast<Eigen::Index>(n);
    DwellReport report;
    report.quantum_fraction = P.entries(idx, idx).real();
    const double amplitude = std::sqrt(2.0 * static_cast<double>(n) + 1.0);
    report.analytic_fraction = classical_dwell_fraction(amplitude, region);
    report.time_average = report.analytic_fraction;
    report.ensemble_average = report.analytic_fraction;
    return report;
}

} // namespace protmeas
