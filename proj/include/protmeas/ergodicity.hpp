#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "protmeas/oscillator.hpp"
#include "protmeas/region.hpp"

namespace protmeas {

/// Members x_j(t) = A_j cos(omega t + phi_j) with weights realizing the measure.
struct ClassicalEnsemble {
    std::vector<double> amplitudes;
    std::vector<double> phases;
    std::vector<double> weights;
    double omega = 1.0;

    ClassicalEnsemble(std::vector<double> amplitudes, std::vector<double> phases, double omega,
                      std::vector<double> weights = {});

    std::size_t size() const noexcept { return amplitudes.size(); }
};

/// N members with a common amplitude and phases uniform on [0, 2pi). Members
/// are drawn in fixed-size chunks, each from its own stream seeded by
/// (seed, chunk index), so the result does not depend on the thread count.
ClassicalEnsemble uniform_phase_ensemble(std::size_t size, double amplitude, double omega,
                                         std::uint64_t seed);

struct DwellReport {
    double time_average = 0.0;
    double ensemble_average = 0.0;
    double analytic_fraction = 0.0;
    std::optional<double> quantum_fraction;
    /// Combined one-sigma error of (time average - ensemble average).
    double statistical_error = 0.0;
};

/// Fraction of the sample times jT/n, j = 1..n, at which A cos(omega t + phi) lies in region.
double classical_time_average(double amplitude, double phase, double omega,
                              const IntervalRegion& region, double T, std::size_t n_samples);

/// Weighted fraction of members inside region at time t.
double classical_ensemble_average(const ClassicalEnsemble& ensemble, const IntervalRegion& region,
                                  double t);

/// Binomial standard error of an ensemble fraction using the effective sample size.
double ensemble_standard_error(const ClassicalEnsemble& ensemble, double fraction);

/// Fraction of a period spent in region by an oscillator of the given amplitude.
double classical_dwell_fraction(double amplitude, const IntervalRegion& region);

/// Period multiple used by the ergodic experiments: irrational so that the
/// sample times equidistribute over the phase.
double incommensurate_duration(double omega, std::size_t periods);

/// Time vs ensemble vs analytic dwell for one region.
DwellReport ergodic_comparison(double amplitude, double omega, const IntervalRegion& region,
                               std::size_t n_samples, std::size_t ensemble_size,
                               std::uint64_t seed);

/// <n|P_region|n> against the classical dwell fraction at the energy-matched
/// amplitude sqrt(2n + 1). Requires dim >= 2n.
DwellReport correspondence_check(std::size_t n, const IntervalRegion& region,
                                 const OscillatorBasis& basis);

} // namespace protmeas
