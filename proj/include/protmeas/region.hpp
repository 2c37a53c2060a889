#pragma once

#include <limits>
#include <vector>

#include "protmeas/oscillator.hpp"

namespace protmeas {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Closed real interval [lower, upper] in oscillator length units; either end may be infinite.
class IntervalRegion {
public:
    IntervalRegion(double lower, double upper);

    static IntervalRegion whole_line() { return {-kInf, kInf}; }
    /// [center - width/2, center + width/2].
    static IntervalRegion centered(double center, double width);

    double lower() const noexcept { return lower_; }
    double upper() const noexcept { return upper_; }
    bool contains(double x) const noexcept { return x >= lower_ && x <= upper_; }
    bool bounded() const noexcept;

    bool operator==(const IntervalRegion&) const = default;

private:
    double lower_;
    double upper_;
};

/// Contiguous bins of width `width` tiling [-half_extent, half_extent]. The
/// last bin is shortened if the width does not divide the span.
std::vector<IntervalRegion> bin_partition(double width, double half_extent);

/// Same bins plus the two semi-infinite tails, a partition of the whole line.
std::vector<IntervalRegion> bin_partition_with_tails(double width, double half_extent);

inline constexpr double kProjectorTolerance = 1e-10;

/// <m|P_V|n> for an interval V.
struct ProjectorMatrix {
    OperatorMatrix entries;
    IntervalRegion region;
    OscillatorBasis basis;
};

/// Integration limits actually used for `region` on `basis`; infinite ends are
/// replaced by the point past which every phi_n (n < dim) is negligible.
std::pair<double, double> effective_limits(const IntervalRegion& region,
                                           const OscillatorBasis& basis);

/// Entries by composite Gauss-Legendre with panel doubling until every entry
/// moves by less than `tolerance`. Throws QuadratureError beyond 2^20 panels.
ProjectorMatrix projector_matrix(const IntervalRegion& region, const OscillatorBasis& basis,
                                 double tolerance = kProjectorTolerance);

/// Heisenberg-picture projector: entries exp(-i (m - n) omega t) <m|P|n>.
OperatorMatrix heisenberg_projector(const ProjectorMatrix& P, double t);

/// (1/T) int_0^T of the Heisenberg projector, in closed form.
OperatorMatrix time_averaged_projector(const ProjectorMatrix& P, double T);

/// (1/T) int_0^T exp(-i k omega t) dt.
Complex averaged_phase_factor(int level_gap, double omega, double T);

} // namespace protmeas
