#include "protmeas/region.hpp"

#include <cmath>
#include <string>

#include "protmeas/errors.hpp"
#include "protmeas/quadrature.hpp"

namespace protmeas {

IntervalRegion::IntervalRegion(double lower, double upper) : lower_(lower), upper_(upper) {
    if (std::isnan(lower) || std::isnan(upper) || !(lower < upper)) {
        throw RangeError("IntervalRegion: need lower < upper, got [" + std::to_string(lower) +
                         ", " + std::to_string(upper) + "]");
    }
}

IntervalRegion IntervalRegion::centered(double center, double width) {
    if (!(width > 0.0)) {
        throw RangeError("IntervalRegion::centered: width must be positive");
    }
    return {center - 0.5 * width, center + 0.5 * width};
}

bool IntervalRegion::bounded() const noexcept {
    return std::isfinite(lower_) && std::isfinite(upper_);
}

std::vector<IntervalRegion> bin_partition(double width, double half_extent) {
    if (!(width > 0.0) || !(half_extent > 0.0)) {
        throw RangeError("bin_partition: width and extent must be positive");
    }
    std::vector<IntervalRegion> bins;
    const double span = 2.0 * half_extent;
    const auto count = static_cast<std::size_t>(std::ceil(span / width - 1e-9));
    auto edge = [&](std::size_t i) {
        return i == count ? half_extent : -half_extent + width * static_cast<double>(i);
    };
    for (std::size_t i = 0; i < count; ++i) {
        bins.emplace_back(edge(i), edge(i + 1));
    }
    return bins;
}

std::vector<IntervalRegion> bin_partition_with_tails(double width, double half_extent) {
    std::vector<IntervalRegion> bins;
    bins.emplace_back(-kInf, -half_extent);
    for (const auto& b : bin_partition(width, half_extent)) {
        bins.push_back(b);
    }
    bins.emplace_back(half_extent, kInf);
    return bins;
}

std::pair<double, double> effective_limits(const IntervalRegion& region,
                                           const OscillatorBasis& basis) {
    // Beyond the outermost classical turning point plus 10 widths the
    // Gaussian factor is below e^{-50} for every retained level.
    const double cutoff = std::sqrt(2.0 * static_cast<double>(basis.dim()) + 1.0) + 10.0;
    const double lo = std::isfinite(region.lower()) ? region.lower() : -cutoff;
    const double hi = std::isfinite(region.upper()) ? region.upper() : cutoff;
    return {std::max(lo, -cutoff - 10.0), std::min(hi, cutoff + 10.0)};
}

namespace {

Eigen::MatrixXd gram_on_panels(double a, double b, std::size_t panels, std::size_t dim) {
    const auto nodes = quad::composite_nodes(a, b, panels);
    const Eigen::MatrixXd phi = hermite_function_table(nodes.x, dim);
    const Eigen::Map<const Eigen::VectorXd> w(nodes.w.data(),
                                              static_cast<Eigen::Index>(nodes.w.size()));
    return phi.transpose() * w.asDiagonal() * phi;
}

} // namespace

ProjectorMatrix projector_matrix(const IntervalRegion& region, const OscillatorBasis& basis,
                                 double tolerance) {
    const auto n = static_cast<Eigen::Index>(basis.dim());
    const auto [a, b] = effective_limits(region, basis);
    Eigen::MatrixXd gram = Eigen::MatrixXd::Zero(n, n);
    if (a < b) {
        // Start near one panel per unit length; phi_n varies on a scale ~ 1/sqrt(2n).
        std::size_t panels = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(b - a)));
        Eigen::MatrixXd coarse = gram_on_panels(a, b, panels, basis.dim());
        constexpr std::size_t kMaxPanels = std::size_t{1} << 20;
        double change = 0.0;
        for (;;) {
            if (panels >= kMaxPanels) {
                throw QuadratureError("projector_matrix: entries not converged to " +
                                          std::to_string(tolerance) + " (achieved " +
                                          std::to_string(change) + ")",
                                      change);
            }
            panels *= 2;
            Eigen::MatrixXd fine = gram_on_panels(a, b, panels, basis.dim());
            change = (fine - coarse).cwiseAbs().maxCoeff();
            coarse = std::move(fine);
            if (change <= tolerance) {
                break;
            }
        }
        gram = 0.5 * (coarse + coarse.transpose());
    }
    return ProjectorMatrix{gram.cast<Complex>(), region, basis};
}

OperatorMatrix heisenberg_projector(const ProjectorMatrix& P, double t) {
    const auto n = P.entries.rows();
    const double omega = P.basis.omega();
    OperatorMatrix out(n, n);
    for (Eigen::Index m = 0; m < n; ++m) {
        for (Eigen::Index k = 0; k < n; ++k) {
            out(m, k) = std::polar(1.0, -static_cast<double>(m - k) * omega * t) * P.entries(m, k);
        }
    }
    return out;
}

Complex averaged_phase_factor(int level_gap, double omega, double T) {
    if (level_gap == 0) {
        return 1.0;
    }
    const double phase = static_cast<double>(level_gap) * omega * T;
    // (1 - e^{-i phase}) / (i phase)
    return (Complex(1.0, 0.0) - std::polar(1.0, -phase)) / Complex(0.0, phase);
}

OperatorMatrix time_averaged_projector(const ProjectorMatrix& P, double T) {
    if (!(T > 0.0)) {
        throw RangeError("time_averaged_projector: T must be positive");
    }
    const auto n = P.entries.rows();
    OperatorMatrix out(n, n);
    for (Eigen::Index m = 0; m < n; ++m) {
        for (Eigen::Index k = 0; k < n; ++k) {
            out(m, k) = averaged_phase_factor(static_cast<int>(m - k), P.basis.omega(), T) *
                        P.entries(m, k);
        }
    }
    return out;
}

} // namespace protmeas
