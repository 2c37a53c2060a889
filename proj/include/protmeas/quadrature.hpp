#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace protmeas::quad {

/// Gauss-Legendre nodes and weights on [-1, 1].
struct GaussLegendreRule {
    std::vector<double> nodes;
    std::vector<double> weights;

    std::size_t size() const noexcept { return nodes.size(); }
};

/// Builds an n-point rule by Newton iteration on the Legendre recurrence.
GaussLegendreRule gauss_legendre(std::size_t n);

/// Shared 20-point rule used by the composite integrators.
const GaussLegendreRule& default_rule();

/// Nodes and weights of a composite rule: `panels` equal panels on [a, b].
struct CompositeNodes {
    std::vector<double> x;
    std::vector<double> w;
};

CompositeNodes composite_nodes(double a, double b, std::size_t panels,
                               const GaussLegendreRule& rule = default_rule());

struct QuadratureResult {
    double value = 0.0;
    double error_estimate = 0.0;
    std::size_t panels = 0;
};

/// Composite Gauss-Legendre with panel doubling until two successive
/// resolutions agree to `abs_tol`. Throws QuadratureError past `max_panels`.
QuadratureResult integrate(const std::function<double(double)>& f, double a, double b,
                           double abs_tol = 1e-10, std::size_t max_panels = std::size_t{1} << 20);

} // namespace protmeas::quad
