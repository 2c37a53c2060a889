#include "protmeas/quadrature.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "protmeas/errors.hpp"

namespace protmeas::quad {

GaussLegendreRule gauss_legendre(std::size_t n) {
    if (n == 0) {
        throw RangeError("gauss_legendre: rule needs at least one node");
    }
    GaussLegendreRule rule;
    rule.nodes.assign(n, 0.0);
    rule.weights.assign(n, 0.0);
    const std::size_t half = (n + 1) / 2;
    for (std::size_t i = 0; i < half; ++i) {
        // Tricomi initial guess for the i-th root, refined by Newton.
        double z = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) /
                            (static_cast<double>(n) + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0;
            double p1 = 0.0;
            for (std::size_t k = 1; k <= n; ++k) {
                const double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p2) / static_cast<double>(k);
            }
            dp = static_cast<double>(n) * (z * p0 - p1) / (z * z - 1.0);
            const double dz = p0 / dp;
            z -= dz;
            if (std::abs(dz) < 1e-15) {
                break;
            }
        }
        const double w = 2.0 / ((1.0 - z * z) * dp * dp);
        rule.nodes[i] = -z;
        rule.nodes[n - 1 - i] = z;
        rule.weights[i] = w;
        rule.weights[n - 1 - i] = w;
    }
    return rule;
}

const GaussLegendreRule& default_rule() {
    static const GaussLegendreRule rule = gauss_legendre(20);
    return rule;
}

CompositeNodes composite_nodes(double a, double b, std::size_t panels,
                               const GaussLegendreRule& rule) {
    CompositeNodes out;
    out.x.reserve(panels * rule.size());
    out.w.reserve(panels * rule.size());
    const double h = (b - a) / static_cast<double>(panels);
    for (std::size_t p = 0; p < panels; ++p) {
        const double lo = a + h * static_cast<double>(p);
        const double mid = lo + 0.5 * h;
        for (std::size_t k = 0; k < rule.size(); ++k) {
            out.x.push_back(mid + 0.5 * h * rule.nodes[k]);
            out.w.push_back(0.5 * h * rule.weights[k]);
        }
    }
    return out;
}

namespace {

double composite_sum(const std::function<double(double)>& f, double a, double b,
                     std::size_t panels) {
    const auto nodes = composite_nodes(a, b, panels);
    double sum = 0.0;
    for (std::size_t i = 0; i < nodes.x.size(); ++i) {
        sum += nodes.w[i] * f(nodes.x[i]);
    }
    return sum;
}

} // namespace

QuadratureResult integrate(const std::function<double(double)>& f, double a, double b,
                           double abs_tol, std::size_t max_panels) {
    if (!(a < b)) {
        return {0.0, 0.0, 0};
    }
    std::size_t panels = 1;
    double coarse = composite_sum(f, a, b, panels);
    double err = 0.0;
    while (panels < max_panels) {
        panels *= 2;
        const double fine = composite_sum(f, a, b, panels);
        err = std::abs(fine - coarse);
        if (err <= abs_tol) {
            return {fine, err, panels};
        }
        coarse = fine;
    }
    throw QuadratureError("integrate: no convergence after " + std::to_string(max_panels) +
                              " panels",
                          err);
}

} // namespace protmeas::quad
