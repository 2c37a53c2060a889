#include "protmeas/cli/svg.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "protmeas/errors.hpp"

namespace protmeas::cli {

namespace {

constexpr double kWidth = 720.0;
constexpr double kHeight = 440.0;
constexpr double kLeft = 80.0;
constexpr double kRight = 170.0;
constexpr double kTop = 40.0;
constexpr double kBottom = 60.0;
constexpr const char* kPalette[] = {"#1f4e9c", "#c0392b", "#2e8b57", "#8e44ad", "#d35400"};

std::string escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
        case '&': out += "&amp;"; break;
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '"': out += "&quot;"; break;
        default: out += c;
        }
    }
    return out;
}

struct Range {
    double lo = 0.0;
    double hi = 1.0;
};

Range finite_range(const std::vector<const std::vector<double>*>& columns) {
    double lo = INFINITY;
    double hi = -INFINITY;
    for (const auto* col : columns) {
        for (double v : *col) {
            if (std::isfinite(v)) {
                lo = std::min(lo, v);
                hi = std::max(hi, v);
            }
        }
    }
    if (!std::isfinite(lo)) {
        return {};
    }
    if (hi - lo < 1e-300) {
        const double pad = std::max(1.0, std::abs(lo)) * 0.5;
        return {lo - pad, hi + pad};
    }
    const double pad = 0.04 * (hi - lo);
    return {lo - pad, hi + pad};
}

std::string num(double v) { return fmt::format("{:.2f}", v); }

std::string tick_label(double v) { return fmt::format("{:.4g}", std::abs(v) < 1e-12 ? 0.0 : v); }

} // namespace

std::string render_svg(const ResultTable& table, const PlotSpec& spec) {
    if (spec.series.empty()) {
        throw ContractError("emit_plot: no series selected");
    }
    std::vector<double> index;
    const std::vector<double>* xs = nullptr;
    if (spec.x_column.empty()) {
        index.resize(table.rows());
        for (std::size_t i = 0; i < index.size(); ++i) {
            index[i] = static_cast<double>(i);
        }
        xs = &index;
    } else {
        xs = &table.column(spec.x_column);
    }
    std::vector<const std::vector<double>*> ys;
    for (const auto& s : spec.series) {
        ys.push_back(&table.column(s.column));
    }

    const Range xr = finite_range({xs});
    const Range yr = finite_range(ys);
    const double pw = kWidth - kLeft - kRight;
    const double ph = kHeight - kTop - kBottom;
    auto px = [&](double x) { return kLeft + (x - xr.lo) / (xr.hi - xr.lo) * pw; };
    auto py = [&](double y) { return kTop + ph - (y - yr.lo) / (yr.hi - yr.lo) * ph; };

    std::string out;
    out += fmt::format(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{}\" height=\"{}\" viewBox=\"0 0 {} {}\" "
        "font-family=\"sans-serif\" font-size=\"12\">\n",
        kWidth, kHeight, kWidth, kHeight);
    out += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out += fmt::format("<text x=\"{}\" y=\"24\" text-anchor=\"middle\" font-size=\"15\">{}</text>\n",
                       num(kLeft + pw / 2), escape(spec.title));
    out += fmt::format("<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"none\" "
                       "stroke=\"black\"/>\n",
                       num(kLeft), num(kTop), num(pw), num(ph));

    constexpr int kTicks = 5;
    for (int k = 0; k <= kTicks; ++k) {
        const double fx = xr.lo + (xr.hi - xr.lo) * k / kTicks;
        const double fy = yr.lo + (yr.hi - yr.lo) * k / kTicks;
        out += fmt::format("<line x1=\"{0}\" y1=\"{1}\" x2=\"{0}\" y2=\"{2}\" stroke=\"black\"/>\n",
                           num(px(fx)), num(kTop + ph), num(kTop + ph + 5));
        out += fmt::format("<text x=\"{}\" y=\"{}\" text-anchor=\"middle\">{}</text>\n",
                           num(px(fx)), num(kTop + ph + 20), tick_label(fx));
        out += fmt::format("<line x1=\"{0}\" y1=\"{1}\" x2=\"{2}\" y2=\"{1}\" stroke=\"black\"/>\n",
                           num(kLeft - 5), num(py(fy)), num(kLeft));
        out += fmt::format("<text x=\"{}\" y=\"{}\" text-anchor=\"end\">{}</text>\n",
                           num(kLeft - 8), num(py(fy) + 4), tick_label(fy));
    }
    out += fmt::format("<text x=\"{}\" y=\"{}\" text-anchor=\"middle\">{}</text>\n",
                       num(kLeft + pw / 2), num(kHeight - 15), escape(spec.x_label));
    out += fmt::format("<text x=\"18\" y=\"{0}\" text-anchor=\"middle\" "
                       "transform=\"rotate(-90 18 {0})\">{1}</text>\n",
                       num(kTop + ph / 2), escape(spec.y_label));

    for (std::size_t s = 0; s < spec.series.size(); ++s) {
        const auto& series = spec.series[s];
        const std::string color =
            series.color.empty() ? kPalette[s % std::size(kPalette)] : series.color;
        const auto& y = *ys[s];
        std::string points;
        auto flush = [&] {
            if (!points.empty()) {
                out += fmt::format("<polyline fill=\"none\" stroke=\"{}\" stroke-width=\"1.5\" "
                                   "points=\"{}\"/>\n",
                                   color, points);
                points.clear();
            }
        };
        for (std::size_t i = 0; i < y.size(); ++i) {
            if (!std::isfinite((*xs)[i]) || !std::isfinite(y[i])) {
                flush();
                continue;
            }
            if (!points.empty()) {
                points += ' ';
            }
            points += num(px((*xs)[i])) + "," + num(py(y[i]));
        }
        flush();
        const double ly = kTop + 10 + 20.0 * static_cast<double>(s);
        const double lx = kLeft + pw + 12;
        out += fmt::format("<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"{}\" "
                           "stroke-width=\"2\"/>\n",
                           num(lx), num(ly), num(lx + 24), num(ly), color);
        out += fmt::format("<text x=\"{}\" y=\"{}\">{}</text>\n", num(lx + 30), num(ly + 4),
                           escape(series.label.empty() ? series.column : series.label));
    }
    out += "</svg>\n";
    return out;
}

void emit_plot(const ResultTable& table, const PlotSpec& spec, const std::filesystem::path& path) {
    write_file_atomic(path, render_svg(table, spec));
}

} // namespace protmeas::cli
