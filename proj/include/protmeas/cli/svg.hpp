#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "protmeas/cli/table.hpp"

namespace protmeas::cli {

struct PlotSeries {
    std::string column;
    std::string label;
    std::string color;
};

/// Axes and series selection. An empty x_column plots against the row index.
struct PlotSpec {
    std::string title;
    std::string x_column;
    std::vector<PlotSeries> series;
    std::string x_label;
    std::string y_label;
};

/// Self-contained SVG document. Non-finite values break the polyline.
std::string render_svg(const ResultTable& table, const PlotSpec& spec);

void emit_plot(const ResultTable& table, const PlotSpec& spec, const std::filesystem::path& path);

} // namespace protmeas::cli
