#pragma once

#include <string>
#include <vector>

#include "protmeas/cli/config.hpp"
#include "protmeas/cli/svg.hpp"
#include "protmeas/cli/table.hpp"

namespace protmeas::cli {

struct NamedPlot {
    std::string file_name;
    PlotSpec spec;
};

struct ExperimentOutput {
    std::string name;
    ResultTable table;
    std::vector<NamedPlot> plots;
};

/// Validates the config, then computes the experiment. Module errors pass
/// through unchanged; run_cli reports them with the experiment name.
ExperimentOutput run(const ExperimentConfig& config);

/// Writes <name>.csv and, when enabled, one SVG per plot into config.out.
void write_outputs(const ExperimentOutput& output, const ExperimentConfig& config);

/// Full command-line entry point; returns the process exit code
/// (0 ok, 2 usage, 3 numerical, 4 I/O).
int run_cli(int argc, char** argv);

} // namespace protmeas::cli
