#include "protmeas/cli/experiments.hpp"

int main(int argc, char** argv) { return protmeas::cli::run_cli(argc, argv); }
