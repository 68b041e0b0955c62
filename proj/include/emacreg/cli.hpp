#pragma once

#include "emacreg/io.hpp"

#include <iostream>

namespace emacreg {

// Entry point behind the emacreg executable; returns the process exit code
// (0 success, 1 usage, 2 runtime failure). Output streams are injectable for
// testing.
int cli_main(int argc, const char* const* argv, std::ostream& out = std::cout,
             std::ostream& err = std::cerr);

// Orchestrates one configured experiment: builds the problem, runs it, and
// writes diagnostics CSV, manifest, and optional VTU snapshots.
int run_experiment(const RunConfig& cfg, std::ostream& out);

}  // namespace emacreg
