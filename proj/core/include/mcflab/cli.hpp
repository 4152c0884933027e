#pragma once

#include <string>
#include <vector>

#include "mcflab/config.hpp"

namespace mcflab {

// Parses argv-style arguments (without the program name), runs the requested
// experiment, writes artifacts + manifest. Exit status: 0 success, 1
// hypothesis violation under --strict, 2 usage or operational error.
int run_cli(const std::vector<std::string>& args);

// Runs a fully-resolved config (the CLI front end ends here; tests enter
// here too).
int dispatch(const ExperimentConfig& config);

}  // namespace mcflab
