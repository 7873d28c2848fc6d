#pragma once

#include <ostream>
#include <string>

#include "mcvt/flow.hpp"
#include "mcvt/generator.hpp"

namespace mcvt::cli {

enum ExitCode : int {
  kOk = 0,
  kUsage = 1,
  kIo = 2,
  kService = 3,
  kInternal = 4,
};

// Subcommands: translate, mask-debug, interp-debug, flow, metrics.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

// "flo:<dir>" | "block:<size>,<radius>" | "http:<url>"
FlowSource parse_flow_selector(const std::string& sel);
// "mock:<transform>" | "http:<url>"
GeneratorBackend parse_backend_selector(const std::string& sel);

int exit_code_for(Errc code);

}  // namespace mcvt::cli
