#pragma once

#include "frameforge/config.hpp"

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>

namespace frameforge::cli {

enum ExitCode : int {
  kOk = 0,
  kUnexpected = 1,
  kValidation = 2,
  kQuantization = 3,
  kUsage = 64,
};

struct RunConfig {
  double epsilon = 0.0;
  std::uint64_t seed = 1;
  std::size_t trials = 8;
  Tolerances tolerances;
  bool oracle = false;
  bool timing = true;
  std::string out;
  std::string csv;

  QuantizerConfig quantizer() const { return {trials, seed, QuantizerConfig{}.grid_ratio}; }
};

/// Worker cap: FRAMEFORGE_THREADS if set, else the hardware concurrency.
std::size_t thread_limit();

/// Parses argv (argv[0] is the program name) and runs one subcommand.
/// Reports go to the --out file when given, otherwise to `out`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace frameforge::cli
