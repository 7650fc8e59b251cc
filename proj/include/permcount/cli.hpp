#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "permcount/permanent.hpp"

namespace permcount::cli {

enum ExitCode : int {
  kOk = 0,
  kCheckFailed = 2,
  kGuard = 3,
  kBadInput = 4,
};

struct RunConfig {
  std::string command;
  std::vector<std::string> fields;
  std::string modulus;  // high-to-low, overrides the field text's modulus
  std::optional<std::uint32_t> d;
  std::string route = "all";
  std::string format = "text";
  std::string out_path;
  EngineConfig engine;
  std::uint64_t max_oracle = 0;
};

/// Runs one command line (without the program name). Output goes to `out`
/// unless --out names a file; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace permcount::cli
