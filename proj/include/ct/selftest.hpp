#pragma once

#include <string>
#include <vector>

#include "ct/config.hpp"

namespace ct {

// Deterministic self-check battery. Runs a fixed set of computations with
// fixed inputs, writes one artifact per stage into out_dir (created if
// missing), and reports one line per stage. Two runs with the same config
// produce byte-identical artifacts.
struct SelftestReport {
  std::vector<std::string> lines;
  std::vector<std::string> artifacts;  // file names written, in order
  bool ok = true;
};

SelftestReport run_selftest(const RunConfig& cfg, const std::string& out_dir);

}  // namespace ct
