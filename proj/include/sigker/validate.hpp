#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace sigker::validate {

struct SuiteOptions {
  std::uint64_t seed = 12345;
  std::size_t cases = 0;    // 0: per-suite default
  double tolerance = 0.0;   // 0: per-suite defaults
  bool inject_fault = false;  // negative-control hook: corrupt a factorial weight
};

struct SuiteReport {
  std::string name;
  std::size_t cases = 0;
  std::size_t failures = 0;
  double max_error = 0.0;
  std::vector<std::string> messages;

  bool passed() const { return failures == 0; }
};

// Known suites: closed-form, oracle-triangle, bound, invariance.
std::vector<std::string> suite_names();
SuiteReport run_suite(const std::string& name, const SuiteOptions& options);

}  // namespace sigker::validate
