#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "conesq/harness.hpp"

namespace conesq {

struct CriterionResult {
  int id = 0;
  std::string key;    // short suite name, e.g. "measure"
  std::string title;  // one-line description
  bool pass = false;
  double seconds = 0.0;
  double budget = 0.0;  // wall-clock limit in seconds, part of the verdict
  json summary;
  std::vector<Record> records;
};

// Acceptance criteria 1..9. Each one is deterministic given the seed.
int criterion_count();
std::string criterion_key(int id);
int criterion_by_key(const std::string& key);  // 0 if unknown
CriterionResult run_criterion(int id, std::uint64_t seed);

// Suites that act on a user scenario. Return false for an unknown name.
std::vector<std::string> scenario_suite_names();
bool run_scenario_suite(const std::string& name, const Scenario& sc, Reporter& out);

}  // namespace conesq
