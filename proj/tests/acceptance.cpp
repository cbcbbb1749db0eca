// Runs every acceptance criterion and prints one verdict line each.
// Exit status is 0 only if all criteria pass.

#include <cstdio>
#include <cstdlib>
#include <string>

#include "conesq/suites.hpp"

int main(int argc, char** argv) {
  std::uint64_t seed = 20240601;
  int only = 0;
  for (int i = 1; i < argc; ++i) {
    const std::string a = argv[i];
    if (a == "--seed" && i + 1 < argc) seed = std::strtoull(argv[++i], nullptr, 10);
    else if (a == "--only" && i + 1 < argc) only = conesq::criterion_by_key(argv[++i]);
  }
  bool all = true;
  for (int id = 1; id <= conesq::criterion_count(); ++id) {
    if (only != 0 && id != only) continue;
    const conesq::CriterionResult r = conesq::run_criterion(id, seed);
    all = all && r.pass;
    std::printf("[%s] criterion %d %-12s %6.1fs / %4.0fs  %s\n", r.pass ? "PASS" : "FAIL", r.id, r.key.c_str(),
                r.seconds, r.budget, r.title.c_str());
    std::printf("       %s\n", r.summary.dump().c_str());
    std::fflush(stdout);
  }
  return all ? 0 : 1;
}
