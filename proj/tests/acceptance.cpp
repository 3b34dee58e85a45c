// Acceptance gate: runs every release criterion and prints one line each.
// Exit status is the number of failing criteria.

#include <cstdio>

#include "dirac1d/experiments.hpp"

int main() {
  int failures = 0;
  for (const auto& r : dirac1d::run_all_criteria()) {
    std::printf("[%s] criterion %2d: %s (%.1f s) %s\n", r.pass ? "PASS" : "FAIL", r.id,
                r.name.c_str(), r.seconds, r.detail.c_str());
    std::fflush(stdout);
    if (!r.pass) ++failures;
  }
  if (failures == 0) std::printf("all criteria passed\n");
  else std::printf("%d criteria FAILED\n", failures);
  return failures;
}
