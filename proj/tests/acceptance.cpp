// Acceptance suite: one pass/fail line per criterion.
#include <cstdio>

#include "core/runner.hpp"

int main() {
  auto results = dlab::run_acceptance();
  bool all = true;
  for (const auto& r : results) {
    all = all && r.pass;
    std::printf("%s  criterion %2d  [%7.2fs]  %s\n", r.pass ? "PASS" : "FAIL", r.id, r.seconds,
                r.name.c_str());
    std::printf("      %s\n", r.detail.c_str());
  }
  std::printf("%s\n", all ? "ALL CRITERIA PASS" : "SOME CRITERIA FAILED");
  return all ? 0 : 1;
}
