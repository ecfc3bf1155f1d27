// Acceptance suite: one PASS/FAIL line per criterion at the full tier.
// Pass --quick for the reduced tier or ids to run a subset.

#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include "pencil_lab/acceptance.hpp"

int main(int argc, char** argv) {
  pencil_lab::AcceptanceOptions options;
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--quick") options.tier = pencil_lab::Tier::kQuick;
    else if (arg == "--slow") options.slow = true;
    else options.only.push_back(std::atoi(arg.c_str()));
  }
  options.log = &std::cout;
  const auto outcomes = pencil_lab::run_acceptance(options);
  const bool ok = pencil_lab::all_passed(outcomes);
  std::cout << (ok ? "acceptance: all criteria passed" : "acceptance: FAILED") << std::endl;
  return ok ? 0 : 1;
}
