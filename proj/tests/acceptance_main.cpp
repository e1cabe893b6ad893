// Prints one PASS/FAIL line per acceptance criterion; exit status 0 iff all pass.
#include <iostream>

#include "pwave/acceptance.hpp"
#include "pwave/config.hpp"

int main(int argc, char** argv) {
  pwave::RunConfig cfg;
  if (argc > 1) cfg = pwave::RunConfig::load(argv[1]);
  const auto results = pwave::run_acceptance(cfg, true);
  bool ok = true;
  for (const auto& r : results) {
    std::cout << pwave::format_line(r) << "\n";
    ok = ok && r.passed;
  }
  std::cout << (ok ? "all criteria passed" : "some criteria failed") << "\n";
  return ok ? 0 : 1;
}
