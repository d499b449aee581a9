// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
// failure.

#include <iostream>

#include "suites.hpp"

int main() {
  bool all = true;
  for (const auto& s : modlie::suites::all()) {
    modlie::suites::Result r = modlie::suites::run(s);
    std::cout << (r.pass ? "PASS" : "FAIL") << "  criterion " << r.title << "  (" << r.seconds << " s)\n";
    for (const auto& f : r.failures) std::cout << "  failed: " << f << "\n";
    for (const auto& n : r.notes) std::cout << "  " << n << "\n";
    std::cout.flush();
    all = all && r.pass;
  }
  return all ? 0 : 1;
}
