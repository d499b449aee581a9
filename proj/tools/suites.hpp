#pragma once

#include <string>
#include <vector>

namespace modlie::suites {

struct Check {
  bool pass = true;
  std::vector<std::string> failures;
  std::vector<std::string> notes;
  void expect(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      failures.push_back(what);
    }
  }
  void note(const std::string& s) { notes.push_back(s); }
};

struct Suite {
  const char* key;    // name accepted by `modlie verify`
  const char* title;
  void (*run)(Check&);
};

// The acceptance criteria in order.
const std::vector<Suite>& all();
const Suite* find(const std::string& key);

struct Result {
  std::string key, title;
  bool pass = false;
  double seconds = 0;
  std::vector<std::string> failures, notes;
};
// Exceptions thrown by a suite count as failures.
Result run(const Suite& s);

}  // namespace modlie::suites
