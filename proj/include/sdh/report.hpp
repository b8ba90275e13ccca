#pragma once

#include <string>
#include <vector>

namespace sdh {

struct Check {
  std::string name;
  bool pass = false;
  std::string lhs, rhs;
};

struct Report {
  std::string suite;
  std::vector<Check> checks;

  void add(std::string name, bool pass, std::string lhs, std::string rhs) {
    checks.push_back({std::move(name), pass, std::move(lhs), std::move(rhs)});
  }
  void append(const Report& o) { checks.insert(checks.end(), o.checks.begin(), o.checks.end()); }
  bool all_pass() const {
    for (const auto& c : checks)
      if (!c.pass) return false;
    return true;
  }
  int failures() const {
    int n = 0;
    for (const auto& c : checks) n += !c.pass;
    return n;
  }
};

}  // namespace sdh
