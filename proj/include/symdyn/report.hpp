#pragma once

#include <sstream>
#include <string>
#include <vector>

namespace symdyn {

struct ConditionCheck {
  std::string name;
  bool pass = false;
  std::string detail;
};

struct ConditionReport {
  std::vector<ConditionCheck> checks;

  void add(std::string name, bool pass, std::string detail) {
    checks.push_back({std::move(name), pass, std::move(detail)});
  }
  bool pass() const {
    for (const auto& c : checks)
      if (!c.pass) return false;
    return true;
  }
  const ConditionCheck* find(const std::string& name) const {
    for (const auto& c : checks)
      if (c.name == name) return &c;
    return nullptr;
  }
  std::vector<std::string> failures() const {
    std::vector<std::string> out;
    for (const auto& c : checks)
      if (!c.pass) out.push_back(c.name);
    return out;
  }
};

template <class... Ts>
std::string concat(const Ts&... xs) {
  std::ostringstream os;
  (os << ... << xs);
  return os.str();
}

}  // namespace symdyn
