#pragma once

#include <string>
#include <vector>

namespace eigenproj {

struct CheckItem {
  std::string name;
  bool pass = false;
  std::string detail;
};

struct CheckReport {
  std::vector<CheckItem> items;

  void add(std::string name, bool pass, std::string detail = {}) {
    items.push_back(CheckItem{std::move(name), pass, std::move(detail)});
  }

  bool all_pass() const {
    for (const auto& it : items)
      if (!it.pass) return false;
    return true;
  }
};

}  // namespace eigenproj
