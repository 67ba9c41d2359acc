#pragma once

#include <initializer_list>
#include <string>
#include <vector>

#include "json.hpp"

namespace normsim::detail {

using Json = nlohmann::ordered_json;

// Flags keys outside the known set; "_"-prefixed keys are comments.
inline void reject_unknown_keys(const Json& obj,
                                std::initializer_list<const char*> known,
                                const std::string& where,
                                std::vector<std::string>& problems) {
  for (const auto& item : obj.items()) {
    const std::string& key = item.key();
    if (!key.empty() && key[0] == '_') continue;
    bool ok = false;
    for (const char* k : known)
      if (key == k) {
        ok = true;
        break;
      }
    if (!ok) problems.push_back(where + ": unknown key '" + key + "'");
  }
}

}  // namespace normsim::detail
