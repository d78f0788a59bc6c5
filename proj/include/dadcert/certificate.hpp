#pragma once

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "dadcert/group.hpp"

namespace dadcert {

using json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

/// Verification verdict. Pass certificates carry witnesses, fail
/// certificates carry one replayable counterexample; composed checks keep
/// their sub-certificates in `children`.
struct Certificate {
  std::string kind;
  bool pass = false;
  json params = json::object();
  json witness = json::object();
  std::string note;
  std::vector<Certificate> children;

  bool all_pass() const;
  json to_json() const;
  static Certificate from_json(const json& j);
};

json to_json(const GroupElement& g);
GroupElement element_from_json(const json& j, int dim);
json to_json(const FiniteSubset& f);
FiniteSubset subset_from_json(const json& j, int dim);

}  // namespace dadcert
