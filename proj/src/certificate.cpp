#include "dadcert/certificate.hpp"

namespace dadcert {

bool Certificate::all_pass() const {
  if (!pass) return false;
  for (const auto& c : children) {
    if (!c.all_pass()) return false;
  }
  return true;
}

json Certificate::to_json() const {
  json j;
  j["schema_version"] = kSchemaVersion;
  j["kind"] = kind;
  j["verdict"] = pass ? "pass" : "fail";
  j["params"] = params;
  j["witness"] = witness;
  if (!note.empty()) j["note"] = note;
  if (!children.empty()) {
    json kids = json::array();
    for (const auto& c : children) kids.push_back(c.to_json());
    j["children"] = std::move(kids);
  }
  return j;
}

Certificate Certificate::from_json(const json& j) {
  if (!j.is_object() || !j.contains("kind") || !j.contains("verdict")) {
    throw Error("certificate: missing kind or verdict");
  }
  if (j.value("schema_version", 0) != kSchemaVersion) {
    throw Error("certificate: unsupported schema_version");
  }
  Certificate c;
  c.kind = j.at("kind").get<std::string>();
  const auto verdict = j.at("verdict").get<std::string>();
  if (verdict != "pass" && verdict != "fail") throw Error("certificate: bad verdict " + verdict);
  c.pass = verdict == "pass";
  c.params = j.value("params", json::object());
  c.witness = j.value("witness", json::object());
  c.note = j.value("note", std::string{});
  if (j.contains("children")) {
    for (const auto& k : j.at("children")) c.children.push_back(from_json(k));
  }
  return c;
}

json to_json(const GroupElement& g) {
  if (g.dim() == 1) return g[0];
  return g.coords();
}

GroupElement element_from_json(const json& j, int dim) {
  if (j.is_number_integer()) {
    if (dim != 1) throw Error("scalar group element given for dimension " + std::to_string(dim));
    return GroupElement{j.get<int64_t>()};
  }
  const auto v = j.get<std::vector<int64_t>>();
  if (static_cast<int>(v.size()) != dim) throw Error("group element has wrong dimension");
  return GroupElement::from_span(v);
}

json to_json(const FiniteSubset& f) {
  if (f.is_ball()) return json{{"ball", *f.ball_radius()}, {"dim", f.dim()}};
  json arr = json::array();
  for (const auto& e : f.elements()) arr.push_back(to_json(e));
  return arr;
}

FiniteSubset subset_from_json(const json& j, int dim) {
  if (j.is_object()) {
    if (j.value("dim", dim) != dim) throw Error("subset has wrong dimension");
    return FiniteSubset::ball(dim, j.at("ball").get<int64_t>());
  }
  std::vector<GroupElement> v;
  for (const auto& e : j) v.push_back(element_from_json(e, dim));
  return FiniteSubset(dim, std::move(v));
}

}  // namespace dadcert
