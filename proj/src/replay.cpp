#include "dadcert/asdim.hpp"
#include "dadcert/chains.hpp"
#include "dadcert/covers.hpp"
#include "dadcert/oracle.hpp"

namespace dadcert {

namespace {

Certificate rerun(const Certificate& c) {
  const json& p = c.params;
  if (c.kind == "dad_cover") return verify_dad_cover(Cover::from_json(p));
  if (c.kind == "group_cover") {
    return verify_group_cover(cover_from_provenance(p), p.at("r").get<int64_t>(), p.at("R").get<int64_t>());
  }
  if (c.kind == "gamma_cover") {
    const int dim = p.at("dim").get<int>();
    return verify_gamma_cover(cover_from_provenance(p), subset_from_json(p.at("F"), dim),
                              subset_from_json(p.at("S"), dim));
  }
  if (c.kind == "f_separated") {
    const System sys = System::from_json(p.at("system"));
    return f_separated(sys, clopen_from_json(sys, p.at("A")), clopen_from_json(sys, p.at("B")),
                       subset_from_json(p.at("F"), sys.dim()));
  }
  if (c.kind == "check_free") {
    const System sys = System::from_json(p.at("system"));
    return check_free(sys, subset_from_json(p.at("F"), sys.dim()), p.at("depth").get<int64_t>());
  }
  if (c.kind == "oracle_agreement") {
    const System sys = System::from_json(p.at("system"));
    const int64_t level = p.at("model_level").get<int64_t>();
    const auto model = sys.model() == Model::odometer ? FiniteQuotientModel::odometer(sys, level)
                                                      : FiniteQuotientModel::sturmian(sys, level);
    return compare_components(model, clopen_from_json(sys, p.at("B")), subset_from_json(p.at("F"), sys.dim()));
  }
  if (c.kind == "orbit_transport") {
    return orbit_transport(Cover::from_json(p.at("cover")), p.at("window").get<int64_t>()).second;
  }
  if (c.kind == "combine") {
    if (c.children.size() < 2) throw Error("combine certificate lacks its inputs");
    const Cover a = Cover::from_json(c.children[0].params), b = Cover::from_json(c.children[1].params);
    const auto f = subset_from_json(p.at("F"), a.system.dim());
    return combine_union(a, b, f, p.at("rA").get<int64_t>(), p.at("RA").get<int64_t>(),
                         p.at("rB").get<int64_t>(), p.at("RB").get<int64_t>())
        .second;
  }
  if (c.kind == "reduce") {
    if (c.children.empty()) throw Error("reduce certificate lacks its input");
    const Cover in = Cover::from_json(c.children[0].params);
    return reduce_cover(in, subset_from_json(p.at("F_0"), in.system.dim())).second;
  }
  throw Error("certificate kind '" + c.kind + "' is only replayable through its parent");
}

}  // namespace

Certificate replay(const json& certificate) {
  const Certificate original = Certificate::from_json(certificate);
  Certificate cert;
  cert.kind = "replay";
  cert.params = {{"kind", original.kind}, {"verdict", original.pass ? "pass" : "fail"}};
  Certificate again = rerun(original);
  // Annotations added by an enclosing check (color, step, ...) are not
  // inputs; carry them over.
  for (const auto& [k, v] : original.params.items()) {
    if (!again.params.contains(k)) again.params[k] = v;
  }
  // Key order is presentation only.
  const auto a = nlohmann::json::parse(again.to_json().dump());
  const auto b = nlohmann::json::parse(original.to_json().dump());
  cert.pass = a == b;
  cert.witness = {{"verdict", again.pass ? "pass" : "fail"}, {"identical", cert.pass}};
  if (!cert.pass) {
    cert.witness["replayed_witness"] = again.witness;
    if (again.pass != original.pass) cert.note = "verdict differs";
    else cert.note = "verdict agrees; certificate content differs";
  }
  return cert;
}

}  // namespace dadcert
