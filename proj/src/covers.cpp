#include "dadcert/covers.hpp"

#include <algorithm>
#include <array>
#include <climits>
#include <map>
#include <unordered_map>

namespace dadcert {

namespace {

void check_cover_shape(const Cover& c) {
  if (c.colors.empty()) throw Error("cover has no colors");
  if (c.f.dim() != c.system.dim() || c.s.dim() != c.system.dim()) throw Error("cover F/S have wrong dimension");
  if (!c.f.is_fs() || !c.s.is_fs()) throw Error("cover F and S must contain the identity and be symmetric");
  for (const auto& u : c.colors) {
    if (u.model != c.system.model()) throw Error("cover color belongs to another model");
  }
}

std::string first_cell(const System& sys, const ClopenSet& a) {
  if (sys.model() == Model::sturmian && a.level > 64) return "#" + std::to_string(a.codes.front());
  return describe(sys, ClopenSet{a.model, a.lo, a.level, {a.codes.front()}}).front();
}

ClopenSet union_of(const System& sys, const std::vector<ClopenSet>& colors) {
  ClopenSet u = empty_set(sys);
  for (const auto& c : colors) u = unite(sys, u, c);
  return u;
}

bool same_parent(const System& a, const System& b) {
  return a.parent().to_json() == b.parent().to_json();
}

// Parent system restricted to y, or the parent itself when y is everything.
System system_on(const System& parent, const ClopenSet& y) {
  if (same_set(parent, y, full_set(parent))) return parent;
  return restrict(parent, y);
}

}  // namespace

json Cover::to_json() const {
  json colors_j = json::array();
  for (const auto& c : colors) colors_j.push_back(dadcert::to_json(system, c));
  return {{"system", system.to_json()}, {"F", dadcert::to_json(f)}, {"S", dadcert::to_json(s)},
          {"colors", colors_j}};
}

Cover Cover::from_json(const json& j) {
  Cover c;
  c.system = System::from_json(j.at("system"));
  c.f = subset_from_json(j.at("F"), c.system.dim());
  c.s = subset_from_json(j.at("S"), c.system.dim());
  for (const auto& u : j.at("colors")) c.colors.push_back(clopen_from_json(c.system, u));
  return c;
}

Certificate verify_dad_cover(const Cover& cover) {
  check_cover_shape(cover);
  const System& sys = cover.system;
  Certificate cert;
  cert.kind = "dad_cover";
  cert.params = cover.to_json();
  cert.params["d"] = cover.colors.size() - 1;
  if (sys.is_empty()) {
    cert.pass = true;
    cert.note = "empty space";
    return cert;
  }
  const ClopenSet missing = subtract(sys, space(sys), union_of(sys, cover.colors));
  if (!missing.empty()) {
    cert.witness = {{"type", "uncovered"}, {"cell", first_cell(sys, missing)}};
    return cert;
  }
  for (size_t j = 0; j < cover.colors.size(); ++j) {
    const auto comp = f_components(sys, cover.colors[j], cover.f);
    auto c = is_s_bounded(sys, comp, cover.s);
    c.params["color"] = j;
    if (!c.pass) {
      cert.witness = {{"type", "color"}, {"color", j}, {"counterexample", c.witness}};
      cert.children.push_back(std::move(c));
      return cert;
    }
    cert.children.push_back(std::move(c));
  }
  cert.pass = true;
  cert.witness = {{"colors", cover.colors.size()}};
  return cert;
}

json ScaleSchedule::to_json() const {
  json fs = json::array(), gs = json::array();
  for (const auto& x : f) fs.push_back(dadcert::to_json(x));
  for (const auto& x : g) gs.push_back(dadcert::to_json(x));
  return {{"d", d}, {"F", fs}, {"G", gs}};
}

ScaleSchedule scale_schedule(int d, const FiniteSubset& f0) {
  if (d < 0) throw Error("scale_schedule: d must be non-negative");
  if (!f0.is_fs()) throw Error("scale_schedule: F_0 must contain the identity and be symmetric");
  const int dim = f0.dim();
  ScaleSchedule out;
  out.d = d;
  out.f.push_back(f0);
  out.g.push_back(dynamic_control(dim, f0));
  for (int i = 1; i <= d; ++i) {
    out.f.push_back(power(out.g.back(), 4));
    out.g.push_back(power(dynamic_control(dim, out.f.back()), 2));
  }
  return out;
}

std::pair<Cover, Certificate> combine_union(const Cover& a, const Cover& b, const FiniteSubset& f,
                                            int64_t ra, int64_t big_ra, int64_t rb, int64_t big_rb) {
  if (!f.is_fs()) throw Error("combine_union: F must contain the identity and be symmetric");
  if (std::min({ra, big_ra, rb, big_rb}) < 1) throw Error("combine_union: exponents must be positive");
  if (!(2 * big_rb + 2 * rb < ra)) {
    throw Error("combine_union: finite union lemma hypothesis 2R_B + 2r_B < r_A fails (R_B=" + std::to_string(big_rb) +
                ", r_B=" + std::to_string(rb) + ", r_A=" + std::to_string(ra) + ")");
  }
  if (!same_parent(a.system, b.system)) throw Error("combine_union: covers live on different systems");
  const bool a_empty = a.system.is_empty();
  if (!a_empty && a.colors.size() != b.colors.size()) throw Error("combine_union: color counts differ");

  Certificate cert;
  cert.kind = "combine";
  cert.params = {{"F", to_json(f)}, {"rA", ra}, {"RA", big_ra}, {"rB", rb}, {"RB", big_rb},
                 {"claimed", {{"F_exponent", rb}, {"S_exponent", ra + big_ra}}}};
  cert.children.push_back(verify_dad_cover(Cover{a.system, a.colors, power(f, ra), power(f, big_ra)}));
  cert.children.push_back(verify_dad_cover(Cover{b.system, b.colors, power(f, rb), power(f, big_rb)}));

  const System parent = a.system.parent();
  Cover out;
  out.system = system_on(parent, unite(parent, space(a.system), space(b.system)));
  out.f = power(f, rb);
  out.s = power(f, ra + big_ra);
  out.colors = b.colors;
  if (!a_empty) {
    for (size_t j = 0; j < out.colors.size(); ++j) out.colors[j] = unite(parent, a.colors[j], b.colors[j]);
  }
  if (!cert.children[0].pass || !cert.children[1].pass) {
    cert.witness = {{"type", "unverified_input"}, {"input", cert.children[0].pass ? "B" : "A"}};
    return {out, cert};
  }
  cert.children.push_back(verify_dad_cover(out));
  cert.pass = cert.children.back().pass;
  if (!cert.pass) cert.witness = {{"type", "output"}, {"counterexample", cert.children.back().witness}};
  if (a_empty) cert.note = "A is empty: output is cover B with weakened parameters";
  return {out, cert};
}

Cover restrict_cover(const Cover& cov, const ClopenSet& y) {
  const System parent = cov.system.parent();
  const ClopenSet target = intersect(parent, space(cov.system), y);
  if (same_set(parent, target, space(cov.system))) return cov;
  Cover out;
  out.system = restrict(parent, target);
  out.f = cov.f;
  out.s = cov.s;
  for (const auto& c : cov.colors) out.colors.push_back(intersect(parent, c, target));
  return out;
}

std::vector<GroupElement> TowerDecomposition::labels() const {
  std::vector<GroupElement> out;
  for (const auto& t : towers) {
    for (const auto& [label, cells] : t.fibers) out.push_back(label);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

namespace {

// Pairwise separation is checked directly for few towers, and through
// closure (each tower is its own F-component closure in U) otherwise.
constexpr size_t kPairwiseTowers = 8;
constexpr size_t kClosureCellBudget = size_t{1} << 22;

}  // namespace

TowerDecomposition tower_decomposition(const System& sys, const ClopenSet& u, const FiniteSubset& f,
                                       const FiniteSubset& s, int color) {
  TowerDecomposition td;
  td.system = sys;
  td.color = color;
  td.f = f;
  td.s = s;
  const auto comp = f_components(sys, u, f);
  auto bounded = is_s_bounded(sys, comp, s);
  if (!bounded.pass) throw Error("tower_decomposition: F-components of the color are not S-bounded");
  td.u = comp.cells;

  std::vector<int32_t> order;  // components by least cell code
  std::map<int32_t, std::map<GroupElement, std::vector<int64_t>>> fibers;
  for (size_t i = 0; i < comp.cell_count(); ++i) {
    const int32_t c = comp.component[i];
    auto [it, fresh] = fibers.try_emplace(c);
    if (fresh) order.push_back(c);
    it->second[comp.position[i]].push_back(comp.cells.codes[i]);
  }
  const ClopenSet proto{comp.cells.model, comp.cells.lo, comp.cells.level, {}};
  for (int32_t c : order) {
    Tower t;
    t.component = c;
    t.set = proto;
    for (auto& [label, codes] : fibers[c]) {
      ClopenSet e = proto;
      e.codes = codes;
      t.set.codes.insert(t.set.codes.end(), codes.begin(), codes.end());
      t.fibers.emplace_back(label, std::move(e));
    }
    std::sort(t.set.codes.begin(), t.set.codes.end());
    td.towers.push_back(std::move(t));
  }

  Certificate& cert = td.certificate;
  cert.kind = "tower_decomposition";
  cert.params = {{"color", color}, {"F", to_json(f)}, {"S", to_json(s)}, {"towers", td.towers.size()}};
  if (sys.model() == Model::sturmian) {
    cert.params["window"] = {td.u.lo, td.u.level};
  } else {
    cert.params["depth"] = td.u.level;
  }
  cert.children.push_back(std::move(bounded));
  // Disjoint cover of U: every cell lies in exactly one fiber of one tower.
  size_t total = 0;
  for (const auto& t : td.towers) total += t.set.codes.size();
  bool ok = total == td.u.codes.size();
  json towers_j = json::array();
  for (const auto& t : td.towers) {
    json labels = json::array();
    for (const auto& [label, cells] : t.fibers) labels.push_back(to_json(label));
    towers_j.push_back({{"component", t.component}, {"cells", t.set.codes.size()}, {"labels", labels}});
  }
  if (!ok) {
    cert.witness = {{"type", "not_a_partition"}, {"cells", td.u.codes.size()}, {"tower_cells", total}};
    return td;
  }
  if (td.towers.size() <= kPairwiseTowers) {
    for (size_t a = 0; a < td.towers.size() && ok; ++a) {
      for (size_t b = a + 1; b < td.towers.size() && ok; ++b) {
        auto sep = f_separated(sys, td.towers[a].set, td.towers[b].set, f);
        sep.params["towers"] = {a, b};
        ok = sep.pass;
        cert.children.push_back(std::move(sep));
      }
    }
  } else if (td.towers.size() * td.u.codes.size() <= kClosureCellBudget) {
    for (size_t a = 0; a < td.towers.size() && ok; ++a) {
      const auto closure = component_of_in(sys, td.towers[a].set, td.u, f);
      if (!same_set(sys, closure, td.towers[a].set)) {
        ok = false;
        cert.witness = {{"type", "tower_not_closed"}, {"tower", a}};
      }
    }
    cert.note = "separation via closure of each tower in U";
  } else {
    cert.note = "towers are unions of distinct F-components; separation not re-checked";
  }
  cert.pass = ok && std::all_of(cert.children.begin(), cert.children.end(),
                                [](const Certificate& c) { return c.all_pass(); });
  if (cert.pass) {
    cert.witness = {{"towers", towers_j}};
  } else if (cert.witness.empty()) {
    cert.witness = {{"type", "towers_joined"}, {"counterexample", cert.children.back().witness}};
  }
  return td;
}

std::pair<Cover, Certificate> cover_tower(const TowerDecomposition& td, const GammaCover& gcov, int tower) {
  const System parent = td.system.parent();
  const size_t ncolors = gcov.cover.color_count();
  const ClopenSet proto{td.u.model, td.u.lo, td.u.level, {}};
  std::vector<ClopenSet> colors(ncolors, proto);
  ClopenSet support = proto;
  for (size_t k = 0; k < td.towers.size(); ++k) {
    if (tower >= 0 && k != static_cast<size_t>(tower)) continue;
    for (const auto& [label, cells] : td.towers[k].fibers) {
      const int c = gcov.cover.color_of(label);
      if (c < 0) throw Error("cover_tower: label " + label.str() + " is not colored by the group cover");
      auto& dst = colors[static_cast<size_t>(c)].codes;
      dst.insert(dst.end(), cells.codes.begin(), cells.codes.end());
      support.codes.insert(support.codes.end(), cells.codes.begin(), cells.codes.end());
    }
  }
  for (auto& c : colors) std::sort(c.codes.begin(), c.codes.end());
  std::sort(support.codes.begin(), support.codes.end());
  Cover out{restrict(parent, support), std::move(colors), gcov.f, gcov.s};
  auto cert = verify_dad_cover(out);
  cert.params["tower"] = tower;
  return {std::move(out), std::move(cert)};
}

std::pair<Cover, Certificate> reduce_cover(const Cover& cov, const FiniteSubset& f0) {
  const System& sys = cov.system;
  const int dim = sys.dim();
  const int d = static_cast<int>(cov.colors.size()) - 1;
  if (f0.dim() != dim) throw Error("reduce_cover: F_0 has wrong dimension");
  Certificate cert;
  cert.kind = "reduce";
  auto input = verify_dad_cover(cov);
  if (!input.pass) throw Error("reduce_cover: input cover does not verify");
  // Scales are tracked as exponents of the unit ball; F_0 is enclosed in
  // the smallest ball containing it.
  const FiniteSubset unit = ball(dim, 1);
  const FiniteSubset b0 = ball(dim, std::max<int64_t>(f0.radius(), 1));
  const auto sched = scale_schedule(d, b0);
  if (!sched.f[static_cast<size_t>(d)].is_subset_of(cov.f)) {
    throw Error("reduce_cover: input F does not contain F_d = " + sched.f[static_cast<size_t>(d)].str());
  }
  cert.params = {{"system", sys.to_json()}, {"d", d}, {"F_0", to_json(f0)}, {"schedule", sched.to_json()}};
  if (!(b0 == f0)) cert.params["F_0_enclosed"] = to_json(b0);
  cert.children.push_back(std::move(input));

  // Per color: towers of F_d-components, each colored by the group cover
  // at scale F_i through its labels.
  const FiniteSubset& fd = sched.f[static_cast<size_t>(d)];
  std::vector<Cover> pieces;
  for (int i = 0; i <= d; ++i) {
    const ClopenSet ui = intersect(sys, cov.colors[static_cast<size_t>(i)], space(sys));
    auto td = tower_decomposition(sys, ui, fd, cov.s, i);
    const auto gcov = gamma_action_cover(dim, sched.f[static_cast<size_t>(i)]);
    auto [piece, pc] = cover_tower(td, gcov);
    pc.params["color"] = i;
    const bool ok = td.certificate.pass && pc.pass;
    cert.children.push_back(std::move(td.certificate));
    cert.children.push_back(std::move(pc));
    if (!ok) {
      cert.witness = {{"type", "color_cover"}, {"color", i}};
      return {cov, cert};
    }
    pieces.push_back(std::move(piece));
  }

  // Fold fine to coarse with the finite union lemma.
  auto radius = [](const FiniteSubset& x) { return x.radius(); };
  Cover acc = pieces.front();
  const int64_t rb = radius(sched.f[0]);
  int64_t big_rb = radius(dynamic_control(dim, sched.f[0]));
  for (int i = 1; i <= d; ++i) {
    const int64_t ra = radius(sched.f[static_cast<size_t>(i)]);
    const int64_t big_ra = radius(dynamic_control(dim, sched.f[static_cast<size_t>(i)]));
    auto [next, cc] = combine_union(pieces[static_cast<size_t>(i)], acc, unit, ra, big_ra, rb, big_rb);
    cc.params["step"] = i;
    const bool ok = cc.pass;
    cert.children.push_back(std::move(cc));
    if (!ok) {
      cert.witness = {{"type", "combine"}, {"step", i}};
      return {cov, cert};
    }
    acc = std::move(next);
    big_rb = ra + big_ra;
  }
  acc.f = b0 == f0 ? f0 : b0;
  acc.s = sched.g[static_cast<size_t>(d)];
  auto final_check = verify_dad_cover(acc);
  cert.pass = final_check.pass;
  cert.children.push_back(std::move(final_check));
  cert.witness = {{"colors", acc.colors.size()}, {"F", to_json(acc.f)}, {"S", to_json(acc.s)}};
  if (!cert.pass) cert.witness["type"] = "output";
  cert.note =
      "zero-dimensional space: no boundary remainder, so the closing union with a neighbourhood cover is "
      "skipped; the output bound is G_d";
  return {acc, cert};
}

namespace {

// Color index of γ·x for the canonical basepoint x.
class OrbitReader {
 public:
  explicit OrbitReader(const Cover& cov, int64_t window) : cov_(cov) {
    const System& sys = cov.system;
    if (sys.model() == Model::odometer) return;  // x = 0, exact at every depth
    // x: a point of the lexicographically least cylinder at the common
    // window, read off the reference word with room for the whole orbit
    // segment on both sides.
    lo_ = 0;
    int64_t hi = 1;
    for (const auto& c : cov.colors) {
      if (c.level == 0) continue;
      lo_ = std::min(lo_, c.lo);
      hi = std::max(hi, c.lo + c.level);
    }
    const int64_t margin = window + std::max(-lo_, hi);
    const auto words = admissible_words(sys, hi - lo_);
    const auto idx = sys.language().index(hi - lo_, 4 * margin + 64);
    const auto& u = *idx->word;
    const auto pos = u.find(words.front(), static_cast<size_t>(margin));
    if (pos == std::string::npos || static_cast<int64_t>(pos) + margin + hi > static_cast<int64_t>(u.size())) {
      throw Error("orbit_transport: window exceeds the exactly represented segment; use a smaller window");
    }
    word_ = idx->word;
    origin_ = static_cast<int64_t>(pos) - lo_;
    for (const auto& c : cov.colors) {
      indices_.push_back(c.level == 0 ? nullptr : sys.language().index(c.level, static_cast<int64_t>(u.size())));
    }
    basepoint_ = words.front();
  }

  int color_of(const GroupElement& g) const {
    const System& sys = cov_.system;
    for (size_t j = 0; j < cov_.colors.size(); ++j) {
      const auto& c = cov_.colors[j];
      if (c.empty()) continue;
      if (sys.model() == Model::odometer) {
        if (c.has(sys.torus(c.level).encode(g))) return static_cast<int>(j);
        continue;
      }
      if (c.level == 0) return static_cast<int>(j);
      const int64_t at = origin_ + g[0] + c.lo;
      const int64_t code = indices_[j]->code_at[static_cast<size_t>(at)];
      if (c.has(code)) return static_cast<int>(j);
    }
    return -1;
  }

  json basepoint() const {
    if (cov_.system.model() == Model::odometer) return to_json(GroupElement(cov_.system.dim()));
    return {{"lo", lo_}, {"word", basepoint_}};
  }

 private:
  const Cover& cov_;
  int64_t lo_ = 0, origin_ = 0;
  std::string basepoint_;
  std::shared_ptr<const std::string> word_;
  std::vector<std::shared_ptr<const FactorIndex>> indices_;
};

}  // namespace

std::pair<std::vector<std::pair<GroupElement, int>>, Certificate> orbit_transport(const Cover& cov,
                                                                                  int64_t window) {
  check_cover_shape(cov);
  if (!cov.f.is_ball()) throw Error("orbit_transport: F must be a ball B(e, R)");
  if (cov.system.is_restricted()) throw Error("orbit_transport: needs a global action");
  if (window < 0) throw Error("orbit_transport: window must be non-negative");
  const int dim = cov.system.dim();
  const int64_t r = *cov.f.ball_radius();
  const int64_t bound = diam(cov.s);
  const FiniteSubset box = ball(dim, window);
  if (box.size() > static_cast<size_t>(kOrbitMaxPoints)) throw Error("orbit_transport: window too large");
  const OrbitReader reader(cov, window);

  std::vector<std::pair<GroupElement, int>> coloring;
  std::unordered_map<GroupElement, int, GroupElementHash> color;
  box.for_each([&](const GroupElement& g) {
    const int c = reader.color_of(g);
    coloring.emplace_back(g, c);
    color[g] = c;
  });
  std::sort(coloring.begin(), coloring.end());

  Certificate cert;
  cert.kind = "orbit_transport";
  cert.params = {{"cover", cov.to_json()}, {"R", r}, {"window", window}, {"bound", bound},
                 {"basepoint", reader.basepoint()}};
  for (const auto& [g, c] : coloring) {
    if (c < 0) {
      cert.witness = {{"type", "uncovered"}, {"point", to_json(g)}};
      return {coloring, cert};
    }
  }
  // R-components of each induced color inside the window.
  const auto steps = ball(dim, r).elements();
  std::unordered_map<GroupElement, bool, GroupElementHash> seen;
  json sizes = json::array();
  for (const auto& [start, c] : coloring) {
    if (seen[start]) continue;
    std::vector<GroupElement> comp{start};
    seen[start] = true;
    for (size_t h = 0; h < comp.size(); ++h) {
      for (const auto& s : steps) {
        const GroupElement y = comp[h] + s;
        auto it = color.find(y);
        if (it == color.end() || it->second != c || seen[y]) continue;
        seen[y] = true;
        comp.push_back(y);
      }
    }
    const int64_t dm = diam_of(comp);
    if (dm > bound) {
      std::sort(comp.begin(), comp.end());
      cert.witness = {{"type", "component"}, {"color", c}, {"diameter", dm}, {"from", to_json(comp.front())},
                      {"to", to_json(comp.back())}};
      return {coloring, cert};
    }
  }
  cert.pass = true;
  cert.witness = {{"points", coloring.size()}};
  return {coloring, cert};
}

Cover odometer_arc_cover(const System& sys, int colors, const FiniteSubset& f, int64_t min_depth) {
  if (sys.model() != Model::odometer || sys.dim() != 1) throw Error("odometer_arc_cover: needs a Z-odometer");
  if (colors < 2) throw Error("odometer_arc_cover: need at least two colors");
  const int64_t rho = f.radius();
  int64_t level = 0, n = 1;
  auto longest = [&](int64_t m) { return (m + colors - 1) / colors; };
  while (n - longest(n) < rho + 1 || level < min_depth) {
    n *= sys.base();
    ++level;
    if (level > 30) throw Error("odometer_arc_cover: depth limit exceeded");
  }
  Cover out{sys, {}, f, ball(1, longest(n))};
  for (int j = 0; j < colors; ++j) {
    ClopenSet arc{Model::odometer, 0, level, {}};
    for (int64_t x = j * n / colors; x < (j + 1) * n / colors; ++x) arc.codes.push_back(x);
    out.colors.push_back(std::move(arc));
  }
  return out;
}

Cover sturmian_marker_cover(const System& sys, int colors, const FiniteSubset& f) {
  if (sys.model() != Model::sturmian) throw Error("sturmian_marker_cover: not a sturmian system");
  if (sys.language().period() > 0) throw Error("sturmian_marker_cover: slope is degenerate");
  if (colors < 2) throw Error("sturmian_marker_cover: need at least two colors");
  const int64_t rho = f.radius();
  // Blocks [0,l), [l,2l), ... of the return interval; the last color takes
  // the rest. Gaps: R_min - l for the first colors, (colors-1)·l for the last.
  const int64_t l = (rho + colors - 1) / (colors - 1);
  const int64_t need = std::max((colors - 1) * l + 1, l + rho + 1);
  const Language& lang = sys.language();

  struct Marker {
    int64_t len = 0, code = -1, min_gap = 0, max_gap = 0;
  };
  // Least and greatest gap between occurrences of the best factor of length m.
  auto best_marker = [&](int64_t m) {
    const auto idx = lang.index(m, 16 * (m + need) + 1024);
    const auto& at = idx->code_at;
    std::unordered_map<int64_t, std::array<int64_t, 3>> stats;  // last, min, max
    for (size_t j = 0; j < at.size(); ++j) {
      auto [it, fresh] = stats.try_emplace(at[j], std::array<int64_t, 3>{static_cast<int64_t>(j), INT64_MAX, 0});
      if (fresh) continue;
      const int64_t gap = static_cast<int64_t>(j) - it->second[0];
      it->second = {static_cast<int64_t>(j), std::min(it->second[1], gap), std::max(it->second[2], gap)};
    }
    Marker best{m};
    for (const auto& [code, st] : stats) {
      if (st[1] == INT64_MAX) continue;
      if (st[1] > best.min_gap || (st[1] == best.min_gap && code < best.code)) {
        best = {m, code, st[1], st[2]};
      }
    }
    return best;
  };
  int64_t hi = 1;
  while (best_marker(hi).min_gap < need) hi *= 2;
  int64_t lo = hi / 2;  // best_marker(lo) too short (or lo = 0)
  while (hi - lo > 1) {
    const int64_t mid = (lo + hi) / 2;
    (best_marker(mid).min_gap >= need ? hi : lo) = mid;
  }
  const Marker mk = best_marker(hi);

  // Window reaching back one full return time.
  const int64_t back = mk.max_gap - 1;
  const int64_t width = back + mk.len;
  const auto big = lang.index(width);
  const auto small = lang.index(mk.len, static_cast<int64_t>(big->word->size()));
  std::vector<ClopenSet> out(static_cast<size_t>(colors), ClopenSet{Model::sturmian, -back, width, {}});
  std::vector<int64_t> last(small->code_at.size(), -1);
  int64_t prev = -1;
  for (size_t j = 0; j < small->code_at.size(); ++j) {
    if (small->code_at[j] == mk.code) prev = static_cast<int64_t>(j);
    last[j] = prev;
  }
  for (int64_t code : big->codes) {
    const int64_t origin = code + back;
    const int64_t m = last[static_cast<size_t>(origin)];
    if (m < code) throw Error("sturmian_marker_cover: a window misses the marker");
    const int64_t t = origin - m;
    out[static_cast<size_t>(std::min<int64_t>(t / l, colors - 1))].codes.push_back(code);
  }
  for (auto& c : out) std::sort(c.codes.begin(), c.codes.end());
  return Cover{sys, std::move(out), f, ball(1, std::max(l, mk.max_gap))};
}

}  // namespace dadcert
