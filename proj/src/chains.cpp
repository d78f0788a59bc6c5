#include "dadcert/chains.hpp"

#include <algorithm>
#include <map>
#include <unordered_map>
#include <unordered_set>

#include "dadcert/lattice.hpp"

namespace dadcert {

int64_t ComponentAutomaton::find(int64_t code) const {
  const auto it = std::lower_bound(cells.codes.begin(), cells.codes.end(), code);
  if (it == cells.codes.end() || *it != code) return -1;
  return it - cells.codes.begin();
}

std::vector<GroupElement> ComponentAutomaton::labels(size_t cell) const {
  const auto& c = components[static_cast<size_t>(component[cell])];
  std::vector<GroupElement> out;
  out.reserve(c.offsets.size());
  for (const auto& o : c.offsets) out.push_back(o - position[cell]);
  std::sort(out.begin(), out.end());
  return out;
}

bool ComponentAutomaton::any_unbounded() const {
  return std::any_of(components.begin(), components.end(), [](const auto& c) { return c.unbounded; });
}

namespace {

void check_steps(const System& sys, const FiniteSubset& f) {
  if (f.dim() != sys.dim()) throw Error("F has wrong dimension");
  if (!f.is_fs()) throw Error("F must contain the identity and be symmetric");
}

std::string cell_name(const System& sys, const ClopenSet& cells, int64_t code) {
  if (sys.model() == Model::sturmian && cells.level > 64) return "#" + std::to_string(code);
  return describe(sys, ClopenSet{cells.model, cells.lo, cells.level, {code}}).front();
}

// Sturmian run structure of a clopen U under F = g·[-k, k]: along each
// progression x, g·x, 2g·x, ... the members of U split into runs separated
// by k consecutive non-members ("cuts"). Either no factor contains a cut
// (every component is infinite), or cuts recur with bounded gaps in every
// residue class (the shift is totally minimal) and each run is determined
// by a window of `reach` letters on both sides.
class RunScan {
 public:
  RunScan(const System& sys, const ClopenSet& u, int64_t g, int64_t k) : sys_(sys), u_(u), g_(g), k_(k) {
    if (u_.level == 0) u_ = refine(sys, u_, 0, 1);
    const int64_t w = u_.level;
    if (k_ == 0) {
      bind(0);
      return;
    }
    const int64_t lb = (k_ - 1) * g_ + w;
    int64_t need = lb;
    while (true) {
      const auto word = sys.language().reference(need);
      set_idx_ = sys.language().index(w, static_cast<int64_t>(word->size()));
      member_ = mask(u_);
      const auto n = static_cast<int64_t>(member_.size());
      // zeros[j]: consecutive non-members from j along the progression.
      std::vector<int64_t> zeros(static_cast<size_t>(n), 0);
      for (int64_t j = n - 1; j >= 0; --j) {
        if (member_[static_cast<size_t>(j)]) continue;
        zeros[static_cast<size_t>(j)] = 1 + (j + g_ < n ? zeros[static_cast<size_t>(j + g_)] : 0);
      }
      auto cut = [&](int64_t j) { return zeros[static_cast<size_t>(j)] >= k_; };
      int64_t maxgap = 0;
      bool any = false;
      for (int64_t c = 0; c < g_; ++c) {
        int64_t prev = c - g_;
        bool seen = false;
        for (int64_t j = c; j + (k_ - 1) * g_ < n; j += g_) {
          if (!cut(j)) continue;
          maxgap = std::max(maxgap, j - prev);
          prev = j;
          seen = any = true;
        }
        maxgap = seen ? std::max(maxgap, n - prev) : std::max(maxgap, n);
      }
      if (!any) {
        unbounded_ = true;
        witness_ = {{"type", "no_cut"}, {"factor_length", lb}, {"step", g_}, {"k", k_}};
        bind(0);
        return;
      }
      const int64_t t = maxgap + lb + g_;
      if (t <= need) {
        bind(maxgap + k_ * g_);
        return;
      }
      need = t;
    }
  }

  bool unbounded() const { return unbounded_; }
  const json& witness() const { return witness_; }
  int64_t reach() const { return reach_; }
  const ClopenSet& cells() const { return cells_; }
  const ClopenSet& set() const { return u_; }

  /// Membership of the windows at each reference position in a set given
  /// at the same window as U.
  std::vector<uint8_t> mask(const ClopenSet& a) const {
    std::vector<uint8_t> m(set_idx_->code_at.size());
    for (size_t j = 0; j < m.size(); ++j) m[j] = a.has(set_idx_->code_at[j]);
    return m;
  }
  /// Run through the point of a cell: its id and the point's index in the
  /// reference word.
  std::pair<int32_t, int64_t> run_at(int64_t code) const {
    const int64_t origin = code + reach_;
    const int32_t r = run_of_[static_cast<size_t>(origin)];
    const auto& run = runs_[static_cast<size_t>(r)];
    if (origin - run.first > reach_ || run.second - origin > reach_) {
      throw Error("run exceeds its certified reach");
    }
    return {r, origin};
  }
  int64_t run_start(int32_t r) const { return runs_[static_cast<size_t>(r)].first; }
  /// Member indices of a run, in order.
  std::vector<int64_t> run_members(int32_t r) const {
    const auto [a, b] = runs_[static_cast<size_t>(r)];
    std::vector<int64_t> out;
    for (int64_t j = a; j <= b; j += g_) {
      if (member_[static_cast<size_t>(j)]) out.push_back(j);
    }
    return out;
  }

 private:
  void bind(int64_t reach) {
    reach_ = reach;
    cells_ = refine(sys_, u_, u_.lo - reach_, u_.level + 2 * reach_);
    const auto cells_idx = sys_.language().index(cells_.level);
    set_idx_ = sys_.language().index(u_.level, static_cast<int64_t>(cells_idx->word->size()));
    member_ = mask(u_);
    label_runs();
  }

  // One linear pass per residue class; members closer than a cut share a run.
  void label_runs() {
    const auto n = static_cast<int64_t>(member_.size());
    run_of_.assign(member_.size(), -1);
    runs_.clear();
    for (int64_t c = 0; c < g_; ++c) {
      int64_t last = -1;
      for (int64_t j = c; j < n; j += g_) {
        if (!member_[static_cast<size_t>(j)]) continue;
        if (last < 0 || j - last > k_ * g_) runs_.push_back({j, j});
        runs_.back().second = j;
        run_of_[static_cast<size_t>(j)] = static_cast<int32_t>(runs_.size() - 1);
        last = j;
      }
    }
  }

  const System& sys_;
  ClopenSet u_;
  int64_t g_, k_;
  bool unbounded_ = false;
  json witness_;
  int64_t reach_ = 0;
  ClopenSet cells_;
  std::shared_ptr<const FactorIndex> set_idx_;
  std::vector<uint8_t> member_;
  std::vector<int32_t> run_of_;
  std::vector<std::pair<int64_t, int64_t>> runs_;  // first and last member
};

std::pair<int64_t, int64_t> sturmian_steps(const FiniteSubset& f) {
  const auto iv = f.as_arithmetic_interval();
  if (!iv) throw Error("sturmian chains need F of the form g*[-k,k]; got " + f.str());
  return *iv;
}

ComponentAutomaton odometer_components(const System& sys, const ClopenSet& b, const FiniteSubset& f) {
  ComponentAutomaton out;
  out.f = f;
  out.cells = b;
  const Torus t = sys.torus(b.level);
  std::vector<uint8_t> mask(static_cast<size_t>(t.cell_count()), 0);
  for (int64_t c : b.codes) mask[static_cast<size_t>(c)] = 1;
  const auto pc = periodic_components(t, mask, f);
  out.components.resize(pc.components.size());
  for (size_t i = 0; i < pc.components.size(); ++i) {
    const auto& src = pc.components[i];
    auto& dst = out.components[i];
    dst.unbounded = src.unbounded;
    if (src.unbounded) {
      json steps = json::array();
      for (const auto& s : src.cycle) steps.push_back(to_json(s));
      dst.witness = {{"type", "cycle"}, {"cell", cell_name(sys, b, src.root)}, {"steps", steps}};
    } else {
      dst.offsets = pc.offsets_of(i);
    }
  }
  for (int64_t c : b.codes) {
    out.component.push_back(pc.component_of[static_cast<size_t>(c)]);
    out.position.push_back(pc.offset(c));
  }
  return out;
}

ComponentAutomaton sturmian_components(const System& sys, const ClopenSet& b, const FiniteSubset& f) {
  const auto [g, k] = sturmian_steps(f);
  const RunScan scan(sys, b, g, k);
  ComponentAutomaton out;
  out.f = f;
  out.cells = scan.cells();
  if (scan.unbounded()) {
    out.components.push_back({true, {}, scan.witness()});
    out.component.assign(out.cells.size(), 0);
    out.position.assign(out.cells.size(), GroupElement{0});
    return out;
  }
  std::map<std::vector<int64_t>, int32_t> shapes;
  std::unordered_map<int32_t, int32_t> shape_of_run;
  for (int64_t code : out.cells.codes) {
    const auto [r, origin] = scan.run_at(code);
    const int64_t start = scan.run_start(r);
    auto [rit, fresh_run] = shape_of_run.emplace(r, 0);
    if (fresh_run) {
      auto m = scan.run_members(r);
      for (auto& x : m) x -= start;
      auto [it, fresh] = shapes.emplace(std::move(m), static_cast<int32_t>(out.components.size()));
      if (fresh) {
        ComponentAutomaton::Component c;
        for (int64_t x : it->first) c.offsets.push_back(GroupElement{x});
        out.components.push_back(std::move(c));
      }
      rit->second = it->second;
    }
    out.component.push_back(rit->second);
    out.position.push_back(GroupElement{origin - start});
  }
  return out;
}

}  // namespace

ComponentAutomaton f_components(const System& sys, const ClopenSet& b, const FiniteSubset& f) {
  check_steps(sys, f);
  const ClopenSet inside = sys.is_restricted() ? intersect(sys, b, space(sys)) : b;
  if (inside.empty()) {
    ComponentAutomaton out;
    out.f = f;
    out.cells = inside;
    return out;
  }
  return sys.model() == Model::odometer ? odometer_components(sys, inside, f)
                                        : sturmian_components(sys, inside, f);
}

Certificate is_s_bounded(const System& sys, const ComponentAutomaton& comp, const FiniteSubset& s) {
  if (s.dim() != sys.dim()) throw Error("S has wrong dimension");
  Certificate cert;
  cert.kind = "s_bounded";
  cert.params = {{"F", to_json(comp.f)}, {"S", to_json(s)}, {"cells", comp.cell_count()}};
  if (sys.model() == Model::sturmian) {
    cert.params["window"] = {comp.cells.lo, comp.cells.level};
  } else {
    cert.params["depth"] = comp.cells.level;
  }
  std::vector<GroupElement> mu(comp.components.size(), GroupElement(sys.dim()));
  std::vector<int64_t> first_cell(comp.components.size(), -1);
  for (size_t i = 0; i < comp.cell_count(); ++i) {
    auto& fc = first_cell[static_cast<size_t>(comp.component[i])];
    if (fc < 0) fc = static_cast<int64_t>(i);
  }
  json per_comp = json::array();
  for (size_t c = 0; c < comp.components.size(); ++c) {
    const auto& k = comp.components[c];
    const auto cell = static_cast<size_t>(first_cell[c]);
    const auto name = cell_name(sys, comp.cells, comp.cells.codes[cell]);
    if (k.unbounded) {
      cert.pass = false;
      cert.witness = {{"type", "unbounded"}, {"component", c}, {"cell", name}, {"chain", k.witness}};
      return cert;
    }
    const auto m = find_bounding_shift(k.offsets, s);
    if (!m) {
      json labels = json::array();
      for (const auto& l : comp.labels(cell)) labels.push_back(to_json(l));
      cert.pass = false;
      cert.witness = {{"type", "not_s_bounded"},
                      {"component", c},
                      {"cell", name},
                      {"labels", labels},
                      {"diameter", diam_of(k.offsets)}};
      return cert;
    }
    mu[c] = *m;
    per_comp.push_back({{"component", c}, {"size", k.offsets.size()}, {"mu", to_json(*m)}});
  }
  cert.pass = true;
  cert.witness["components"] = std::move(per_comp);
  if (comp.cell_count() <= 512) {
    json cells = json::array();
    for (size_t i = 0; i < comp.cell_count(); ++i) {
      const auto c = static_cast<size_t>(comp.component[i]);
      cells.push_back({{"cell", cell_name(sys, comp.cells, comp.cells.codes[i])},
                       {"component", c},
                       {"lambda", to_json(mu[c] - comp.position[i])}});
    }
    cert.witness["cells"] = std::move(cells);
  } else {
    cert.note = "per-cell witness lambda = mu(component) - position(cell)";
  }
  return cert;
}

Certificate f_separated(const System& sys, const ClopenSet& a, const ClopenSet& b, const FiniteSubset& f) {
  check_steps(sys, f);
  Certificate cert;
  cert.kind = "f_separated";
  cert.params = {{"system", sys.to_json()}, {"F", to_json(f)}, {"A", to_json(sys, a)}, {"B", to_json(sys, b)}};
  const ClopenSet sa = intersect(sys, a, space(sys)), sb = intersect(sys, b, space(sys));
  const ClopenSet both = intersect(sys, sa, sb);
  if (!both.empty()) {
    cert.witness = {{"type", "overlap"}, {"cell", cell_name(sys, both, both.codes.front())}};
    return cert;
  }
  cert.pass = true;
  if (sa.empty() || sb.empty()) return cert;
  const ClopenSet u = unite(sys, sa, sb);
  if (sys.model() == Model::odometer) {
    const auto comp = odometer_components(sys, u, f);
    const auto ra = refine(sys, sa, 0, u.level);
    std::vector<int64_t> in_a(comp.components.size(), -1), in_b(comp.components.size(), -1);
    for (size_t i = 0; i < comp.cell_count(); ++i) {
      const auto c = static_cast<size_t>(comp.component[i]);
      auto& slot = ra.has(u.codes[i]) ? in_a[c] : in_b[c];
      if (slot < 0) slot = static_cast<int64_t>(i);
      if (in_a[c] >= 0 && in_b[c] >= 0) {
        const auto ia = static_cast<size_t>(in_a[c]), ib = static_cast<size_t>(in_b[c]);
        cert.pass = false;
        cert.witness = {{"type", "joined"},
                        {"cell_a", cell_name(sys, u, u.codes[ia])},
                        {"cell_b", cell_name(sys, u, u.codes[ib])},
                        {"offset", to_json(comp.position[ib] - comp.position[ia])},
                        {"unbounded", comp.components[c].unbounded}};
        return cert;
      }
    }
    return cert;
  }
  const auto [g, k] = sturmian_steps(f);
  const RunScan scan(sys, u, g, k);
  const auto ma = scan.mask(refine(sys, sa, scan.set().lo, scan.set().level));
  const auto mb = scan.mask(refine(sys, sb, scan.set().lo, scan.set().level));
  if (scan.unbounded()) {
    // Every progression meets both sets (total minimality).
    cert.pass = false;
    cert.witness = {{"type", "joined"}, {"unbounded", true}, {"chain", scan.witness()}};
    return cert;
  }
  std::unordered_set<int32_t> seen;
  for (int64_t code : scan.cells().codes) {
    const auto [r, origin] = scan.run_at(code);
    if (!seen.insert(r).second) continue;
    std::optional<int64_t> ia, ib;
    for (int64_t j : scan.run_members(r)) {
      if (ma[static_cast<size_t>(j)]) ia = j - origin;
      if (mb[static_cast<size_t>(j)]) ib = j - origin;
    }
    if (ia && ib) {
      cert.pass = false;
      cert.witness = {{"type", "joined"},
                      {"cell", cell_name(sys, scan.cells(), code)},
                      {"offset_a", *ia},
                      {"offset_b", *ib}};
      return cert;
    }
  }
  return cert;
}

ClopenSet component_of_in(const System& sys, const ClopenSet& b, const ClopenSet& v, const FiniteSubset& f) {
  check_steps(sys, f);
  if (!is_subset(sys, b, v)) throw Error("component_of_in: B is not contained in V");
  const ClopenSet sv = intersect(sys, v, space(sys));
  const auto [rv, rb] = align(sys, sv, intersect(sys, b, space(sys)));
  if (rb.empty()) return empty_set(sys);
  if (sys.model() == Model::odometer) {
    const auto comp = odometer_components(sys, rv, f);
    std::vector<uint8_t> hit(comp.components.size(), 0);
    for (size_t i = 0; i < comp.cell_count(); ++i) {
      if (rb.has(rv.codes[i])) hit[static_cast<size_t>(comp.component[i])] = 1;
    }
    ClopenSet out{Model::odometer, 0, rv.level, {}};
    for (size_t i = 0; i < comp.cell_count(); ++i) {
      if (hit[static_cast<size_t>(comp.component[i])]) out.codes.push_back(rv.codes[i]);
    }
    return out;
  }
  const auto [g, k] = sturmian_steps(f);
  const RunScan scan(sys, rv, g, k);
  if (scan.unbounded()) return rv;  // every progression through V meets B
  const auto mb = scan.mask(refine(sys, rb, scan.set().lo, scan.set().level));
  ClopenSet out = scan.cells();
  out.codes.clear();
  std::unordered_map<int32_t, bool> hit;
  for (int64_t code : scan.cells().codes) {
    const int32_t r = scan.run_at(code).first;
    auto [it, fresh] = hit.emplace(r, false);
    if (fresh) {
      for (int64_t j : scan.run_members(r)) {
        if (mb[static_cast<size_t>(j)]) {
          it->second = true;
          break;
        }
      }
    }
    if (it->second) out.codes.push_back(code);
  }
  return out;
}

json to_json(const System& sys, const ComponentAutomaton& comp) {
  json cells = json::array();
  for (size_t i = 0; i < comp.cell_count(); ++i) {
    json entry = {{"cell", cell_name(sys, comp.cells, comp.cells.codes[i])}, {"component", comp.component[i]}};
    if (comp.unbounded(i)) {
      entry["labels"] = "unbounded";
    } else {
      json labels = json::array();
      for (const auto& l : comp.labels(i)) labels.push_back(to_json(l));
      entry["labels"] = std::move(labels);
    }
    cells.push_back(std::move(entry));
  }
  json comps = json::array();
  for (const auto& c : comp.components) {
    json e = {{"unbounded", c.unbounded}};
    if (c.unbounded) e["witness"] = c.witness;
    else e["size"] = c.offsets.size();
    comps.push_back(std::move(e));
  }
  json out = {{"F", to_json(comp.f)}, {"level", comp.cells.level}};
  if (sys.model() == Model::sturmian) out["lo"] = comp.cells.lo;
  out["components"] = std::move(comps);
  out["cells"] = std::move(cells);
  return out;
}

}  // namespace dadcert
