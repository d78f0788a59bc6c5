#include "dadcert/systems.hpp"

#include <algorithm>
#include <iterator>
#include <sstream>

namespace dadcert {

std::string_view model_name(Model m) { return m == Model::odometer ? "odometer" : "sturmian"; }

bool ClopenSet::has(int64_t code) const { return std::binary_search(codes.begin(), codes.end(), code); }

System System::odometer(int p, int dim) {
  if (p < 2) throw Error("odometer base must be >= 2");
  if (dim < 1 || dim > kMaxDim) throw Error("odometer dimension out of range");
  System s;
  s.model_ = Model::odometer;
  s.p_ = p;
  s.dim_ = dim;
  return s;
}

System System::sturmian(const Slope& slope) {
  System s;
  s.model_ = Model::sturmian;
  s.dim_ = 1;
  s.p_ = 0;
  s.lang_ = std::make_shared<const Language>(slope);
  return s;
}

const Language& System::language() const {
  if (!lang_) throw Error("system has no language (not sturmian)");
  return *lang_;
}

Torus System::torus(int64_t level) const {
  if (model_ != Model::odometer) throw Error("torus: not an odometer");
  if (level < 0) throw Error("negative depth");
  int64_t side = 1;
  for (int64_t i = 0; i < level; ++i) {
    if (side > (int64_t{1} << 40) / p_) throw Error("odometer depth too large");
    side *= p_;
  }
  return Torus{dim_, side};
}

int64_t System::cell_count(int64_t level) const {
  if (model_ == Model::odometer) return torus(level).cell_count();
  return static_cast<int64_t>(language().index(level)->codes.size());
}

System System::parent() const {
  System s = *this;
  s.restriction_.reset();
  return s;
}

json System::to_json() const {
  json j;
  j["model"] = model_name(model_);
  if (model_ == Model::odometer) {
    j["p"] = p_;
    j["dim"] = dim_;
  } else {
    j["slope"] = {{"prefix", lang_->slope().prefix}, {"tail", lang_->slope().tail}};
  }
  if (restriction_) j["restriction"] = dadcert::to_json(parent(), *restriction_);
  return j;
}

System System::from_json(const json& j) {
  const auto model = j.at("model").get<std::string>();
  System s;
  if (model == "odometer") {
    s = odometer(j.at("p").get<int>(), j.value("dim", 1));
  } else if (model == "sturmian") {
    Slope slope;
    if (j.contains("slope")) {
      slope.prefix = j["slope"].value("prefix", std::vector<int>{});
      slope.tail = j["slope"].value("tail", std::vector<int>{1});
    }
    s = sturmian(slope);
  } else {
    throw Error("unknown model " + model);
  }
  if (j.contains("restriction")) s = restrict(s, clopen_from_json(s, j["restriction"]));
  return s;
}

std::string System::str() const {
  std::ostringstream os;
  if (model_ == Model::odometer) {
    os << "odometer(p=" << p_ << ", d=" << dim_ << ")";
  } else {
    os << "sturmian" << lang_->slope().str();
  }
  if (restriction_) os << " restricted to " << restriction_->size() << " cells";
  return os.str();
}

ClopenSet empty_set(const System& sys) { return ClopenSet{sys.model(), 0, 0, {}}; }

ClopenSet full_set(const System& sys) { return ClopenSet{sys.model(), 0, 0, {0}}; }

ClopenSet space(const System& sys) { return sys.restriction() ? *sys.restriction() : full_set(sys); }

ClopenSet residues(const System& sys, int64_t level, const std::vector<GroupElement>& cells) {
  const Torus t = sys.torus(level);
  ClopenSet a{Model::odometer, 0, level, {}};
  for (const auto& c : cells) {
    if (c.dim() != sys.dim()) throw Error("residue vector has wrong dimension");
    for (int i = 0; i < c.dim(); ++i) {
      if (c[i] < 0 || c[i] >= t.side) throw Error("residue " + c.str() + " out of range");
    }
    a.codes.push_back(t.encode(c));
  }
  std::sort(a.codes.begin(), a.codes.end());
  a.codes.erase(std::unique(a.codes.begin(), a.codes.end()), a.codes.end());
  return a;
}

ClopenSet cylinders(const System& sys, int64_t lo, const std::vector<std::string>& words) {
  if (sys.model() != Model::sturmian) throw Error("cylinders: not a sturmian system");
  if (words.empty()) return empty_set(sys);
  const auto len = static_cast<int64_t>(words.front().size());
  const auto idx = sys.language().index(len);
  ClopenSet a{Model::sturmian, lo, len, {}};
  for (const auto& w : words) {
    const int64_t code = idx->find(w);
    if (code < 0) throw Error("word '" + w + "' is not admissible");
    a.codes.push_back(code);
  }
  std::sort(a.codes.begin(), a.codes.end());
  a.codes.erase(std::unique(a.codes.begin(), a.codes.end()), a.codes.end());
  return a;
}

std::vector<std::string> describe(const System& sys, const ClopenSet& a) {
  std::vector<std::string> out;
  if (sys.model() == Model::odometer) {
    const Torus t = sys.torus(a.level);
    for (int64_t c : a.codes) {
      const auto g = t.decode(c);
      out.push_back(sys.dim() == 1 ? std::to_string(g[0]) : g.str());
    }
  } else {
    const auto idx = sys.language().index(a.level);
    for (int64_t c : a.codes) out.emplace_back(idx->factor(c));
  }
  return out;
}

namespace {

void check_model(const System& sys, const ClopenSet& a) {
  if (a.model != sys.model()) throw Error("clopen set model does not match system");
}

}  // namespace

ClopenSet translate(const System& sys, const ClopenSet& a, const GroupElement& g) {
  check_model(sys, a);
  if (g.dim() != sys.dim()) throw Error("translate: group element dimension mismatch");
  ClopenSet out = a;
  if (sys.model() == Model::sturmian) {
    if (a.level > 0) out.lo = a.lo - g[0];
    return out;
  }
  const Torus t = sys.torus(a.level);
  for (auto& c : out.codes) c = t.shift(c, g);
  std::sort(out.codes.begin(), out.codes.end());
  return out;
}

ClopenSet refine(const System& sys, const ClopenSet& a, int64_t lo, int64_t level) {
  check_model(sys, a);
  if (sys.model() == Model::odometer) {
    if (level < a.level) throw Error("refine: depth smaller than current");
    if (level == a.level) return a;
    const Torus coarse = sys.torus(a.level), fine = sys.torus(level);
    const int64_t ratio = fine.side / coarse.side;
    const int dim = sys.dim();
    int64_t lifts = 1;
    for (int i = 0; i < dim; ++i) lifts *= ratio;
    ClopenSet out{Model::odometer, 0, level, {}};
    out.codes.reserve(a.codes.size() * static_cast<size_t>(lifts));
    for (int64_t c : a.codes) {
      const auto base = coarse.decode(c);
      for (int64_t k = 0; k < lifts; ++k) {
        GroupElement x = base;
        int64_t rest = k;
        for (int i = 0; i < dim; ++i) {
          x[i] += (rest % ratio) * coarse.side;
          rest /= ratio;
        }
        out.codes.push_back(fine.encode(x));
      }
    }
    std::sort(out.codes.begin(), out.codes.end());
    return out;
  }
  if (a.level == 0) {
    // Empty or full: position-independent.
    if (a.empty()) return ClopenSet{Model::sturmian, lo, level, {}};
    return ClopenSet{Model::sturmian, lo, level, sys.language().index(level)->codes};
  }
  if (lo > a.lo || lo + level < a.lo + a.level) throw Error("refine: window does not contain current window");
  if (lo == a.lo && level == a.level) return a;
  const auto big = sys.language().index(level);
  const auto small =
      sys.language().index(a.level, static_cast<int64_t>(big->word->size()));
  const int64_t shift = a.lo - lo;
  ClopenSet out{Model::sturmian, lo, level, {}};
  for (int64_t c : big->codes) {
    if (a.has(small->code_at[static_cast<size_t>(c + shift)])) out.codes.push_back(c);
  }
  return out;
}

namespace {

// Projection of A onto the sub-window [lo+skip, lo+skip+len).
ClopenSet project(const System& sys, const ClopenSet& a, int64_t skip, int64_t len) {
  const auto big = sys.language().index(a.level);
  const auto small = sys.language().index(len, static_cast<int64_t>(big->word->size()));
  ClopenSet p{Model::sturmian, a.lo + skip, len, {}};
  for (int64_t c : a.codes) p.codes.push_back(small->code_at[static_cast<size_t>(c + skip)]);
  std::sort(p.codes.begin(), p.codes.end());
  p.codes.erase(std::unique(p.codes.begin(), p.codes.end()), p.codes.end());
  return p;
}

}  // namespace

ClopenSet normalize(const System& sys, const ClopenSet& a) {
  check_model(sys, a);
  if (a.empty()) return empty_set(sys);
  if (sys.model() == Model::odometer) {
    ClopenSet cur = a;
    while (cur.level > 0) {
      const Torus fine = sys.torus(cur.level), coarse = sys.torus(cur.level - 1);
      std::vector<int64_t> proj;
      for (int64_t c : cur.codes) proj.push_back(coarse.encode(fine.decode(c)));
      std::sort(proj.begin(), proj.end());
      proj.erase(std::unique(proj.begin(), proj.end()), proj.end());
      ClopenSet cand{Model::odometer, 0, cur.level - 1, std::move(proj)};
      if (refine(sys, cand, 0, cur.level).size() != cur.size()) break;
      cur = std::move(cand);
    }
    return cur;
  }
  ClopenSet cur = a;
  bool changed = true;
  while (changed && cur.level > 0) {
    changed = false;
    for (int64_t skip : {int64_t{1}, int64_t{0}}) {
      if (cur.level == 0) break;
      ClopenSet cand = project(sys, cur, skip, cur.level - 1);
      if (refine(sys, cand, cur.lo, cur.level).size() == cur.size()) {
        cur = std::move(cand);
        changed = true;
      }
    }
  }
  if (cur.level == 0) cur.lo = 0;
  return cur;
}

std::pair<ClopenSet, ClopenSet> align(const System& sys, const ClopenSet& a, const ClopenSet& b) {
  check_model(sys, a);
  check_model(sys, b);
  if (sys.model() == Model::odometer) {
    const int64_t level = std::max(a.level, b.level);
    return {refine(sys, a, 0, level), refine(sys, b, 0, level)};
  }
  if (a.level == 0 && b.level == 0) return {a, b};
  if (a.level == 0) return {refine(sys, a, b.lo, b.level), b};
  if (b.level == 0) return {a, refine(sys, b, a.lo, a.level)};
  const int64_t lo = std::min(a.lo, b.lo);
  const int64_t hi = std::max(a.lo + a.level, b.lo + b.level);
  return {refine(sys, a, lo, hi - lo), refine(sys, b, lo, hi - lo)};
}

namespace {

template <class Op>
ClopenSet combine(const System& sys, const ClopenSet& a, const ClopenSet& b, Op op) {
  auto [x, y] = align(sys, a, b);
  ClopenSet out{x.model, x.lo, x.level, {}};
  op(x.codes.begin(), x.codes.end(), y.codes.begin(), y.codes.end(), std::back_inserter(out.codes));
  return out;
}

std::vector<int64_t> all_codes(const System& sys, int64_t level) {
  if (sys.model() == Model::sturmian) return sys.language().index(level)->codes;
  std::vector<int64_t> v(static_cast<size_t>(sys.torus(level).cell_count()));
  for (size_t i = 0; i < v.size(); ++i) v[i] = static_cast<int64_t>(i);
  return v;
}

}  // namespace

ClopenSet unite(const System& sys, const ClopenSet& a, const ClopenSet& b) {
  return combine(sys, a, b, [](auto... args) { return std::set_union(args...); });
}

ClopenSet intersect(const System& sys, const ClopenSet& a, const ClopenSet& b) {
  return combine(sys, a, b, [](auto... args) { return std::set_intersection(args...); });
}

ClopenSet subtract(const System& sys, const ClopenSet& a, const ClopenSet& b) {
  return combine(sys, a, b, [](auto... args) { return std::set_difference(args...); });
}

ClopenSet complement(const System& sys, const ClopenSet& a) {
  check_model(sys, a);
  ClopenSet out{a.model, a.lo, a.level, {}};
  const auto all = all_codes(sys, a.level);
  std::set_difference(all.begin(), all.end(), a.codes.begin(), a.codes.end(),
                      std::back_inserter(out.codes));
  return out;
}

bool same_set(const System& sys, const ClopenSet& a, const ClopenSet& b) {
  const auto [x, y] = align(sys, a, b);
  return x.codes == y.codes;
}

bool is_subset(const System& sys, const ClopenSet& a, const ClopenSet& b) {
  const auto [x, y] = align(sys, a, b);
  return std::includes(y.codes.begin(), y.codes.end(), x.codes.begin(), x.codes.end());
}

System restrict(const System& sys, const ClopenSet& y) {
  check_model(sys, y);
  System out = sys;
  out.restriction_ = sys.restriction() ? intersect(sys, *sys.restriction(), y) : y;
  return out;
}

ClopenSet domain(const System& sys, const GroupElement& g) {
  if (!sys.restriction()) return full_set(sys);
  const auto& y = *sys.restriction();
  return intersect(sys, y, translate(sys, y, -g));
}

std::vector<std::string> admissible_words(const System& sys, int64_t len) {
  if (len < 1) throw Error("admissible_words: length must be positive");
  const auto idx = sys.language().index(len);
  std::vector<std::string> out;
  for (int64_t c : idx->codes) out.emplace_back(idx->factor(c));
  std::sort(out.begin(), out.end());
  return out;
}

namespace {

// Longest factor of the word with period q, and where it starts.
std::pair<int64_t, int64_t> longest_periodic(const std::string& u, int64_t q) {
  int64_t best = 0, at = 0, run = 0;
  const auto n = static_cast<int64_t>(u.size());
  for (int64_t j = 0; j + q < n; ++j) {
    run = u[static_cast<size_t>(j)] == u[static_cast<size_t>(j + q)] ? run + 1 : 0;
    if (run > best) {
      best = run;
      at = j - run + 1;
    }
  }
  return {best + q, at};
}

}  // namespace

Certificate check_free(const System& sys, const FiniteSubset& f, int64_t depth) {
  if (f.dim() != sys.dim()) throw Error("check_free: dimension mismatch");
  if (depth < 1) throw Error("check_free: depth must be positive");
  Certificate cert;
  cert.kind = "check_free";
  cert.params = {{"system", sys.to_json()}, {"F", to_json(f)}, {"depth", depth}};
  if (sys.model() == Model::odometer) {
    cert.pass = true;
    cert.note = "translation by a nonzero vector of Z^d has no fixed point on Z_p^d";
    return cert;
  }
  const int64_t spread = diam(f);
  const Language& lang = sys.language();
  if (const int64_t per = lang.period(); per > 0) {
    cert.pass = per > spread;
    const auto u = lang.reference(std::max(depth, per));
    if (!cert.pass) {
      cert.witness = {{"period", per},
                      {"word", u->substr(0, static_cast<size_t>(std::max(depth, per)))}};
      cert.note = "degenerate slope: every point is periodic";
    } else {
      cert.note = "periodic language whose period exceeds every difference in F";
    }
    return cert;
  }
  // Sturmian complexity L+1 forces aperiodicity; find, for each period q,
  // the resolution at which no cell is q-periodic.
  cert.pass = true;
  json per_q = json::array();
  for (int64_t q = 1; q <= spread; ++q) {
    int64_t resolution = depth;
    std::pair<int64_t, int64_t> lp;
    while (true) {
      const auto u = lang.reference(resolution);
      lp = longest_periodic(*u, q);
      if (lp.first < resolution) break;
      resolution = lp.first + 1;
    }
    json entry = {{"period", q}, {"resolution", resolution}};
    if (resolution > depth) {
      const auto u = lang.reference(resolution);
      entry["periodic_cell"] = u->substr(static_cast<size_t>(lp.second), static_cast<size_t>(depth));
    }
    per_q.push_back(entry);
  }
  cert.witness = {{"separation", per_q}};
  cert.note = "complexity L+1 at every length implies aperiodicity";
  return cert;
}

Certificate open_enlarge(const System& sys, const ClopenSet& a) {
  Certificate cert;
  cert.kind = "open_enlarge";
  cert.pass = true;
  cert.params = {{"set", to_json(sys, a)}};
  cert.note = "clopen set: it is its own open neighbourhood";
  return cert;
}

json to_json(const System& sys, const ClopenSet& a) {
  check_model(sys, a);
  json j;
  if (sys.model() == Model::sturmian) j["lo"] = a.lo;
  j["level"] = a.level;
  if (a.size() <= 64 && (sys.model() == Model::odometer || a.level <= 32)) {
    if (sys.model() == Model::sturmian) {
      j["words"] = describe(sys, a);
    } else {
      const Torus t = sys.torus(a.level);
      json cells = json::array();
      for (int64_t c : a.codes) cells.push_back(to_json(t.decode(c)));
      j["cells"] = std::move(cells);
    }
    return j;
  }
  // Runs of consecutive codes [first, last].
  json runs = json::array();
  for (size_t i = 0; i < a.codes.size();) {
    size_t k = i;
    while (k + 1 < a.codes.size() && a.codes[k + 1] == a.codes[k] + 1) ++k;
    runs.push_back({a.codes[i], a.codes[k]});
    i = k + 1;
  }
  j["runs"] = std::move(runs);
  return j;
}

ClopenSet clopen_from_json(const System& sys, const json& j) {
  const int64_t level = j.at("level").get<int64_t>();
  const int64_t lo = j.value("lo", int64_t{0});
  if (level < 0) throw Error("clopen set: negative level");
  if (j.contains("words")) {
    auto words = j["words"].get<std::vector<std::string>>();
    for (const auto& w : words) {
      if (static_cast<int64_t>(w.size()) != level) throw Error("clopen set: word length differs from level");
    }
    if (words.empty()) return ClopenSet{Model::sturmian, lo, level, {}};
    return cylinders(sys, lo, words);
  }
  if (j.contains("cells")) {
    std::vector<GroupElement> cells;
    for (const auto& c : j["cells"]) cells.push_back(element_from_json(c, sys.dim()));
    return residues(sys, level, cells);
  }
  ClopenSet a{sys.model(), lo, level, {}};
  const auto valid = all_codes(sys, level);
  for (const auto& r : j.at("runs")) {
    const auto first = r.at(0).get<int64_t>(), last = r.at(1).get<int64_t>();
    for (int64_t c = first; c <= last; ++c) {
      if (!std::binary_search(valid.begin(), valid.end(), c)) {
        throw Error("clopen set: invalid code " + std::to_string(c));
      }
      a.codes.push_back(c);
    }
  }
  if (!std::is_sorted(a.codes.begin(), a.codes.end()) ||
      std::adjacent_find(a.codes.begin(), a.codes.end()) != a.codes.end()) {
    throw Error("clopen set: runs must be increasing and disjoint");
  }
  return a;
}

}  // namespace dadcert
