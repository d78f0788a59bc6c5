#include "dadcert/oracle.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <set>

#include "dadcert/chains.hpp"

namespace dadcert {

namespace {

int64_t ipow(int64_t b, int64_t e) {
  int64_t r = 1;
  for (int64_t i = 0; i < e; ++i) {
    if (r > kOracleMaxPoints) throw GuardError("oracle: model exceeds the size guard");
    r *= b;
  }
  return r;
}

int64_t floor_mod(int64_t a, int64_t m) { return ((a % m) + m) % m; }

}  // namespace

FiniteQuotientModel FiniteQuotientModel::odometer(const System& sys, int64_t depth) {
  if (sys.model() != Model::odometer) throw Error("oracle: not an odometer");
  if (ipow(ipow(sys.base(), depth), sys.dim()) > kOracleMaxPoints) {
    throw GuardError("oracle: model exceeds the size guard");
  }
  return FiniteQuotientModel{sys, depth, {}};
}

FiniteQuotientModel FiniteQuotientModel::sturmian(const System& sys, int64_t length) {
  if (sys.model() != Model::sturmian) throw Error("oracle: not a sturmian system");
  if (length > kOracleMaxPoints) throw GuardError("oracle: model exceeds the size guard");
  // Standard words, generated here without the systems module's engine.
  const Slope& slope = sys.language().slope();
  std::string prev = "1", cur = "0";
  for (size_t n = 0; static_cast<int64_t>(cur.size()) < length; ++n) {
    const int a = slope.coefficient(n);
    std::string next;
    for (int i = 0; i < a; ++i) next += cur;
    next += prev;
    if (a == 0 && n >= slope.prefix.size()) {
      // Degenerate tail: the word is periodic from here on.
      while (static_cast<int64_t>(cur.size()) < length) cur += cur;
      break;
    }
    prev = std::move(cur);
    cur = std::move(next);
  }
  cur.resize(static_cast<size_t>(length));
  return FiniteQuotientModel{sys, length, std::move(cur)};
}

int64_t FiniteQuotientModel::point_count() const {
  if (system.model() == Model::sturmian) return level;
  return ipow(ipow(system.base(), level), system.dim());
}

int64_t FiniteQuotientModel::act(int64_t point, const GroupElement& g) const {
  if (system.model() == Model::sturmian) {
    const int64_t q = point + g[0];
    return q >= 0 && q < level ? q : -1;
  }
  const int64_t side = ipow(system.base(), level);
  int64_t out = 0, mul = 1;
  for (int i = 0; i < system.dim(); ++i) {
    const int64_t digit = point % side;
    point /= side;
    out += floor_mod(digit + g[i], side) * mul;
    mul *= side;
  }
  return out;
}

bool FiniteQuotientModel::contains(const ClopenSet& a, int64_t point) const {
  if (system.model() == Model::sturmian) {
    if (point + a.lo < 0 || point + a.lo + a.level > level) throw Error("oracle: window leaves the segment");
    const auto words = describe(system, a);
    const auto w = segment.substr(static_cast<size_t>(point + a.lo), static_cast<size_t>(a.level));
    return std::find(words.begin(), words.end(), w) != words.end();
  }
  if (a.level > level) throw Error("oracle: set is finer than the model");
  const int64_t side = ipow(system.base(), level), coarse = ipow(system.base(), a.level);
  int64_t code = 0, mul = 1;
  for (int i = 0; i < system.dim(); ++i) {
    code += (point % side) % coarse * mul;
    point /= side;
    mul *= coarse;
  }
  return a.has(code);
}

namespace {

// Membership of every model point in B.
std::vector<uint8_t> membership(const FiniteQuotientModel& model, const ClopenSet& b) {
  const int64_t n = model.point_count();
  std::vector<uint8_t> in(static_cast<size_t>(n), 0);
  if (model.system.model() == Model::odometer) {
    for (int64_t x = 0; x < n; ++x) in[static_cast<size_t>(x)] = model.contains(b, x);
    return in;
  }
  const auto words = describe(model.system, b);
  const std::set<std::string> dict(words.begin(), words.end());
  for (int64_t x = 0; x < n; ++x) {
    if (x + b.lo < 0 || x + b.lo + b.level > n) continue;
    in[static_cast<size_t>(x)] =
        dict.count(model.segment.substr(static_cast<size_t>(x + b.lo), static_cast<size_t>(b.level)));
  }
  return in;
}

// Odometer: a bounded component visits each residue at most once, so more
// points than members of B means the component is infinite. Sturmian: the
// component is infinite (or undetermined) when it reaches the segment edge.
PointLabels bfs(const FiniteQuotientModel& model, const std::vector<uint8_t>& in, int64_t members,
                int64_t start, const std::vector<GroupElement>& moves, int64_t edge) {
  const bool sturm = model.system.model() == Model::sturmian;
  std::set<GroupElement> seen{GroupElement(model.system.dim())};
  std::deque<GroupElement> queue{GroupElement(model.system.dim())};
  while (!queue.empty()) {
    const auto m = queue.front();
    queue.pop_front();
    for (const auto& f : moves) {
      const auto next = m + f;
      if (seen.count(next)) continue;
      const int64_t x = model.act(start, next);
      if (sturm && (x < edge || x >= model.level - edge)) return std::nullopt;
      if (x < 0 || !in[static_cast<size_t>(x)]) continue;
      seen.insert(next);
      if (!sturm && static_cast<int64_t>(seen.size()) > members) return std::nullopt;
      queue.push_back(next);
    }
  }
  return std::vector<GroupElement>(seen.begin(), seen.end());
}

}  // namespace

std::vector<std::pair<int64_t, PointLabels>> naive_components(const FiniteQuotientModel& model,
                                                              const ClopenSet& b, const FiniteSubset& f) {
  if (model.point_count() > kOracleMaxPoints) throw GuardError("oracle: model exceeds the size guard");
  std::vector<GroupElement> moves;
  for (const auto& g : f.elements()) {
    if (!g.is_identity()) moves.push_back(g);
  }
  const auto in = membership(model, b);
  const auto members = static_cast<int64_t>(std::count(in.begin(), in.end(), 1));
  const int64_t edge = std::max<int64_t>({0, -b.lo, b.lo + b.level});
  std::vector<std::pair<int64_t, PointLabels>> out;
  if (model.system.model() == Model::odometer) {
    for (int64_t x = 0; x < model.point_count(); ++x) {
      if (in[static_cast<size_t>(x)]) out.emplace_back(x, bfs(model, in, members, x, moves, edge));
    }
    return out;
  }
  // Segment points are distinct points of the orbit: one BFS per component.
  const int64_t n = model.point_count();
  std::vector<int64_t> comp(static_cast<size_t>(n), -1);
  std::vector<std::vector<int64_t>> members_of;
  std::vector<uint8_t> escaped;
  for (int64_t x = 0; x < n; ++x) {
    if (!in[static_cast<size_t>(x)] || comp[static_cast<size_t>(x)] >= 0) continue;
    const auto id = static_cast<int64_t>(members_of.size());
    std::vector<int64_t> pts{x};
    bool esc = false;
    comp[static_cast<size_t>(x)] = id;
    for (size_t head = 0; head < pts.size(); ++head) {
      for (const auto& f : moves) {
        const int64_t y = pts[head] + f[0];
        if (y < edge || y >= n - edge) {
          esc = true;
          continue;
        }
        if (!in[static_cast<size_t>(y)] || comp[static_cast<size_t>(y)] >= 0) continue;
        comp[static_cast<size_t>(y)] = id;
        pts.push_back(y);
      }
    }
    std::sort(pts.begin(), pts.end());
    members_of.push_back(std::move(pts));
    escaped.push_back(esc);
  }
  for (int64_t x = 0; x < n; ++x) {
    if (!in[static_cast<size_t>(x)]) continue;
    const auto id = static_cast<size_t>(comp[static_cast<size_t>(x)]);
    if (escaped[id]) {
      out.emplace_back(x, std::nullopt);
      continue;
    }
    std::vector<GroupElement> labels;
    for (int64_t y : members_of[id]) labels.push_back(GroupElement{y - x});
    out.emplace_back(x, std::move(labels));
  }
  return out;
}

Certificate compare_components(const FiniteQuotientModel& model, const ClopenSet& b, const FiniteSubset& f) {
  const System& sys = model.system;
  Certificate cert;
  cert.kind = "oracle_agreement";
  cert.params = {{"system", sys.to_json()}, {"model_level", model.level}, {"B", to_json(sys, b)},
                 {"F", to_json(f)}};
  const auto comp = f_components(sys, b, f);
  const auto naive = naive_components(model, b, f);
  std::vector<uint8_t> hit(comp.cell_count(), 0);
  int64_t checked = 0;

  std::shared_ptr<const FactorIndex> idx;
  int64_t margin = 0;
  if (sys.model() == Model::sturmian) {
    idx = sys.language().index(comp.cells.level);
    margin = comp.cells.level + std::abs(comp.cells.lo) + 2 * (std::abs(b.lo) + b.level) + 8;
  }
  for (const auto& [x, labels] : naive) {
    int64_t code = 0;
    if (sys.model() == Model::odometer) {
      const Torus coarse = sys.torus(comp.cells.level);
      const int64_t side = sys.torus(model.level).side;
      GroupElement g(sys.dim());
      int64_t rest = x;
      for (int i = 0; i < sys.dim(); ++i) {
        g[i] = rest % side;
        rest /= side;
      }
      code = coarse.encode(g);
    } else {
      if (x < margin || x >= model.level - margin) continue;
      code = idx->find(model.segment.substr(static_cast<size_t>(x + comp.cells.lo),
                                            static_cast<size_t>(comp.cells.level)));
    }
    const int64_t cell = comp.find(code);
    ++checked;
    auto fail = [&](const std::string& why) {
      cert.pass = false;
      cert.witness = {{"point", x}, {"reason", why}};
      if (labels) {
        json l = json::array();
        for (const auto& g : *labels) l.push_back(to_json(g));
        cert.witness["oracle_labels"] = l;
      }
      return cert;
    };
    if (cell < 0) return fail("point of B has no automaton cell");
    hit[static_cast<size_t>(cell)] = 1;
    if (comp.unbounded(static_cast<size_t>(cell))) {
      if (labels) return fail("automaton says unbounded, oracle found a finite component");
      continue;
    }
    if (!labels) return fail("automaton says bounded, oracle component is infinite");
    if (*labels != comp.labels(static_cast<size_t>(cell))) return fail("label sets differ");
  }
  if (std::find(hit.begin(), hit.end(), 0) != hit.end()) {
    cert.pass = false;
    cert.witness = {{"reason", "model does not reach every automaton cell"}};
    return cert;
  }
  cert.pass = true;
  cert.witness = {{"points_checked", checked}, {"cells", comp.cell_count()}};
  return cert;
}

namespace {

// Exhaustive λ search over the bounding box of the labels widened by S.
bool s_bounded_naive(const std::vector<GroupElement>& labels, const FiniteSubset& s) {
  const int dim = labels.front().dim();
  const int64_t r = s.radius();
  GroupElement lo = labels.front(), hi = labels.front();
  for (const auto& l : labels) {
    for (int i = 0; i < dim; ++i) {
      lo[i] = std::min(lo[i], l[i]);
      hi[i] = std::max(hi[i], l[i]);
    }
  }
  GroupElement lam(dim);
  std::function<bool(int)> search = [&](int axis) {
    if (axis == dim) {
      return std::all_of(labels.begin(), labels.end(), [&](const auto& l) { return s.contains(l - lam); });
    }
    for (int64_t v = hi[axis] - r; v <= lo[axis] + r; ++v) {
      lam[axis] = v;
      if (search(axis + 1)) return true;
    }
    return false;
  };
  return search(0);
}

}  // namespace

std::optional<int> exhaustive_min_colors(const FiniteQuotientModel& model, const FiniteSubset& f,
                                         const FiniteSubset& s, int cap) {
  if (model.system.model() != Model::odometer) throw Error("oracle: coloring search needs an odometer model");
  const int64_t n = model.point_count();
  if (n > kOracleMaxColorPoints) throw GuardError("oracle: coloring search exceeds the size guard");
  std::vector<GroupElement> moves;
  for (const auto& g : f.elements()) {
    if (!g.is_identity()) moves.push_back(g);
  }
  for (int c = 1; c <= cap; ++c) {
    std::vector<int> color(static_cast<size_t>(n), 0);
    while (true) {
      bool ok = true;
      for (int j = 0; j < c && ok; ++j) {
        std::vector<uint8_t> in(static_cast<size_t>(n));
        for (int64_t x = 0; x < n; ++x) in[static_cast<size_t>(x)] = color[static_cast<size_t>(x)] == j;
        const auto members = static_cast<int64_t>(std::count(in.begin(), in.end(), 1));
        for (int64_t x = 0; x < n && ok; ++x) {
          if (!in[static_cast<size_t>(x)]) continue;
          const auto labels = bfs(model, in, members, x, moves, 0);
          ok = labels && s_bounded_naive(*labels, s);
        }
      }
      if (ok) return c;
      size_t i = 0;
      while (i < color.size() && ++color[i] == c) color[i++] = 0;
      if (i == color.size()) break;
    }
  }
  return std::nullopt;
}

}  // namespace dadcert
