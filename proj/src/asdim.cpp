#include "dadcert/asdim.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <mutex>

namespace dadcert {

GroupCover::GroupCover(int dim, int64_t period, std::vector<std::vector<uint8_t>> colors,
                       int64_t scale)
    : torus_{dim, period}, colors_(std::move(colors)), scale_(scale) {
  if (period < 1) throw Error("group cover period must be positive");
  const auto n = static_cast<size_t>(torus_.cell_count());
  for (const auto& c : colors_) {
    if (c.size() != n) throw Error("group cover color mask has wrong size");
  }
}

bool GroupCover::contains(size_t color, const GroupElement& g) const {
  return colors_[color][static_cast<size_t>(torus_.encode(g))] != 0;
}

int GroupCover::color_of(const GroupElement& g) const {
  const auto code = static_cast<size_t>(torus_.encode(g));
  for (size_t j = 0; j < colors_.size(); ++j) {
    if (colors_[j][code]) return static_cast<int>(j);
  }
  return -1;
}

json GroupCover::to_json() const {
  json j;
  j["dim"] = dim();
  j["period"] = std::vector<int64_t>(static_cast<size_t>(dim()), period());
  j["scale"] = scale_;
  json colors = json::array();
  for (const auto& mask : colors_) {
    json cells = json::array();
    for (size_t c = 0; c < mask.size(); ++c) {
      if (mask[c]) cells.push_back(dadcert::to_json(torus_.decode(static_cast<int64_t>(c))));
    }
    colors.push_back(std::move(cells));
  }
  j["colors"] = std::move(colors);
  return j;
}

GroupCover GroupCover::from_json(const json& j) {
  const int dim = j.at("dim").get<int>();
  const auto period = j.at("period").get<std::vector<int64_t>>();
  if (static_cast<int>(period.size()) != dim ||
      std::adjacent_find(period.begin(), period.end(), std::not_equal_to<>()) != period.end()) {
    throw Error("group cover period must be the same in every coordinate");
  }
  Torus t{dim, period.front()};
  std::vector<std::vector<uint8_t>> colors;
  for (const auto& cells : j.at("colors")) {
    std::vector<uint8_t> mask(static_cast<size_t>(t.cell_count()), 0);
    for (const auto& e : cells) {
      const auto g = element_from_json(e, dim);
      for (int i = 0; i < dim; ++i) {
        if (g[i] < 0 || g[i] >= t.side) throw Error("group cover cell outside the period box");
      }
      mask[static_cast<size_t>(t.encode(g))] = 1;
    }
    colors.push_back(std::move(mask));
  }
  return GroupCover(dim, t.side, std::move(colors), j.value("scale", int64_t{1}));
}

GroupCover grid_cover(int dim, int64_t r) {
  if (dim < 1 || dim > kMaxDim) throw Error("grid_cover: unsupported dimension");
  if (r < 1) throw Error("grid_cover: scale must be >= 1");
  if (dim == 1) {
    // Alternating intervals of length 4r.
    const int64_t len = 4 * r;
    std::vector<uint8_t> a(static_cast<size_t>(2 * len), 0), b(static_cast<size_t>(2 * len), 0);
    for (int64_t x = 0; x < 2 * len; ++x) (x < len ? a : b)[static_cast<size_t>(x)] = 1;
    return GroupCover(1, 2 * len, {std::move(a), std::move(b)}, r);
  }
  // Family j: bricks of side L on the grid shifted by 2rj along the diagonal,
  // eroded by r from every face.
  const int64_t side = 2 * (dim + 1) * r;
  const Torus t{dim, side};
  if (t.cell_count() > kMaxGridCells) {
    throw Error("grid_cover: period box of " + std::to_string(t.cell_count()) + " cells is too large");
  }
  const auto n = static_cast<size_t>(t.cell_count());
  std::vector<std::vector<uint8_t>> colors(static_cast<size_t>(dim + 1),
                                           std::vector<uint8_t>(n, 0));
  for (size_t code = 0; code < n; ++code) {
    const GroupElement x = t.decode(static_cast<int64_t>(code));
    for (int j = 0; j <= dim; ++j) {
      bool inside = true;
      for (int i = 0; i < dim && inside; ++i) {
        const int64_t pos = (((x[i] - 2 * r * j) % side) + side) % side;
        inside = pos >= r && pos < side - r;
      }
      if (inside) colors[static_cast<size_t>(j)][code] = 1;
    }
  }
  return GroupCover(dim, side, std::move(colors), r);
}

namespace {

struct Extremes {
  int64_t diameter = 0;
  size_t lo = 0, hi = 0;  // indices realizing the diameter
};

Extremes extremes(const std::vector<GroupElement>& pts) {
  const int dim = pts.front().dim();
  Extremes best;
  for (int mask = 0; mask < (1 << (dim - 1)); ++mask) {
    int64_t lo = std::numeric_limits<int64_t>::max(), hi = std::numeric_limits<int64_t>::min();
    size_t ilo = 0, ihi = 0;
    for (size_t k = 0; k < pts.size(); ++k) {
      int64_t v = pts[k][0];
      for (int i = 1; i < dim; ++i) v += ((mask >> (i - 1)) & 1) ? -pts[k][i] : pts[k][i];
      if (v < lo) lo = v, ilo = k;
      if (v > hi) hi = v, ihi = k;
    }
    if (hi - lo > best.diameter) best = {hi - lo, ilo, ihi};
  }
  return best;
}

json point_list(const std::vector<GroupElement>& pts) {
  json arr = json::array();
  for (const auto& p : pts) arr.push_back(to_json(p));
  return arr;
}

// Walk the unbounded cycle until the chain is longer than `bound`.
std::vector<GroupElement> pumped_chain(const PeriodicComponents& pc, size_t comp, int64_t bound) {
  const auto& c = pc.components[comp];
  GroupElement at = pc.torus.decode(c.root);
  std::vector<GroupElement> chain{at};
  const GroupElement start = at;
  while (l1_distance(start, at) <= bound) {
    for (const auto& step : c.cycle) {
      at += step;
      chain.push_back(at);
      if (l1_distance(start, at) > bound) break;
    }
  }
  return chain;
}

// Chain lo -> root -> hi through the BFS tree.
std::vector<GroupElement> tree_chain(const PeriodicComponents& pc, size_t comp, int64_t from,
                                     int64_t to) {
  const GroupElement root = pc.torus.decode(pc.components[comp].root);
  std::vector<GroupElement> chain;
  GroupElement at = root + pc.offset(from);
  chain.push_back(at);
  auto up = pc.steps_from_root(from);
  for (auto it = up.rbegin(); it != up.rend(); ++it) {
    at = at - *it;
    chain.push_back(at);
  }
  for (const auto& s : pc.steps_from_root(to)) {
    at += s;
    chain.push_back(at);
  }
  return chain;
}

std::optional<GroupElement> first_uncovered(const GroupCover& cover) {
  const auto n = static_cast<size_t>(cover.torus().cell_count());
  for (size_t c = 0; c < n; ++c) {
    bool hit = false;
    for (size_t j = 0; j < cover.color_count() && !hit; ++j) hit = cover.mask(j)[c] != 0;
    if (!hit) return cover.torus().decode(static_cast<int64_t>(c));
  }
  return std::nullopt;
}

// Component scan shared by verification and the control function. Returns
// the largest diameter seen and records the first violation of `bound` in cert.
int64_t scan_components(const GroupCover& cover, int64_t r, std::optional<int64_t> bound,
                        Certificate& cert) {
  int64_t largest = 0;
  json per_color = json::array();
  for (size_t j = 0; j < cover.color_count(); ++j) {
    const auto pc = periodic_components(cover.torus(), cover.mask(j), ball(cover.dim(), r));
    json comps = json::array();
    for (size_t k = 0; k < pc.components.size(); ++k) {
      const auto& comp = pc.components[k];
      if (comp.unbounded) {
        cert.pass = false;
        cert.witness = {{"type", "chain"}, {"color", j}, {"reason", "unbounded r-component"}};
        if (bound) cert.witness["points"] = point_list(pumped_chain(pc, k, *bound));
        return std::numeric_limits<int64_t>::max();
      }
      const auto offs = pc.offsets_of(k);
      const auto ex = extremes(offs);
      largest = std::max(largest, ex.diameter);
      if (bound && ex.diameter > *bound) {
        const auto chain = tree_chain(pc, k, comp.cells[ex.lo], comp.cells[ex.hi]);
        cert.pass = false;
        cert.witness = {{"type", "chain"},
                        {"color", j},
                        {"reason", "r-component diameter " + std::to_string(ex.diameter) +
                                       " exceeds " + std::to_string(*bound)},
                        {"diameter", ex.diameter},
                        {"points", point_list(chain)}};
        return largest;
      }
      comps.push_back({{"root", to_json(pc.torus.decode(comp.root))},
                       {"size", comp.cells.size()},
                       {"diameter", ex.diameter}});
    }
    per_color.push_back(std::move(comps));
  }
  cert.witness = {{"components", std::move(per_color)}, {"max_diameter", largest}};
  return largest;
}

}  // namespace

namespace {

// Enough to rebuild the cover: the explicit masks when small, otherwise the
// grid scale that regenerates it.
constexpr int64_t kInlineCoverCells = 4096;

json provenance(const GroupCover& cover) {
  if (cover.torus().cell_count() <= kInlineCoverCells) return {{"cover", cover.to_json()}};
  if (cover.torus().cell_count() <= kMaxGridCells && cover == grid_cover(cover.dim(), cover.scale())) {
    return {{"grid_scale", cover.scale()}};
  }
  return {{"cover", nullptr}};
}

}  // namespace

GroupCover cover_from_provenance(const json& params) {
  const int dim = params.at("dim").get<int>();
  if (params.contains("grid_scale")) return grid_cover(dim, params["grid_scale"].get<int64_t>());
  if (params.contains("cover") && !params["cover"].is_null()) return GroupCover::from_json(params["cover"]);
  throw Error("group cover is not recorded in the certificate");
}

Certificate verify_group_cover(const GroupCover& cover, int64_t r, int64_t bound) {
  if (r < 1 || bound < 0) throw Error("verify_group_cover: need r >= 1 and R >= 0");
  Certificate cert;
  cert.kind = "group_cover";
  cert.params = {{"dim", cover.dim()},
                 {"period", cover.period()},
                 {"r", r},
                 {"R", bound},
                 {"window_side", 2 * (cover.period() + bound + r)},
                 {"method", "period quotient with lift offsets"}};
  cert.params.update(provenance(cover));
  cert.note =
      "colors are periodic; every r-component is a translate of one meeting the period box, "
      "and a bounded component of diameter <= R fits in the recorded window";
  if (auto hole = first_uncovered(cover)) {
    cert.pass = false;
    cert.witness = {{"type", "uncovered"}, {"point", to_json(*hole)}};
    return cert;
  }
  cert.pass = true;
  scan_components(cover, r, bound, cert);
  return cert;
}

int64_t control_function(int dim, int64_t r) {
  if (dim < 1 || r < 1) throw Error("control_function: need d, r >= 1");
  static std::mutex mu;
  static std::map<std::pair<int, int64_t>, int64_t> memo;
  {
    std::lock_guard lock(mu);
    if (auto it = memo.find({dim, r}); it != memo.end()) return it->second;
  }
  const auto cover = grid_cover(dim, r);
  if (first_uncovered(cover)) throw Error("grid_cover does not cover Z^d");
  Certificate scratch;
  scratch.pass = true;
  const int64_t realized = std::max(
      r, scan_components(cover, r, std::nullopt, scratch));
  if (!scratch.pass) throw Error("grid_cover has an unbounded component");
  std::lock_guard lock(mu);
  memo[{dim, r}] = realized;
  return realized;
}

FiniteSubset dynamic_control(int dim, const FiniteSubset& f) {
  const int64_t d = diam(f);
  if (d == 0) return FiniteSubset::identity(dim);
  return ball(dim, std::max(control_function(dim, d), f.radius()));
}

GammaCover gamma_action_cover(int dim, const FiniteSubset& f) {
  if (f.dim() != dim) throw Error("gamma_action_cover: dimension mismatch");
  if (!f.is_fs()) throw Error("gamma_action_cover: F must contain the identity and be symmetric");
  const int64_t d = diam(f);
  return GammaCover{grid_cover(dim, std::max<int64_t>(d, 1)), f, dynamic_control(dim, f)};
}

Certificate verify_gamma_cover(const GroupCover& cover, const FiniteSubset& f,
                               const FiniteSubset& s) {
  Certificate cert;
  cert.kind = "gamma_cover";
  cert.params = {{"dim", cover.dim()}, {"period", cover.period()}, {"F", to_json(f)},
                 {"S", to_json(s)}};
  cert.params.update(provenance(cover));
  if (auto hole = first_uncovered(cover)) {
    cert.witness = {{"type", "uncovered"}, {"point", to_json(*hole)}};
    return cert;
  }
  json per_color = json::array();
  for (size_t j = 0; j < cover.color_count(); ++j) {
    const auto pc = periodic_components(cover.torus(), cover.mask(j), f);
    json comps = json::array();
    for (size_t k = 0; k < pc.components.size(); ++k) {
      const auto& comp = pc.components[k];
      const GroupElement root = pc.torus.decode(comp.root);
      if (comp.unbounded) {
        cert.witness = {{"type", "cycle"}, {"color", j}, {"root", to_json(root)},
                        {"steps", point_list(comp.cycle)}};
        return cert;
      }
      const auto offs = pc.offsets_of(k);
      const auto mu = find_bounding_shift(offs, s);
      if (!mu) {
        cert.witness = {{"type", "not_s_bounded"}, {"color", j}, {"root", to_json(root)},
                        {"offsets", point_list(offs)}};
        return cert;
      }
      comps.push_back({{"root", to_json(root)}, {"size", comp.cells.size()},
                       {"shift", to_json(*mu)}});
    }
    per_color.push_back(std::move(comps));
  }
  cert.pass = true;
  cert.witness = {{"components", std::move(per_color)}};
  return cert;
}

}  // namespace dadcert
