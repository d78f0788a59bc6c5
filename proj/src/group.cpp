#include "dadcert/group.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <sstream>

namespace dadcert {

namespace {

constexpr uint64_t kMaterializeGuard = 50'000'000;

void check_dim(int dim) {
  if (dim < 1 || dim > kMaxDim) {
    throw Error("dimension must be in [1, " + std::to_string(kMaxDim) + "], got " +
                std::to_string(dim));
  }
}

void check_same_dim(const FiniteSubset& a, const FiniteSubset& b) {
  if (a.dim() != b.dim()) {
    throw Error("dimension mismatch: " + std::to_string(a.dim()) + " vs " +
                std::to_string(b.dim()));
  }
}

// Enumerate the l1 ball coordinate by coordinate.
void enumerate_ball(int dim, int64_t radius, GroupElement& cur, int axis, int64_t budget,
                    const std::function<void(const GroupElement&)>& fn) {
  if (axis == dim) {
    fn(cur);
    return;
  }
  for (int64_t v = -budget; v <= budget; ++v) {
    cur[axis] = v;
    enumerate_ball(dim, radius, cur, axis + 1, budget - (v < 0 ? -v : v), fn);
  }
  cur[axis] = 0;
}

}  // namespace

GroupElement::GroupElement(int dim) : dim_(dim) { check_dim(dim); }

GroupElement::GroupElement(std::initializer_list<int64_t> coords)
    : dim_(static_cast<int>(coords.size())) {
  check_dim(dim_);
  std::copy(coords.begin(), coords.end(), c_.begin());
}

GroupElement GroupElement::from_span(std::span<const int64_t> coords) {
  GroupElement g(static_cast<int>(coords.size()));
  std::copy(coords.begin(), coords.end(), g.c_.begin());
  return g;
}

GroupElement GroupElement::operator+(const GroupElement& o) const {
  GroupElement r = *this;
  r += o;
  return r;
}

GroupElement& GroupElement::operator+=(const GroupElement& o) {
  if (dim_ != o.dim_) throw Error("dimension mismatch in group operation");
  for (int i = 0; i < dim_; ++i) c_[i] += o.c_[i];
  return *this;
}

GroupElement GroupElement::operator-(const GroupElement& o) const { return *this + (-o); }

GroupElement GroupElement::operator-() const {
  GroupElement r = *this;
  for (int i = 0; i < dim_; ++i) r.c_[i] = -r.c_[i];
  return r;
}

bool GroupElement::is_identity() const {
  return std::all_of(c_.begin(), c_.begin() + dim_, [](int64_t v) { return v == 0; });
}

int64_t GroupElement::l1() const {
  int64_t s = 0;
  for (int i = 0; i < dim_; ++i) s += c_[i] < 0 ? -c_[i] : c_[i];
  return s;
}

std::vector<int64_t> GroupElement::coords() const {
  return {c_.begin(), c_.begin() + dim_};
}

std::string GroupElement::str() const {
  if (dim_ == 1) return std::to_string(c_[0]);
  std::ostringstream os;
  os << '(';
  for (int i = 0; i < dim_; ++i) os << (i ? "," : "") << c_[i];
  os << ')';
  return os.str();
}

size_t GroupElementHash::operator()(const GroupElement& g) const noexcept {
  uint64_t h = 1469598103934665603ull ^ static_cast<uint64_t>(g.dim());
  for (int i = 0; i < g.dim(); ++i) {
    h ^= static_cast<uint64_t>(g[i]) + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
  }
  return static_cast<size_t>(h);
}

int64_t l1_distance(const GroupElement& a, const GroupElement& b) { return (a - b).l1(); }

FiniteSubset::FiniteSubset(int dim, std::vector<GroupElement> elems)
    : dim_(dim), elems_(std::move(elems)) {
  check_dim(dim);
  for (const auto& e : elems_) {
    if (e.dim() != dim) throw Error("element " + e.str() + " has wrong dimension");
  }
  std::sort(elems_.begin(), elems_.end());
  elems_.erase(std::unique(elems_.begin(), elems_.end()), elems_.end());
}

FiniteSubset FiniteSubset::ball(int dim, int64_t radius) {
  if (radius < 0) throw Error("ball radius must be nonnegative");
  check_dim(dim);
  FiniteSubset s;
  s.dim_ = dim;
  s.ball_radius_ = radius;
  return s;
}

FiniteSubset FiniteSubset::identity(int dim) { return ball(dim, 0); }

FiniteSubset FiniteSubset::empty(int dim) { return FiniteSubset(dim, {}); }

FiniteSubset FiniteSubset::interval(int64_t lo, int64_t hi) {
  std::vector<GroupElement> v;
  for (int64_t x = lo; x <= hi; ++x) v.push_back(GroupElement{x});
  return FiniteSubset(1, std::move(v));
}

bool FiniteSubset::empty() const { return !ball_radius_ && elems_.empty(); }

size_t FiniteSubset::size() const {
  if (ball_radius_) return static_cast<size_t>(ball_size(dim_, *ball_radius_));
  return elems_.size();
}

bool FiniteSubset::contains(const GroupElement& g) const {
  if (g.dim() != dim_) return false;
  if (ball_radius_) return g.l1() <= *ball_radius_;
  return std::binary_search(elems_.begin(), elems_.end(), g);
}

std::vector<GroupElement> FiniteSubset::elements() const {
  if (!ball_radius_) return elems_;
  if (ball_size(dim_, *ball_radius_) > kMaterializeGuard) {
    throw Error("refusing to materialize ball of radius " + std::to_string(*ball_radius_));
  }
  std::vector<GroupElement> out;
  for_each([&](const GroupElement& g) { out.push_back(g); });
  return out;
}

void FiniteSubset::for_each(const std::function<void(const GroupElement&)>& fn) const {
  if (!ball_radius_) {
    for (const auto& e : elems_) fn(e);
    return;
  }
  GroupElement cur(dim_);
  enumerate_ball(dim_, *ball_radius_, cur, 0, *ball_radius_, fn);
}

bool FiniteSubset::is_fs() const {
  if (ball_radius_) return true;
  if (!contains(GroupElement(dim_))) return false;
  return std::all_of(elems_.begin(), elems_.end(), [&](const auto& e) { return contains(-e); });
}

int64_t FiniteSubset::radius() const {
  if (ball_radius_) return *ball_radius_;
  int64_t r = 0;
  for (const auto& e : elems_) r = std::max(r, e.l1());
  return r;
}

bool FiniteSubset::is_subset_of(const FiniteSubset& other) const {
  if (dim_ != other.dim_) return false;
  if (ball_radius_) {
    if (other.ball_radius_) return *ball_radius_ <= *other.ball_radius_;
    if (size() > other.size()) return false;
  }
  bool ok = true;
  for_each([&](const GroupElement& g) { ok = ok && other.contains(g); });
  return ok;
}

std::optional<std::pair<int64_t, int64_t>> FiniteSubset::as_arithmetic_interval() const {
  if (dim_ != 1) return std::nullopt;
  if (ball_radius_) {
    return std::pair<int64_t, int64_t>{1, *ball_radius_};
  }
  if (!is_fs()) return std::nullopt;
  if (elems_.size() == 1) return std::pair<int64_t, int64_t>{1, 0};
  int64_t g = 0;
  for (const auto& e : elems_) g = std::gcd(g, e[0]);
  const int64_t k = elems_.back()[0] / g;
  if (elems_.size() != static_cast<size_t>(2 * k + 1)) return std::nullopt;
  return std::pair<int64_t, int64_t>{g, k};
}

std::string FiniteSubset::str() const {
  if (ball_radius_) {
    return "ball(" + std::to_string(dim_) + "," + std::to_string(*ball_radius_) + ")";
  }
  std::string s = "{";
  for (size_t i = 0; i < elems_.size(); ++i) s += (i ? "," : "") + elems_[i].str();
  return s + "}";
}

bool operator==(const FiniteSubset& a, const FiniteSubset& b) {
  if (a.dim_ != b.dim_) return false;
  if (a.ball_radius_ && b.ball_radius_) return *a.ball_radius_ == *b.ball_radius_;
  if (a.size() != b.size()) return false;
  return a.is_subset_of(b);
}

uint64_t ball_size(int dim, int64_t radius) {
  // Points of l1 norm <= r in Z^d: sum_k 2^k C(d,k) C(r,k).
  uint64_t total = 0;
  uint64_t binom_d = 1;  // C(d, k)
  long double binom_r = 1;
  for (int k = 0; k <= dim; ++k) {
    if (k > 0) {
      binom_d = binom_d * static_cast<uint64_t>(dim - k + 1) / static_cast<uint64_t>(k);
      binom_r = binom_r * static_cast<long double>(radius - k + 1) / k;
    }
    if (k > radius) break;
    const long double term = static_cast<long double>(1ull << k) * binom_d * binom_r;
    if (term > static_cast<long double>(std::numeric_limits<uint64_t>::max() / 2)) {
      return std::numeric_limits<uint64_t>::max();
    }
    total += static_cast<uint64_t>(term + 0.5L);
  }
  return total;
}

FiniteSubset product(const FiniteSubset& f, const FiniteSubset& g) {
  check_same_dim(f, g);
  if (f.is_ball() && g.is_ball()) {
    return FiniteSubset::ball(f.dim(), *f.ball_radius() + *g.ball_radius());
  }
  if (f.empty() || g.empty()) return FiniteSubset::empty(f.dim());
  const auto fe = f.elements();
  const auto ge = g.elements();
  std::vector<GroupElement> out;
  out.reserve(fe.size() * ge.size());
  for (const auto& a : fe) {
    for (const auto& b : ge) out.push_back(a + b);
  }
  return FiniteSubset(f.dim(), std::move(out));
}

FiniteSubset power(const FiniteSubset& f, int64_t r) {
  if (r < 1) throw Error("power exponent must be >= 1 (use the identity set for r = 0)");
  if (f.is_ball()) return FiniteSubset::ball(f.dim(), *f.ball_radius() * r);
  // Square-and-multiply keeps intermediate sets small for fs inputs.
  FiniteSubset result;
  bool have = false;
  FiniteSubset base = f;
  while (r > 0) {
    if (r & 1) {
      result = have ? product(result, base) : base;
      have = true;
    }
    r >>= 1;
    if (r > 0) base = product(base, base);
  }
  return result;
}

FiniteSubset ball(int dim, int64_t radius) { return FiniteSubset::ball(dim, radius); }

int64_t diam(const FiniteSubset& f) {
  if (f.empty()) throw Error("diameter of the empty set is undefined");
  if (f.is_ball()) return 2 * *f.ball_radius();
  const auto e = f.elements();
  return diam_of(e);
}

FiniteSubset symmetrize(const FiniteSubset& f) {
  if (f.is_ball()) return f;
  std::vector<GroupElement> out;
  f.for_each([&](const GroupElement& g) {
    out.push_back(g);
    out.push_back(-g);
  });
  out.push_back(GroupElement(f.dim()));
  return FiniteSubset(f.dim(), std::move(out));
}

int64_t diam_of(std::span<const GroupElement> pts) {
  if (pts.empty()) throw Error("diameter of the empty set is undefined");
  const int dim = pts.front().dim();
  int64_t best = 0;
  // l1(x - y) = max over sign vectors s of s.(x - y); fixing s_0 = +1 suffices.
  for (int mask = 0; mask < (1 << (dim - 1)); ++mask) {
    int64_t lo = std::numeric_limits<int64_t>::max();
    int64_t hi = std::numeric_limits<int64_t>::min();
    for (const auto& p : pts) {
      int64_t v = p[0];
      for (int i = 1; i < dim; ++i) v += ((mask >> (i - 1)) & 1) ? -p[i] : p[i];
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    best = std::max(best, hi - lo);
  }
  return best;
}

std::optional<GroupElement> find_bounding_shift(std::span<const GroupElement> pts,
                                                const FiniteSubset& s) {
  if (pts.empty()) return std::nullopt;
  const int dim = pts.front().dim();
  if (s.dim() != dim) throw Error("dimension mismatch in boundedness check");
  if (s.empty()) return std::nullopt;

  if (s.is_ball() && dim <= 2) {
    const int64_t r = *s.ball_radius();
    if (dim == 1) {
      int64_t lo = pts.front()[0], hi = lo;
      for (const auto& p : pts) {
        lo = std::min(lo, p[0]);
        hi = std::max(hi, p[0]);
      }
      if (hi - lo > 2 * r) return std::nullopt;
      return GroupElement{hi - r};
    }
    // Rotate: u = x + y, v = x - y turns the l1 ball into a square.
    int64_t umin = std::numeric_limits<int64_t>::max(), umax = std::numeric_limits<int64_t>::min();
    int64_t vmin = umin, vmax = umax;
    for (const auto& p : pts) {
      umin = std::min(umin, p[0] + p[1]);
      umax = std::max(umax, p[0] + p[1]);
      vmin = std::min(vmin, p[0] - p[1]);
      vmax = std::max(vmax, p[0] - p[1]);
    }
    const int64_t ulo = umax - r, uhi = umin + r, vlo = vmax - r, vhi = vmin + r;
    if (ulo > uhi || vlo > vhi) return std::nullopt;
    int64_t sum = ulo + vlo;
    if (((sum % 2) + 2) % 2 != 0) ++sum;
    if (sum > uhi + vhi) return std::nullopt;
    const int64_t u = std::max(ulo, sum - vhi);
    if (u > uhi) return std::nullopt;
    const int64_t x = sum / 2;
    return GroupElement{x, u - x};
  }

  // Any valid shift is p0 - t for some t in s; scan candidates in sorted order.
  auto elems = s.elements();
  const GroupElement& p0 = pts.front();
  std::vector<GroupElement> candidates;
  candidates.reserve(elems.size());
  for (const auto& t : elems) candidates.push_back(p0 - t);
  std::sort(candidates.begin(), candidates.end());
  for (const auto& mu : candidates) {
    bool ok = true;
    for (const auto& p : pts) {
      if (!s.contains(p - mu)) {
        ok = false;
        break;
      }
    }
    if (ok) return mu;
  }
  return std::nullopt;
}

}  // namespace dadcert
