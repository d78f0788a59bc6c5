#include <algorithm>
#include <mutex>
#include <sstream>

#include "dadcert/systems.hpp"

namespace dadcert {

namespace {

constexpr uint64_t kBase1 = 0x9E3779B97F4A7C15ULL;
constexpr uint64_t kBase2 = 0xC2B2AE3D27D4EB4FULL;

uint64_t mix(uint64_t h1, uint64_t h2) { return h1 ^ (h2 * 0xFF51AFD7ED558CCDULL + 0x632BE5AB); }

uint64_t direct_hash(std::string_view w) {
  uint64_t h1 = 0, h2 = 0;
  for (char c : w) {
    h1 = h1 * kBase1 + static_cast<unsigned char>(c);
    h2 = h2 * kBase2 + static_cast<unsigned char>(c);
  }
  return mix(h1, h2);
}

// Prefix hashes of a word, for O(1) factor hashing.
struct Rolling {
  std::vector<uint64_t> h1, h2, p1, p2;

  explicit Rolling(std::string_view w)
      : h1(w.size() + 1), h2(w.size() + 1), p1(w.size() + 1), p2(w.size() + 1) {
    p1[0] = p2[0] = 1;
    for (size_t i = 0; i < w.size(); ++i) {
      const auto c = static_cast<unsigned char>(w[i]);
      h1[i + 1] = h1[i] * kBase1 + c;
      h2[i + 1] = h2[i] * kBase2 + c;
      p1[i + 1] = p1[i] * kBase1;
      p2[i + 1] = p2[i] * kBase2;
    }
  }
  uint64_t operator()(size_t i, size_t len) const {
    return mix(h1[i + len] - h1[i] * p1[len], h2[i + len] - h2[i] * p2[len]);
  }
};

int64_t primitive_period(const std::string& w) {
  const auto n = static_cast<int64_t>(w.size());
  for (int64_t q = 1; q <= n; ++q) {
    if (n % q) continue;
    bool ok = true;
    for (int64_t i = q; i < n && ok; ++i) ok = w[static_cast<size_t>(i)] == w[static_cast<size_t>(i - q)];
    if (ok) return q;
  }
  return n;
}

}  // namespace

int Slope::coefficient(size_t n) const {
  if (n < prefix.size()) return prefix[n];
  return tail[(n - prefix.size()) % tail.size()];
}

bool Slope::degenerate() const {
  return std::all_of(tail.begin(), tail.end(), [](int a) { return a == 0; });
}

std::string Slope::str() const {
  std::ostringstream os;
  os << "[";
  for (size_t i = 0; i < prefix.size(); ++i) os << (i ? "," : "") << prefix[i];
  os << ";";
  for (size_t i = 0; i < tail.size(); ++i) os << (i ? "," : "") << tail[i];
  os << "]";
  return os.str();
}

int64_t FactorIndex::find(std::string_view w) const {
  if (static_cast<int64_t>(w.size()) != len) return -1;
  const auto it = lookup.find(direct_hash(w));
  if (it == lookup.end() || factor(it->second) != w) return -1;
  return it->second;
}

struct Language::State {
  std::mutex mu;
  std::string prev = "1";  // s_{n-1}
  std::string cur = "0";   // s_n
  size_t n = 0;
  int64_t period = 0;
  std::shared_ptr<const std::string> word;
  std::shared_ptr<const Rolling> rolling;
  std::unordered_map<int64_t, std::shared_ptr<const FactorIndex>> cache;
};

Language::Language(Slope slope) : slope_(std::move(slope)), state_(std::make_unique<State>()) {
  if (slope_.tail.empty()) throw Error("slope: periodic tail must be nonempty");
  for (int a : slope_.prefix) {
    if (a < 1) throw Error("slope: prefix coefficients must be positive");
  }
  const bool zero_tail = slope_.degenerate();
  for (int a : slope_.tail) {
    if (a < 0 || (a == 0) != zero_tail) throw Error("slope: tail must be all positive or all zero");
  }
  auto& st = *state_;
  for (size_t i = 0; i < slope_.prefix.size(); ++i) {
    std::string next;
    for (int k = 0; k < slope_.prefix[i]; ++k) next += st.cur;
    next += st.prev;
    st.prev = std::move(st.cur);
    st.cur = std::move(next);
    ++st.n;
  }
  if (zero_tail) st.period = primitive_period(st.cur);
  st.word = std::make_shared<const std::string>(st.cur);
  st.rolling = std::make_shared<const Rolling>(*st.word);
}

Language::~Language() = default;

int64_t Language::period() const { return state_->period; }

namespace {

int64_t distinct_factors(const std::string& w, const Rolling& roll, int64_t len) {
  if (static_cast<int64_t>(w.size()) < len) return 0;
  std::unordered_map<uint64_t, char> seen;
  for (size_t i = 0; i + static_cast<size_t>(len) <= w.size(); ++i) {
    seen.emplace(roll(i, static_cast<size_t>(len)), 0);
  }
  return static_cast<int64_t>(seen.size());
}

}  // namespace

std::shared_ptr<const std::string> Language::reference(int64_t len) const {
  if (len < 0) throw Error("negative factor length");
  auto& st = *state_;
  std::lock_guard lock(st.mu);
  while (true) {
    const auto size = static_cast<int64_t>(st.word->size());
    if (st.period > 0) {
      if (size >= len + 2 * st.period) return st.word;
    } else if (size >= 2 * len + 2 && distinct_factors(*st.word, *st.rolling, len) == len + 1) {
      return st.word;
    }
    grow(st, slope_);
  }
}

// Extends the reference word by one step: the next standard word, or one
// more period in the degenerate case.
void Language::grow(State& st, const Slope& slope) {
  if (st.period > 0) {
    st.word = std::make_shared<const std::string>(*st.word + st.cur);
  } else {
    const int a = slope.coefficient(st.n);
    std::string next;
    for (int k = 0; k < a; ++k) next += st.cur;
    next += st.prev;
    st.prev = std::move(st.cur);
    st.cur = std::move(next);
    ++st.n;
    st.word = std::make_shared<const std::string>(st.cur);
  }
  st.rolling = std::make_shared<const Rolling>(*st.word);
}

std::shared_ptr<const FactorIndex> Language::index(int64_t len, int64_t min_word) const {
  reference(len);
  auto& st = *state_;
  std::shared_ptr<const std::string> w;
  std::shared_ptr<const Rolling> roll;
  {
    std::lock_guard lock(st.mu);
    while (static_cast<int64_t>(st.word->size()) < min_word) grow(st, slope_);
    auto it = st.cache.find(len);
    if (it != st.cache.end() && static_cast<int64_t>(it->second->word->size()) >= min_word) {
      return it->second;
    }
    w = st.word;
    roll = st.rolling;
  }

  auto idx = std::make_shared<FactorIndex>();
  idx->len = len;
  idx->word = w;
  const size_t positions = w->size() - static_cast<size_t>(len) + 1;
  idx->code_at.resize(positions);
  for (size_t i = 0; i < positions; ++i) {
    const auto [it, fresh] = idx->lookup.emplace((*roll)(i, static_cast<size_t>(len)), static_cast<int64_t>(i));
    if (fresh) idx->codes.push_back(static_cast<int64_t>(i));
    idx->code_at[i] = it->second;
  }
  if (st.period == 0 && static_cast<int64_t>(idx->codes.size()) != len + 1) {
    throw Error("factor index: unexpected complexity at length " + std::to_string(len));
  }
  std::lock_guard lock(st.mu);
  auto& slot = st.cache[len];
  if (!slot || slot->word->size() < idx->word->size()) slot = idx;
  return slot;
}

}  // namespace dadcert
