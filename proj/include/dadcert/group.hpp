#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace dadcert {

/// Raised on contract violations (dimension mismatch, bad parameters, ...).
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr int kMaxDim = 4;

/// An element of Z^d, 1 <= d <= kMaxDim. Coordinates past `dim` are zero.
class GroupElement {
 public:
  GroupElement() = default;
  explicit GroupElement(int dim);
  GroupElement(std::initializer_list<int64_t> coords);
  static GroupElement from_span(std::span<const int64_t> coords);

  int dim() const { return dim_; }
  int64_t operator[](int i) const { return c_[static_cast<size_t>(i)]; }
  int64_t& operator[](int i) { return c_[static_cast<size_t>(i)]; }

  GroupElement operator+(const GroupElement& o) const;
  GroupElement operator-(const GroupElement& o) const;
  GroupElement operator-() const;
  GroupElement& operator+=(const GroupElement& o);

  bool is_identity() const;
  int64_t l1() const;
  std::vector<int64_t> coords() const;
  std::string str() const;

  friend bool operator==(const GroupElement&, const GroupElement&) = default;
  friend auto operator<=>(const GroupElement&, const GroupElement&) = default;

 private:
  int dim_ = 0;
  std::array<int64_t, kMaxDim> c_{};
};

struct GroupElementHash {
  size_t operator()(const GroupElement& g) const noexcept;
};

int64_t l1_distance(const GroupElement& a, const GroupElement& b);

/// Finite subset of Z^d. Balls are kept implicit so that the large scales
/// produced by the scale schedule never have to be enumerated.
class FiniteSubset {
 public:
  FiniteSubset() = default;
  FiniteSubset(int dim, std::vector<GroupElement> elems);

  static FiniteSubset ball(int dim, int64_t radius);
  static FiniteSubset identity(int dim);
  static FiniteSubset empty(int dim);
  static FiniteSubset interval(int64_t lo, int64_t hi);  // {lo..hi} in Z

  int dim() const { return dim_; }
  bool is_ball() const { return ball_radius_.has_value(); }
  std::optional<int64_t> ball_radius() const { return ball_radius_; }
  bool empty() const;
  size_t size() const;
  bool contains(const GroupElement& g) const;

  /// Materialized sorted elements. Throws for balls above the size guard.
  std::vector<GroupElement> elements() const;
  void for_each(const std::function<void(const GroupElement&)>& fn) const;

  /// Contains the identity and is closed under inverses.
  bool is_fs() const;
  /// max l1 norm of an element.
  int64_t radius() const;
  bool is_subset_of(const FiniteSubset& other) const;

  /// Some(g, k) when the set is g * {-k..k} in Z (k = 0 means {0}).
  std::optional<std::pair<int64_t, int64_t>> as_arithmetic_interval() const;

  std::string str() const;

  friend bool operator==(const FiniteSubset& a, const FiniteSubset& b);

 private:
  int dim_ = 0;
  std::optional<int64_t> ball_radius_;
  std::vector<GroupElement> elems_;  // sorted, unique; unused for balls
};

/// Number of lattice points in the l1 ball of radius r in Z^d.
uint64_t ball_size(int dim, int64_t radius);

FiniteSubset product(const FiniteSubset& f, const FiniteSubset& g);
FiniteSubset power(const FiniteSubset& f, int64_t r);
FiniteSubset ball(int dim, int64_t radius);
int64_t diam(const FiniteSubset& f);
FiniteSubset symmetrize(const FiniteSubset& f);

/// l1 diameter of an arbitrary point list (max over sign functionals).
int64_t diam_of(std::span<const GroupElement> pts);

/// Smallest (in element order) shift mu with pts - mu contained in s, if any.
std::optional<GroupElement> find_bounding_shift(std::span<const GroupElement> pts,
                                                const FiniteSubset& s);

}  // namespace dadcert
