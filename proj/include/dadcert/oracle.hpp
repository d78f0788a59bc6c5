#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dadcert/certificate.hpp"
#include "dadcert/group.hpp"
#include "dadcert/systems.hpp"

namespace dadcert {

/// Hard cap on explicit points in any oracle model.
inline constexpr int64_t kOracleMaxPoints = 100000;
/// Hard cap on points for exhaustive coloring.
inline constexpr int64_t kOracleMaxColorPoints = 24;

/// A request beyond the oracle size guards.
class GuardError : public Error {
 public:
  using Error::Error;
};

/// Explicit finite model: all residue cells mod p^depth (odometer), or the
/// positions of one long segment of the characteristic word (Sturmian).
struct FiniteQuotientModel {
  System system;
  int64_t level = 0;     // odometer depth, or segment length
  std::string segment;   // Sturmian only, generated independently

  static FiniteQuotientModel odometer(const System& sys, int64_t depth);
  static FiniteQuotientModel sturmian(const System& sys, int64_t length);
  int64_t point_count() const;
  /// Point reached from `point` by g, or -1 if it leaves the model.
  int64_t act(int64_t point, const GroupElement& g) const;
  /// Is the point inside the clopen set?
  bool contains(const ClopenSet& a, int64_t point) const;
};

/// Labels of one point's F-component; nullopt when the component is
/// infinite (odometer: a cell repeats) or leaves the segment (Sturmian).
using PointLabels = std::optional<std::vector<GroupElement>>;

/// Plain BFS per point of B.
std::vector<std::pair<int64_t, PointLabels>> naive_components(const FiniteQuotientModel& model,
                                                              const ClopenSet& b, const FiniteSubset& f);

/// Compares chains::f_components against naive_components on every point.
Certificate compare_components(const FiniteQuotientModel& model, const ClopenSet& b, const FiniteSubset& f);

/// Least c <= cap such that some c-coloring of the odometer cells has all
/// F-components S-bounded.
std::optional<int> exhaustive_min_colors(const FiniteQuotientModel& model, const FiniteSubset& f,
                                         const FiniteSubset& s, int cap = 4);

/// Re-runs the verification a certificate describes and compares verdict and
/// witness. The returned certificate passes iff they agree.
Certificate replay(const json& certificate);

}  // namespace dadcert
