#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "dadcert/asdim.hpp"
#include "dadcert/certificate.hpp"
#include "dadcert/chains.hpp"
#include "dadcert/group.hpp"
#include "dadcert/systems.hpp"

namespace dadcert {

/// A cover of the system's space by clopen colors, claimed to have
/// S-bounded F-components.
struct Cover {
  System system;
  std::vector<ClopenSet> colors;
  FiniteSubset f = FiniteSubset::identity(1);
  FiniteSubset s = FiniteSubset::identity(1);

  json to_json() const;
  static Cover from_json(const json& j);
};

/// Colors cover the space and each color's F-components are S-bounded.
Certificate verify_dad_cover(const Cover& cover);

/// G_0 = D(F_0); F_i = G_{i-1}^4; G_i = D(F_i)^2, where D is the
/// dynamic control function.
struct ScaleSchedule {
  int d = 0;
  std::vector<FiniteSubset> f;  // F_0 .. F_d
  std::vector<FiniteSubset> g;  // G_0 .. G_d
  json to_json() const;
};

ScaleSchedule scale_schedule(int d, const FiniteSubset& f0);

/// Finite union: covA on A verified at (F^rA, F^RA), covB on B at
/// (F^rB, F^RB), with 2RB + 2rB < rA. The colorwise union is a cover of
/// A ∪ B at (F^rB, F^{rA+RA}); it is re-verified.
std::pair<Cover, Certificate> combine_union(const Cover& a, const Cover& b, const FiniteSubset& f,
                                            int64_t ra, int64_t big_ra, int64_t rb, int64_t big_rb);

/// Towers of one color: each is one F-component class of U, labelled by
/// the position relative to its base (label-0 cells).
struct Tower {
  int32_t component = 0;
  ClopenSet set;
  std::vector<std::pair<GroupElement, ClopenSet>> fibers;  // sorted by label
};

struct TowerDecomposition {
  System system;
  int color = 0;
  FiniteSubset f = FiniteSubset::identity(1);
  FiniteSubset s = FiniteSubset::identity(1);
  ClopenSet u;                // the color at cell resolution
  std::vector<Tower> towers;  // in order of least cell code
  Certificate certificate;    // boundedness, disjointness, separation

  std::vector<GroupElement> labels() const;
};

TowerDecomposition tower_decomposition(const System& sys, const ClopenSet& u, const FiniteSubset& f,
                                       const FiniteSubset& s, int color = 0);

/// Colors fiber E^{k,s} by gcov.color_of(s); the result covers the towers
/// (restricted system) and is verified at the group cover's (F, S).
std::pair<Cover, Certificate> cover_tower(const TowerDecomposition& td, const GammaCover& gcov,
                                          int tower = -1);

/// Zero-dimensional reduction: a verified cover with d+1 colors at
/// (F_d, S) becomes a cover with dim+1 colors at (F_0, G_d).
std::pair<Cover, Certificate> reduce_cover(const Cover& cov, const FiniteSubset& f0);

/// Colors intersected with Y, on the restricted system.
Cover restrict_cover(const Cover& cov, const ClopenSet& y);

/// Largest window (in points) orbit_transport will color.
inline constexpr int64_t kOrbitMaxPoints = 4000000;

/// Colors the window ball(dim, window) ⊆ Z^d by γ -> color of γ·x for a
/// point x of the canonical basepoint cell, and checks that R-components
/// of each induced color (inside the window) have diameter <= diam S.
std::pair<std::vector<std::pair<GroupElement, int>>, Certificate> orbit_transport(const Cover& cov,
                                                                                  int64_t window);

/// Odometer cover of Z on Z_p by `colors` arcs at the least depth where
/// every arc is F-separated from itself around the circle (and at least
/// min_depth).
Cover odometer_arc_cover(const System& sys, int colors, const FiniteSubset& f, int64_t min_depth = 0);

/// Sturmian cover from a marker word with return times >= the required
/// gap: points are colored by their distance to the previous marker.
Cover sturmian_marker_cover(const System& sys, int colors, const FiniteSubset& f);

}  // namespace dadcert
