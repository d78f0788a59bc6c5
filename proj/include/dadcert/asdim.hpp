#pragma once

#include <cstdint>
#include <vector>

#include "dadcert/certificate.hpp"
#include "dadcert/group.hpp"
#include "dadcert/lattice.hpp"

namespace dadcert {

/// A cover of Z^d by dim+1 periodic colors. Each color is stored as a mask
/// over one period box [0, period)^d.
class GroupCover {
 public:
  GroupCover(int dim, int64_t period, std::vector<std::vector<uint8_t>> colors, int64_t scale);

  int dim() const { return torus_.dim; }
  int64_t period() const { return torus_.side; }
  const Torus& torus() const { return torus_; }
  /// Scale r the cover was built for.
  int64_t scale() const { return scale_; }
  size_t color_count() const { return colors_.size(); }
  const std::vector<uint8_t>& mask(size_t color) const { return colors_[color]; }

  bool contains(size_t color, const GroupElement& g) const;
  /// First color containing g, or -1 if none.
  int color_of(const GroupElement& g) const;

  json to_json() const;
  static GroupCover from_json(const json& j);

  friend bool operator==(const GroupCover&, const GroupCover&) = default;

 private:
  Torus torus_;
  std::vector<std::vector<uint8_t>> colors_;
  int64_t scale_ = 1;
};

/// Largest explicit period box grid_cover will build.
inline constexpr int64_t kMaxGridCells = int64_t{1} << 26;

/// d+1 colored witness for asdim Z^d <= d at scale r.
GroupCover grid_cover(int dim, int64_t r);

/// Checks that the colors cover Z^d and that every r-component of every
/// color has l1 diameter <= bound.
Certificate verify_group_cover(const GroupCover& cover, int64_t r, int64_t bound);

/// Rebuilds the cover recorded in a group_cover / gamma_cover certificate.
GroupCover cover_from_provenance(const json& params);

/// Largest component diameter realized by grid_cover(dim, r); memoized.
int64_t control_function(int dim, int64_t r);

/// Translation system Z^d acting on itself, colored by a group cover.
struct GammaCover {
  GroupCover cover;
  FiniteSubset f;
  FiniteSubset s;
};

/// The group cover at scale diam(F) read as an (asdim, F, S)-cover of Z^d
/// acting on itself, with S = ball(control_function(dim, diam F)).
GammaCover gamma_action_cover(int dim, const FiniteSubset& f);

/// F-components of every color are S-bounded (Z^d acting on itself).
Certificate verify_gamma_cover(const GroupCover& cover, const FiniteSubset& f,
                               const FiniteSubset& s);

/// The scale-to-set control function F -> ball(control_function(dim, diam F)),
/// enlarged to contain F.
FiniteSubset dynamic_control(int dim, const FiniteSubset& f);

}  // namespace dadcert
