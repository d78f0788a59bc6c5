#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "dadcert/group.hpp"

namespace dadcert {

/// Cells of the torus (Z/side)^dim are coded as sum_i x_i * side^i.
struct Torus {
  int dim = 1;
  int64_t side = 1;

  int64_t cell_count() const;
  int64_t encode(const GroupElement& x) const;  // reduces mod side
  GroupElement decode(int64_t code) const;
  int64_t shift(int64_t code, const GroupElement& g) const;

  friend bool operator==(const Torus&, const Torus&) = default;
};

/// Step connectivity of a periodic subset of Z^d, computed on one period.
/// Every cell carries a lift offset ("potential") relative to the root of
/// its component; a cycle with nonzero net offset marks the lifted
/// component as infinite.
struct PeriodicComponents {
  struct Component {
    int64_t root = 0;
    std::vector<int64_t> cells;  // BFS order, root first
    bool unbounded = false;
    /// For unbounded components: steps of a closed walk from `root` with
    /// nonzero total displacement.
    std::vector<GroupElement> cycle;
  };

  Torus torus;
  std::vector<int32_t> component_of;  // -1 when the cell is outside the set
  std::vector<int64_t> parent;        // BFS parent (root points to itself)
  std::vector<Component> components;

  bool contains(int64_t cell) const { return component_of[static_cast<size_t>(cell)] >= 0; }
  GroupElement offset(int64_t cell) const;
  void set_offset(int64_t cell, const GroupElement& g);

  /// Lift offsets of a bounded component.
  std::vector<GroupElement> offsets_of(size_t comp) const;
  /// Steps from the component root to `cell`.
  std::vector<GroupElement> steps_from_root(int64_t cell) const;

 private:
  std::vector<int64_t> offsets_;  // dim entries per cell
};

/// `mask[c] != 0` marks membership; `steps` must be fs.
PeriodicComponents periodic_components(const Torus& torus, std::span<const uint8_t> mask,
                                       const FiniteSubset& steps);

}  // namespace dadcert
