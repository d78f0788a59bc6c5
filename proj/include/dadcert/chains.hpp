#pragma once

#include <cstdint>
#include <vector>

#include "dadcert/certificate.hpp"
#include "dadcert/group.hpp"
#include "dadcert/systems.hpp"

namespace dadcert {

/// F-components of a clopen set B, computed per cell at a resolution fine
/// enough that every point of a cell has the same label set
///   Λ(cell) = { m : some F-chain in B joins x to m·x }.
/// Cells of one component share a label pattern (`offsets`) and differ by
/// their `position` in it: Λ(cell) = offsets - position.
struct ComponentAutomaton {
  struct Component {
    bool unbounded = false;
    std::vector<GroupElement> offsets;  // bounded components only
    json witness;                       // unboundedness witness
  };

  FiniteSubset f = FiniteSubset::identity(1);
  ClopenSet cells;                     // B at cell resolution
  std::vector<int32_t> component;      // per cell
  std::vector<GroupElement> position;  // per cell
  std::vector<Component> components;

  size_t cell_count() const { return cells.codes.size(); }
  /// Index of a cell code, or -1.
  int64_t find(int64_t code) const;
  std::vector<GroupElement> labels(size_t cell) const;
  bool unbounded(size_t cell) const { return components[static_cast<size_t>(component[cell])].unbounded; }
  bool any_unbounded() const;
};

/// F-components of B (intersected with the phase space of a restricted
/// system). F must be fs; Sturmian systems need F = g·[-k, k].
ComponentAutomaton f_components(const System& sys, const ClopenSet& b, const FiniteSubset& f);

/// Every component is S-bounded: some λ has Λ(cell) - λ ⊆ S for each cell.
Certificate is_s_bounded(const System& sys, const ComponentAutomaton& comp, const FiniteSubset& s);

/// No F-chain in A ∪ B joins a point of A to a point of B.
Certificate f_separated(const System& sys, const ClopenSet& a, const ClopenSet& b,
                        const FiniteSubset& f);

/// Least superset of B in V closed under F-steps that stay in V.
ClopenSet component_of_in(const System& sys, const ClopenSet& b, const ClopenSet& v,
                          const FiniteSubset& f);

json to_json(const System& sys, const ComponentAutomaton& comp);

}  // namespace dadcert
