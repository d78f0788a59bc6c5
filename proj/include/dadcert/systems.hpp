#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "dadcert/certificate.hpp"
#include "dadcert/group.hpp"
#include "dadcert/lattice.hpp"

namespace dadcert {

enum class Model { odometer, sturmian };

std::string_view model_name(Model m);

/// Directive sequence a_1, a_2, ... of a Sturmian slope: a finite prefix
/// followed by a periodic tail. Standard words s_n = s_{n-1}^{a_n} s_{n-2}
/// with s_{-1} = 1, s_0 = 0. An all-zero tail is the degenerate (periodic)
/// case.
struct Slope {
  std::vector<int> prefix;
  std::vector<int> tail{1};

  static Slope golden() { return {}; }
  int coefficient(size_t n) const;  // a_{n+1}
  bool degenerate() const;
  std::string str() const;
  friend bool operator==(const Slope&, const Slope&) = default;
};

/// Factors of one length, each identified by its first occurrence in the
/// reference word ("code").
struct FactorIndex {
  int64_t len = 0;
  std::shared_ptr<const std::string> word;
  std::vector<int64_t> code_at;  // code of the factor starting at each position
  std::vector<int64_t> codes;    // sorted distinct codes
  std::unordered_map<uint64_t, int64_t> lookup;  // factor hash -> code

  std::string_view factor(int64_t code) const {
    return std::string_view(*word).substr(static_cast<size_t>(code), static_cast<size_t>(len));
  }
  /// Code of a word of this length, or -1 if not a factor.
  int64_t find(std::string_view w) const;
};

/// Language of a Sturmian subshift: a growing prefix of the characteristic
/// word plus cached factor indices. Thread-safe.
class Language {
 public:
  explicit Language(Slope slope);
  ~Language();
  Language(const Language&) = delete;
  Language& operator=(const Language&) = delete;

  const Slope& slope() const { return slope_; }
  /// Minimal period of the language in the degenerate case, else 0.
  int64_t period() const;
  /// Reference word containing every factor of length <= len.
  std::shared_ptr<const std::string> reference(int64_t len) const;
  /// Index of length-len factors over a reference word of at least
  /// min_word characters.
  std::shared_ptr<const FactorIndex> index(int64_t len, int64_t min_word = 0) const;

 private:
  struct State;
  static void grow(State& st, const Slope& slope);
  Slope slope_;
  std::unique_ptr<State> state_;
};

/// Clopen subset of the phase space. Odometer: residue vectors mod p^level
/// encoded as torus cells. Sturmian: cylinders x[lo, lo+level) in a set of
/// factor codes.
struct ClopenSet {
  Model model = Model::odometer;
  int64_t lo = 0;
  int64_t level = 0;
  std::vector<int64_t> codes;  // sorted, unique

  bool empty() const { return codes.empty(); }
  size_t size() const { return codes.size(); }
  bool has(int64_t code) const;
  friend bool operator==(const ClopenSet&, const ClopenSet&) = default;
};

/// Odometer (Z^d on Z_p^d) or Sturmian shift, optionally restricted to a
/// clopen Y (partial action with domains Y ∩ γ^{-1}Y).
class System {
 public:
  static System odometer(int p, int dim);
  static System sturmian(const Slope& slope);

  Model model() const { return model_; }
  int dim() const { return dim_; }
  int base() const { return p_; }
  const Language& language() const;
  std::shared_ptr<const Language> language_ptr() const { return lang_; }
  const std::optional<ClopenSet>& restriction() const { return restriction_; }
  bool is_restricted() const { return restriction_.has_value(); }
  /// Restricted to the empty set (DAD = -1 by convention).
  bool is_empty() const { return restriction_ && restriction_->empty(); }

  /// Cells at one level: odometer p^{level d}, Sturmian level+1.
  int64_t cell_count(int64_t level) const;
  Torus torus(int64_t level) const;  // odometer only

  /// The same action without the restriction.
  System parent() const;

  json to_json() const;
  static System from_json(const json& j);
  std::string str() const;

 private:
  friend System restrict(const System& sys, const ClopenSet& y);
  Model model_ = Model::odometer;
  int dim_ = 1;
  int p_ = 2;
  std::shared_ptr<const Language> lang_;
  std::optional<ClopenSet> restriction_;
};

ClopenSet empty_set(const System& sys);
/// Whole phase space (of the parent action).
ClopenSet full_set(const System& sys);
/// Phase space of sys: the restriction if any, else the full set.
ClopenSet space(const System& sys);

/// Odometer cylinder of residues mod p^level.
ClopenSet residues(const System& sys, int64_t level, const std::vector<GroupElement>& cells);
/// Sturmian cylinder set from words placed at position lo; all words must
/// have equal length and be admissible.
ClopenSet cylinders(const System& sys, int64_t lo, const std::vector<std::string>& words);

/// Descriptor strings of the members (residue vectors or words).
std::vector<std::string> describe(const System& sys, const ClopenSet& a);

/// Exact image γ·A (Sturmian: (γ·x)_i = x_{i+γ}).
ClopenSet translate(const System& sys, const ClopenSet& a, const GroupElement& g);
/// Re-expresses A at a finer resolution. Odometer: depth `level` (lo is
/// ignored). Sturmian: window [lo, lo+level) containing the current one.
ClopenSet refine(const System& sys, const ClopenSet& a, int64_t lo, int64_t level);
/// Coarsest equivalent resolution (greedy trimming for Sturmian windows).
ClopenSet normalize(const System& sys, const ClopenSet& a);
/// Brings both sets to a common resolution.
std::pair<ClopenSet, ClopenSet> align(const System& sys, const ClopenSet& a, const ClopenSet& b);

ClopenSet unite(const System& sys, const ClopenSet& a, const ClopenSet& b);
ClopenSet intersect(const System& sys, const ClopenSet& a, const ClopenSet& b);
ClopenSet subtract(const System& sys, const ClopenSet& a, const ClopenSet& b);
/// Complement in the full (parent) phase space.
ClopenSet complement(const System& sys, const ClopenSet& a);
bool same_set(const System& sys, const ClopenSet& a, const ClopenSet& b);
bool is_subset(const System& sys, const ClopenSet& a, const ClopenSet& b);

/// Partial action of sys restricted to Y.
System restrict(const System& sys, const ClopenSet& y);
/// Domain D_γ = Y ∩ γ^{-1}·Y (the whole space when unrestricted).
ClopenSet domain(const System& sys, const GroupElement& g);

/// Admissible words of length L (Sturmian), lexicographically sorted.
std::vector<std::string> admissible_words(const System& sys, int64_t len);

/// Freeness on F: distinct elements of F never agree on a point.
Certificate check_free(const System& sys, const FiniteSubset& f, int64_t depth);

/// A clopen set is its own open neighbourhood; records that fact.
Certificate open_enlarge(const System& sys, const ClopenSet& a);

json to_json(const System& sys, const ClopenSet& a);
ClopenSet clopen_from_json(const System& sys, const json& j);

}  // namespace dadcert
