#include "doctest.h"

#include <random>

#include "dadcert/systems.hpp"
#include "oracle_words.hpp"

using namespace dadcert;

namespace {

std::set<std::string> as_set(const std::vector<std::string>& v) { return {v.begin(), v.end()}; }

// Words of A re-expressed on the window [0, len).
std::set<std::string> words_at(const System& sys, const ClopenSet& a, int64_t len) {
  return as_set(describe(sys, refine(sys, a, 0, len)));
}

ClopenSet random_set(const System& sys, int64_t level, std::mt19937& rng) {
  ClopenSet a{sys.model(), 0, level, {}};
  const int64_t n = sys.cell_count(level);
  const auto all = sys.model() == Model::sturmian ? sys.language().index(level)->codes
                                                  : std::vector<int64_t>{};
  for (int64_t i = 0; i < n; ++i) {
    if (rng() % 2) a.codes.push_back(all.empty() ? i : all[static_cast<size_t>(i)]);
  }
  return a;
}

}  // namespace

TEST_CASE("odometer translate and refine") {
  const auto sys = System::odometer(2, 1);
  const auto a = residues(sys, 3, {GroupElement{0}, GroupElement{1}});
  CHECK(translate(sys, a, GroupElement{1}) == residues(sys, 3, {GroupElement{1}, GroupElement{2}}));
  const auto b = residues(sys, 3, {GroupElement{7}});
  CHECK(translate(sys, b, GroupElement{1}) == residues(sys, 3, {GroupElement{0}}));
  const auto z = residues(sys, 1, {GroupElement{0}});
  CHECK(refine(sys, z, 0, 2) == residues(sys, 2, {GroupElement{0}, GroupElement{2}}));
  CHECK(refine(sys, z, 0, 1) == z);
  CHECK_THROWS_AS(refine(sys, a, 0, 2), Error);
  CHECK_THROWS_AS(translate(sys, a, GroupElement{1, 0}), Error);
  CHECK(normalize(sys, refine(sys, z, 0, 5)) == z);
}

TEST_CASE("odometer in two dimensions") {
  const auto sys = System::odometer(3, 2);
  const auto a = residues(sys, 1, {GroupElement{2, 1}});
  const auto t = translate(sys, a, GroupElement{1, -2});
  CHECK(describe(sys, t) == std::vector<std::string>{GroupElement{0, 2}.str()});
  const auto r = refine(sys, a, 0, 2);
  CHECK(r.size() == 9);
  for (const auto& s : describe(sys, r)) CHECK(!s.empty());
  CHECK(normalize(sys, r) == a);
}

TEST_CASE("admissible words match the Fibonacci oracle") {
  const auto sys = System::sturmian(Slope::golden());
  CHECK(as_set(admissible_words(sys, 1)) == std::set<std::string>{"0", "1"});
  CHECK(as_set(admissible_words(sys, 2)) == std::set<std::string>{"00", "01", "10"});
  CHECK(admissible_words(sys, 5).size() == 6);
  for (size_t len = 1; len <= 40; ++len) {
    const auto words = admissible_words(sys, static_cast<int64_t>(len));
    CHECK(words.size() == len + 1);
    CHECK(as_set(words) == fibonacci_factors(len));
  }
}

TEST_CASE("sturmian translate, refine and restrict") {
  const auto sys = System::sturmian(Slope::golden());
  const auto a = cylinders(sys, 0, {"01"});
  const auto t = translate(sys, a, GroupElement{-1});
  // Oracle: admissible length-3 words whose letters 1..2 read 01.
  std::set<std::string> want;
  for (const auto& w : fibonacci_factors(3)) {
    if (w.substr(1) == "01") want.insert(w);
  }
  CHECK(want == std::set<std::string>{"001", "101"});
  CHECK(words_at(sys, t, 3) == want);

  const auto zero = cylinders(sys, 0, {"0"});
  CHECK(as_set(describe(sys, refine(sys, zero, 0, 2))) == std::set<std::string>{"00", "01"});
  CHECK(refine(sys, zero, 0, 1) == zero);

  const auto y = restrict(sys, zero);
  CHECK(same_set(sys, domain(y, GroupElement{0}), zero));
  CHECK(words_at(sys, domain(y, GroupElement{1}), 2) == std::set<std::string>{"00"});
  CHECK_THROWS_AS(cylinders(sys, 0, {"11"}), Error);
}

TEST_CASE("odometer restriction domains") {
  const auto sys = System::odometer(2, 1);
  const auto y = residues(sys, 2, {GroupElement{0}, GroupElement{1}});
  const auto r = restrict(sys, y);
  CHECK(domain(r, GroupElement{1}) == residues(sys, 2, {GroupElement{0}}));
  CHECK(domain(r, GroupElement{0}) == y);
  CHECK(same_set(sys, domain(restrict(sys, full_set(sys)), GroupElement{3}), full_set(sys)));
  CHECK(restrict(sys, empty_set(sys)).is_empty());
}

TEST_CASE("clopen calculus invariants") {
  std::mt19937 rng(7);
  for (const auto& sys : {System::odometer(2, 1), System::odometer(3, 1), System::odometer(2, 2),
                          System::sturmian(Slope::golden()), System::sturmian(Slope{{2}, {1, 2}})}) {
    for (int trial = 0; trial < 40; ++trial) {
      const int64_t la = 1 + static_cast<int64_t>(rng() % 3), lb = 1 + static_cast<int64_t>(rng() % 3);
      auto a = random_set(sys, la, rng);
      auto b = random_set(sys, lb, rng);
      if (sys.model() == Model::sturmian) b.lo = static_cast<int64_t>(rng() % 5) - 2;
      GroupElement g(sys.dim());
      for (int i = 0; i < sys.dim(); ++i) g[i] = static_cast<int64_t>(rng() % 11) - 5;
      CHECK(same_set(sys, translate(sys, translate(sys, a, g), -g), a));
      CHECK(same_set(sys, translate(sys, unite(sys, a, b), g),
                     unite(sys, translate(sys, a, g), translate(sys, b, g))));
      CHECK(same_set(sys, translate(sys, intersect(sys, a, b), g),
                     intersect(sys, translate(sys, a, g), translate(sys, b, g))));
      CHECK(same_set(sys, normalize(sys, a), a));
      CHECK(normalize(sys, a).level <= a.level);
      CHECK(same_set(sys, unite(sys, a, complement(sys, a)), full_set(sys)));
      CHECK(intersect(sys, a, complement(sys, a)).empty());
      CHECK(same_set(sys, subtract(sys, a, b), intersect(sys, a, complement(sys, b))));

      // Partial action law on a restriction: θ_g ∘ θ_h ⊆ θ_{g+h}.
      const auto ys = restrict(sys, unite(sys, a, b));
      GroupElement h(sys.dim());
      for (int i = 0; i < sys.dim(); ++i) h[i] = static_cast<int64_t>(rng() % 7) - 3;
      auto theta = [&](const ClopenSet& s, const GroupElement& k) {
        return translate(sys, intersect(sys, s, domain(ys, k)), k);
      };
      const auto c = random_set(sys, 2, rng);
      CHECK(is_subset(sys, theta(theta(c, h), g), theta(c, g + h)));
      CHECK(same_set(sys, theta(c, GroupElement(sys.dim())), intersect(sys, c, space(ys))));
    }
  }
}

TEST_CASE("check_free") {
  CHECK(check_free(System::odometer(2, 1), ball(1, 5), 3).pass);
  CHECK(check_free(System::odometer(3, 2), ball(2, 2), 2).pass);

  const auto golden = System::sturmian(Slope::golden());
  const auto cert = check_free(golden, ball(1, 3), 8);
  CHECK(cert.pass);
  // Period 3 needs a resolution above 8: the oracle finds a 3-periodic
  // factor of length 8.
  bool periodic8 = false;
  for (const auto& w : fibonacci_factors(8)) {
    bool p = true;
    for (size_t i = 0; i + 3 < w.size(); ++i) p = p && w[i] == w[i + 3];
    periodic8 = periodic8 || p;
  }
  CHECK(periodic8);
  const auto& sep = cert.witness["separation"];
  CHECK(sep.size() == 6);  // differences up to diam F = 6
  CHECK(sep[2]["period"] == 3);
  CHECK(sep[2]["resolution"].get<int64_t>() > 8);

  // Directive (2; 0, 0, ...): standard word 001 repeated.
  const auto degenerate = System::sturmian(Slope{{2}, {0}});
  const auto bad = check_free(degenerate, ball(1, 3), 8);
  CHECK(!bad.pass);
  CHECK(bad.witness["period"] == 3);
  CHECK(bad.witness["word"] == "00100100");
  CHECK(check_free(degenerate, ball(1, 1), 8).pass);
}

TEST_CASE("clopen json round trip") {
  std::mt19937 rng(3);
  for (const auto& sys : {System::odometer(2, 1), System::odometer(2, 2), System::sturmian(Slope::golden())}) {
    for (int64_t level : {1, 3, 7}) {
      const auto a = random_set(sys, level, rng);
      CHECK(clopen_from_json(sys, to_json(sys, a)) == a);
    }
    const auto r = restrict(sys, random_set(sys, 2, rng));
    const auto back = System::from_json(r.to_json());
    CHECK(*back.restriction() == *r.restriction());
  }
  CHECK(open_enlarge(System::odometer(2, 1), full_set(System::odometer(2, 1))).pass);
}
