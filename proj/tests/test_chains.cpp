#include "doctest.h"

#include "dadcert/chains.hpp"
#include "dadcert/oracle.hpp"

using namespace dadcert;

namespace {

const System z2 = System::odometer(2, 1);

ClopenSet res(int64_t depth, std::initializer_list<int64_t> cells) {
  std::vector<GroupElement> v;
  for (int64_t c : cells) v.push_back(GroupElement{c});
  return residues(z2, depth, v);
}

std::vector<GroupElement> ints(std::initializer_list<int64_t> xs) {
  std::vector<GroupElement> v;
  for (int64_t x : xs) v.push_back(GroupElement{x});
  return v;
}

const FiniteSubset step = ball(1, 1);

}  // namespace

TEST_CASE("f_components on an odometer run") {
  const auto comp = f_components(z2, res(3, {0, 1, 2}), step);
  REQUIRE(comp.cell_count() == 3);
  CHECK(comp.labels(0) == ints({0, 1, 2}));
  CHECK(comp.labels(1) == ints({-1, 0, 1}));
  CHECK(comp.labels(2) == ints({-2, -1, 0}));
  // Oracle: lifted-integer BFS per residue.
  const auto model = FiniteQuotientModel::odometer(z2, 3);
  const auto naive = naive_components(model, res(3, {0, 1, 2}), step);
  REQUIRE(naive.size() == 3);
  CHECK(*naive[0].second == ints({0, 1, 2}));
  CHECK(compare_components(model, res(3, {0, 1, 2}), step).pass);

  const auto whole = f_components(z2, full_set(z2), step);
  CHECK(whole.any_unbounded());
  CHECK(whole.components[0].witness["type"] == "cycle");
  const auto single = f_components(z2, res(3, {0, 1, 2, 5}), FiniteSubset::identity(1));
  for (size_t i = 0; i < single.cell_count(); ++i) CHECK(single.labels(i) == ints({0}));
  CHECK(f_components(z2, empty_set(z2), step).cell_count() == 0);
  CHECK_THROWS_AS(f_components(z2, full_set(z2), FiniteSubset(1, ints({0, 1}))), Error);
}

TEST_CASE("is_s_bounded") {
  const auto comp = f_components(z2, res(3, {0, 1, 2}), step);
  const auto cert = is_s_bounded(z2, comp, ball(1, 1));
  CHECK(cert.pass);
  CHECK(cert.witness["cells"][0]["lambda"] == 1);
  CHECK(!is_s_bounded(z2, f_components(z2, full_set(z2), step), ball(1, 50)).pass);
  const auto point = f_components(z2, res(3, {4}), FiniteSubset::identity(1));
  const auto p = is_s_bounded(z2, point, FiniteSubset::identity(1));
  CHECK(p.pass);
  CHECK(p.witness["cells"][0]["lambda"] == 0);
  const auto tight = is_s_bounded(z2, comp, FiniteSubset::identity(1));
  CHECK(!tight.pass);
  CHECK(tight.witness["type"] == "not_s_bounded");
  // Monotone in S.
  for (int64_t r = 1; r <= 4; ++r) CHECK(is_s_bounded(z2, comp, ball(1, r)).pass);
}

TEST_CASE("f_separated and component_of_in") {
  CHECK(f_separated(z2, res(3, {0}), res(3, {4}), step).pass);
  const auto joined = f_separated(z2, res(3, {0}), res(3, {1}), step);
  CHECK(!joined.pass);
  CHECK(joined.witness["offset"] == 1);
  CHECK(f_separated(z2, res(3, {0, 1}), res(3, {3}), step).pass);
  CHECK(!f_separated(z2, res(3, {0, 1}), res(3, {1}), step).pass);

  CHECK(component_of_in(z2, res(3, {0}), res(3, {0, 1, 2, 5}), step) == res(3, {0, 1, 2}));
  const auto v = res(3, {0, 1, 2, 5});
  CHECK(same_set(z2, component_of_in(z2, v, v, step), v));
  CHECK(component_of_in(z2, res(3, {1}), v, FiniteSubset::identity(1)) == res(3, {1}));
  CHECK_THROWS_AS(component_of_in(z2, res(3, {3}), v, step), Error);
}

TEST_CASE("odometer components agree with the oracle on every clopen set") {
  for (int64_t depth = 1; depth <= 4; ++depth) {
    const auto model = FiniteQuotientModel::odometer(z2, depth);
    const int64_t n = int64_t{1} << depth;
    for (int64_t mask = 0; mask < (int64_t{1} << n); ++mask) {
      ClopenSet b{Model::odometer, 0, depth, {}};
      for (int64_t c = 0; c < n; ++c) {
        if (mask >> c & 1) b.codes.push_back(c);
      }
      for (int64_t k = 1; k <= 2; ++k) {
        const auto cert = compare_components(model, b, ball(1, k));
        if (!cert.pass) FAIL_CHECK(cert.to_json().dump());
      }
    }
  }
}

TEST_CASE("Z^2 odometer components agree with the oracle") {
  const auto sys = System::odometer(2, 2);
  const auto model = FiniteQuotientModel::odometer(sys, 2);
  for (int64_t mask = 0; mask < (1 << 16); mask += 37) {
    ClopenSet b{Model::odometer, 0, 2, {}};
    for (int64_t c = 0; c < 16; ++c) {
      if (mask >> c & 1) b.codes.push_back(c);
    }
    const auto cert = compare_components(model, b, ball(2, 1));
    if (!cert.pass) FAIL_CHECK(cert.to_json().dump());
  }
}

TEST_CASE("sturmian components agree with the oracle") {
  const auto sys = System::sturmian(Slope::golden());
  const auto model = FiniteQuotientModel::sturmian(sys, 6000);
  int64_t sets = 0;
  for (int64_t len = 1; len <= 6; ++len) {
    const auto words = admissible_words(sys, len);
    for (int64_t mask = 1; mask < (int64_t{1} << words.size()); ++mask) {
      std::vector<std::string> pick;
      for (size_t i = 0; i < words.size(); ++i) {
        if (mask >> i & 1) pick.push_back(words[i]);
      }
      const auto b = cylinders(sys, 0, pick);
      for (int64_t k = 1; k <= 2; ++k) {
        const auto cert = compare_components(model, b, ball(1, k));
        ++sets;
        if (!cert.pass) FAIL_CHECK(cert.to_json().dump());
      }
    }
  }
  CHECK(sets > 200);
}

TEST_CASE("sturmian separation and closure") {
  const auto sys = System::sturmian(Slope::golden());
  // "11" never occurs: the 1s are isolated, so {1} under ball(1,1) is
  // a union of singletons.
  const auto ones = cylinders(sys, 0, {"1"});
  const auto comp = f_components(sys, ones, step);
  CHECK(!comp.any_unbounded());
  for (size_t i = 0; i < comp.cell_count(); ++i) CHECK(comp.labels(i) == ints({0}));
  const auto zeros = cylinders(sys, 0, {"0"});
  // No two consecutive 1s: zeros never leave a gap of two.
  CHECK(f_components(sys, zeros, ball(1, 2)).any_unbounded());
  CHECK(!f_separated(sys, ones, zeros, step).pass);
  CHECK(f_separated(sys, ones, zeros, FiniteSubset::identity(1)).pass);
  // 101 occurs, so the 1s and their 2-translates overlap.
  CHECK(!f_separated(sys, ones, translate(sys, ones, GroupElement{2}), FiniteSubset::identity(1)).pass);
  const auto closure = component_of_in(sys, cylinders(sys, 0, {"00"}), zeros, step);
  // Oracle: a 0 belongs to the closure iff it is adjacent to another 0.
  const auto model = FiniteQuotientModel::sturmian(sys, 4000);
  for (int64_t x = 100; x < 3900; ++x) {
    const bool want = model.segment[x] == '0' &&
                      (model.segment[x - 1] == '0' || model.segment[x + 1] == '0');
    CHECK(model.contains(closure, x) == want);
  }
  CHECK_THROWS_AS(f_components(sys, zeros, FiniteSubset(1, ints({-3, -1, 0, 1, 3}))), Error);
}

TEST_CASE("restricted systems keep chains inside Y") {
  const auto y = res(3, {0, 1, 2, 3});
  const auto sys = restrict(z2, y);
  const auto comp = f_components(sys, res(3, {2, 3, 4, 5}), step);
  CHECK(comp.cells == res(3, {2, 3}));
  CHECK(comp.labels(0) == ints({0, 1}));
}

TEST_CASE("exhaustive_min_colors") {
  const auto model = FiniteQuotientModel::odometer(z2, 3);
  CHECK(exhaustive_min_colors(model, step, ball(1, 3)) == 2);
  CHECK(exhaustive_min_colors(model, FiniteSubset::identity(1), FiniteSubset::identity(1)) == 1);
  for (int64_t c = 1; c <= 8; ++c) CHECK(exhaustive_min_colors(model, step, ball(1, c)) == 2);
  CHECK_THROWS_AS(exhaustive_min_colors(FiniteQuotientModel::odometer(z2, 5), step, ball(1, 3)), Error);
  CHECK_THROWS_AS(FiniteQuotientModel::odometer(z2, 17), Error);
}
