#include "doctest.h"

#include <random>

#include "dadcert/covers.hpp"
#include "dadcert/oracle.hpp"
#include "oracle_words.hpp"

using namespace dadcert;

namespace {

const System z2 = System::odometer(2, 1);
const FiniteSubset step = ball(1, 1);

ClopenSet res(int64_t depth, std::vector<int64_t> cells) {
  std::vector<GroupElement> v;
  for (int64_t c : cells) v.push_back(GroupElement{c});
  return residues(z2, depth, v);
}

ClopenSet arc(int64_t depth, int64_t lo, int64_t hi) {
  std::vector<int64_t> v;
  for (int64_t x = lo; x < hi; ++x) v.push_back(x);
  return res(depth, v);
}

// Two colors of four consecutive residues mod 8.
Cover halves() { return Cover{z2, {arc(3, 0, 4), arc(3, 4, 8)}, step, ball(1, 3)}; }

}  // namespace

TEST_CASE("verify_dad_cover examples") {
  CHECK(verify_dad_cover(halves()).pass);
  // The same cover cannot be bounded by a smaller S: labels span 0..3.
  const auto tight = verify_dad_cover(Cover{z2, {arc(3, 0, 4), arc(3, 4, 8)}, step, ball(1, 1)});
  CHECK_FALSE(tight.pass);
  CHECK(tight.witness["type"] == "color");
  CHECK(tight.witness["counterexample"]["diameter"] == 3);

  // One color of a minimal system is one unbounded component.
  const auto one = verify_dad_cover(Cover{z2, {full_set(z2)}, step, ball(1, 100)});
  CHECK_FALSE(one.pass);
  CHECK(one.witness["counterexample"]["type"] == "unbounded");
  const auto fib = System::sturmian(Slope::golden());
  CHECK_FALSE(verify_dad_cover(Cover{fib, {full_set(fib)}, step, ball(1, 100)}).pass);

  // F = {0}: singletons.
  CHECK(verify_dad_cover(Cover{z2, {arc(3, 0, 5), arc(3, 3, 8)}, FiniteSubset::identity(1),
                               FiniteSubset::identity(1)})
            .pass);

  // Holes are reported.
  const auto hole = verify_dad_cover(Cover{z2, {arc(3, 0, 4), arc(3, 5, 8)}, step, ball(1, 3)});
  CHECK_FALSE(hole.pass);
  CHECK(hole.witness["type"] == "uncovered");
  CHECK(hole.witness["cell"] == "4");

  CHECK_THROWS_AS(verify_dad_cover(Cover{z2, {}, step, step}), Error);
}

TEST_CASE("cover JSON round trip and replayable params") {
  const auto c = halves();
  const auto back = Cover::from_json(c.to_json());
  CHECK(back.to_json() == c.to_json());
  CHECK(verify_dad_cover(back).to_json() == verify_dad_cover(c).to_json());
}

TEST_CASE("scale schedule") {
  const auto s0 = scale_schedule(0, step);
  CHECK(s0.f.size() == 1);
  CHECK(s0.g.size() == 1);
  // Z: the grid cover at scale r has components of diameter 4r - 1.
  const auto s = scale_schedule(3, step);
  CHECK(s.g[0] == ball(1, 7));
  CHECK(s.f[1] == ball(1, 28));
  CHECK(s.g[1] == ball(1, 2 * (4 * 56 - 1)));
  CHECK(s.f[2] == ball(1, 4 * 446));
  for (size_t i = 0; i + 1 < s.f.size(); ++i) {
    CHECK(s.f[i].is_subset_of(s.f[i + 1]));
    CHECK(s.f[i].is_subset_of(s.g[i]));
    CHECK(s.f[i + 1] == power(s.g[i], 4));
  }
  // Non-ball F_0.
  const auto odd = scale_schedule(1, FiniteSubset(1, {GroupElement{-2}, GroupElement{0}, GroupElement{2}}));
  CHECK(odd.g[0] == ball(1, 15));
}

namespace {

// A = [0,8), B = [8,16) mod 16. A alone is ball(5)-bounded; B has two
// colors of short runs.
std::pair<Cover, Cover> half_covers() {
  const ClopenSet a = arc(4, 0, 8), b = arc(4, 8, 16);
  Cover ca{restrict(z2, a), {a, empty_set(z2)}, ball(1, 5), ball(1, 5)};
  Cover cb{restrict(z2, b), {res(4, {8, 9, 12, 13}), res(4, {10, 11, 14, 15})}, step, step};
  return {ca, cb};
}

}  // namespace

TEST_CASE("combine_union") {
  const auto [ca, cb] = half_covers();
  REQUIRE(verify_dad_cover(ca).pass);
  REQUIRE(verify_dad_cover(cb).pass);

  const auto [out, cert] = combine_union(ca, cb, step, 5, 5, 1, 1);
  CHECK(cert.pass);
  CHECK(out.f == step);
  CHECK(out.s == ball(1, 10));
  CHECK_FALSE(out.system.is_restricted());
  CHECK(verify_dad_cover(out).pass);

  const auto [out7, cert7] = combine_union(ca, cb, step, 5, 7, 1, 1);
  CHECK(cert7.pass);
  CHECK(out7.s == ball(1, 12));

  // 2·1 + 2·1 < 4 fails.
  CHECK_THROWS_AS(combine_union(ca, cb, step, 4, 5, 1, 1), Error);

  // A input that does not verify at the stated exponents.
  const auto [bad, bad_cert] = combine_union(ca, cb, step, 5, 1, 1, 1);
  CHECK_FALSE(bad_cert.pass);
  CHECK(bad_cert.witness["type"] == "unverified_input");
  CHECK(bad_cert.witness["input"] == "A");

  // A = ∅.
  const Cover empty_a{restrict(z2, empty_set(z2)), {empty_set(z2), empty_set(z2)}, step, step};
  const auto [eo, ec] = combine_union(empty_a, cb, step, 5, 7, 1, 1);
  CHECK(ec.pass);
  CHECK(eo.s == ball(1, 12));
  CHECK(same_set(z2, space(eo.system), space(cb.system)));
}

TEST_CASE("finite union lemma on random verified inputs") {
  std::mt19937_64 rng(7);
  const int64_t depth = 6, n = 64;
  int combined = 0;
  for (int trial = 0; trial < 400 && combined < 25; ++trial) {
    // A: a few arcs; B: the rest.
    std::vector<int64_t> av, bv;
    std::vector<uint8_t> in_a(n, 0);
    for (int k = 0; k < 2; ++k) {
      const auto s = static_cast<int64_t>(rng() % n), len = static_cast<int64_t>(4 + rng() % 12);
      for (int64_t x = s; x < s + len; ++x) in_a[static_cast<size_t>(x % n)] = 1;
    }
    for (int64_t x = 0; x < n; ++x) (in_a[static_cast<size_t>(x)] ? av : bv).push_back(x);
    if (bv.empty()) continue;
    const ClopenSet a = res(depth, av), b = res(depth, bv);
    // B: blocks of 3 alternating; A: one color per arc split at random.
    std::vector<int64_t> b0, b1, a0, a1;
    const auto period = static_cast<int64_t>(2 + rng() % 3);
    for (int64_t x : bv) ((x / period) % 2 ? b1 : b0).push_back(x);
    const auto cut = static_cast<int64_t>(rng() % n);
    for (int64_t x : av) (x < cut ? a0 : a1).push_back(x);
    const int64_t ra = 5 + static_cast<int64_t>(rng() % 3);
    const int64_t big_ra = 10 + static_cast<int64_t>(rng() % 10);
    const int64_t big_rb = period;
    const int64_t rb = 1;
    if (2 * big_rb + 2 * rb >= ra) continue;
    const Cover ca{restrict(z2, a), {res(depth, a0), res(depth, a1)}, power(step, ra), power(step, big_ra)};
    const Cover cb{restrict(z2, b), {res(depth, b0), res(depth, b1)}, step, power(step, big_rb)};
    if (!verify_dad_cover(ca).pass || !verify_dad_cover(cb).pass) continue;
    const auto [out, cert] = combine_union(ca, cb, step, ra, big_ra, rb, big_rb);
    CHECK(cert.pass);
    CHECK(verify_dad_cover(out).pass);
    ++combined;
  }
  CHECK(combined >= 10);
}

TEST_CASE("tower decomposition examples") {
  {
    const auto td = tower_decomposition(z2, arc(3, 0, 3), step, ball(1, 2));
    CHECK(td.certificate.pass);
    REQUIRE(td.towers.size() == 1);
    const auto& t = td.towers[0];
    REQUIRE(t.fibers.size() == 3);
    for (int64_t s = 0; s < 3; ++s) {
      CHECK(t.fibers[static_cast<size_t>(s)].first == GroupElement{s});
      CHECK(t.fibers[static_cast<size_t>(s)].second == arc(3, s, s + 1));
    }
  }
  {
    const auto td = tower_decomposition(z2, res(3, {0, 1, 4, 5}), step, ball(1, 1));
    CHECK(td.certificate.pass);
    REQUIRE(td.towers.size() == 2);
    CHECK(td.towers[0].set == res(3, {0, 1}));
    CHECK(td.towers[1].set == res(3, {4, 5}));
    CHECK(f_separated(z2, td.towers[0].set, td.towers[1].set, step).pass);
    CHECK(intersect(z2, td.towers[0].set, td.towers[1].set).empty());
  }
  {
    const auto td = tower_decomposition(z2, res(3, {6}), step, FiniteSubset::identity(1));
    REQUIRE(td.towers.size() == 1);
    REQUIRE(td.towers[0].fibers.size() == 1);
    CHECK(td.towers[0].fibers[0].first == GroupElement{0});
  }
  CHECK_THROWS_AS(tower_decomposition(z2, arc(3, 0, 5), step, ball(1, 1)), Error);
}

TEST_CASE("towers of a sturmian color") {
  const auto fib = System::sturmian(Slope::golden());
  const ClopenSet zeros = cylinders(fib, 0, {"0"});
  const auto td = tower_decomposition(fib, zeros, step, ball(1, 1));
  CHECK(td.certificate.pass);
  // Runs of 0s have length 1 or 2: shapes {0} and {0,1}.
  CHECK(td.towers.size() == 2);
  CHECK(td.labels() == std::vector<GroupElement>{GroupElement{0}, GroupElement{1}});
  ClopenSet all = empty_set(fib);
  for (const auto& t : td.towers) {
    for (const auto& [label, e] : t.fibers) all = unite(fib, all, e);
  }
  CHECK(same_set(fib, all, zeros));
}

TEST_CASE("cover_tower") {
  const auto td = tower_decomposition(z2, arc(3, 0, 3), step, ball(1, 2));
  // diam(step) = 2: grid of Z at scale 2, intervals of length 8.
  const auto gcov = gamma_action_cover(1, step);
  const auto [cov, cert] = cover_tower(td, gcov);
  CHECK(cert.pass);
  CHECK(cov.colors[0] == arc(3, 0, 3));
  CHECK(cov.colors[1].empty());

  const auto single = tower_decomposition(z2, res(3, {5}), step, FiniteSubset::identity(1));
  const auto [c1, k1] = cover_tower(single, gcov);
  CHECK(k1.pass);
  CHECK(c1.colors[0].size() == 1);

  // Labels 0..9 straddle two grid intervals of length 8.
  const auto long_run = tower_decomposition(z2, arc(4, 0, 10), step, ball(1, 5));
  const auto [c2, k2] = cover_tower(long_run, gcov);
  CHECK(k2.pass);
  CHECK(c2.colors[0] == arc(4, 0, 8));
  CHECK(c2.colors[1] == arc(4, 8, 10));
}

TEST_CASE("reduce_cover on the Z-odometer") {
  // d = 1: a 2-color input at F_1 = ball(28).
  const auto sched = scale_schedule(1, step);
  const Cover in = odometer_arc_cover(z2, 2, sched.f[1]);
  CHECK(in.colors.front().level == 6);
  REQUIRE(verify_dad_cover(in).pass);
  const auto [out, cert] = reduce_cover(in, step);
  CHECK(cert.pass);
  CHECK(out.colors.size() == 2);
  CHECK(out.f == step);
  CHECK(out.s == sched.g[1]);
  CHECK(verify_dad_cover(out).pass);

  // d = 2: three colors in, two out.
  const auto s2 = scale_schedule(2, step);
  const Cover in3 = odometer_arc_cover(z2, 3, s2.f[2]);
  CHECK(in3.colors.front().level == 12);
  const auto [out3, cert3] = reduce_cover(in3, step);
  CHECK(cert3.pass);
  CHECK(out3.colors.size() == 2);
  CHECK(out3.s == s2.g[2]);

  // Input F too small for the schedule.
  CHECK_THROWS_AS(reduce_cover(halves(), step), Error);
}

TEST_CASE("reduce_cover on the golden shift") {
  const auto fib = System::sturmian(Slope::golden());
  const auto sched = scale_schedule(1, step);
  const Cover in = sturmian_marker_cover(fib, 2, sched.f[1]);
  REQUIRE(verify_dad_cover(in).pass);
  const auto [out, cert] = reduce_cover(in, step);
  CHECK(cert.pass);
  CHECK(out.colors.size() == 2);
  CHECK(out.s == sched.g[1]);
  CHECK(verify_dad_cover(out).pass);
}

TEST_CASE("restrict_cover") {
  const auto c = halves();
  CHECK(restrict_cover(c, full_set(z2)).to_json() == c.to_json());
  const auto r = restrict_cover(c, arc(3, 0, 4));
  CHECK(r.system.is_restricted());
  CHECK(verify_dad_cover(r).pass);
  const auto one = restrict_cover(c, res(3, {6}));
  const auto cert = verify_dad_cover(Cover{one.system, one.colors, one.f, FiniteSubset::identity(1)});
  CHECK(cert.pass);
}

TEST_CASE("orbit transport") {
  const auto [coloring, cert] = orbit_transport(halves(), 8);
  CHECK(cert.pass);
  CHECK(cert.params["bound"] == 6);
  CHECK(coloring.size() == 17);
  for (const auto& [g, c] : coloring) {
    const int64_t r = ((g[0] % 8) + 8) % 8;
    CHECK(c == (r < 4 ? 0 : 1));
  }

  const auto [c0, k0] = orbit_transport(
      Cover{z2, {arc(3, 0, 5), arc(3, 3, 8)}, FiniteSubset::identity(1), FiniteSubset::identity(1)}, 5);
  CHECK(k0.pass);

  // Golden shift colored by the letter at 0: the induced coloring is a
  // factor of the Fibonacci word.
  const auto fib = System::sturmian(Slope::golden());
  const Cover letters{fib, {cylinders(fib, 0, {"0"}), cylinders(fib, 0, {"1"})}, step, ball(1, 1)};
  REQUIRE(verify_dad_cover(letters).pass);
  const auto [lc, lk] = orbit_transport(letters, 10);
  CHECK(lk.pass);
  std::string seen;
  for (const auto& [g, c] : lc) seen += static_cast<char>('0' + c);
  CHECK(seen.size() == 21);
  CHECK(seen[10] == '0');
  CHECK(fibonacci_word().find(seen) != std::string::npos);

  // The grid cover of Z at scale 2 has period 16: read it as a depth-4
  // odometer cover and transport it back.
  const auto gcov = gamma_action_cover(1, step);
  std::vector<ClopenSet> grid_colors;
  for (size_t j = 0; j < gcov.cover.color_count(); ++j) {
    std::vector<int64_t> cells;
    for (int64_t x = 0; x < 16; ++x) {
      if (gcov.cover.mask(j)[static_cast<size_t>(x)]) cells.push_back(x);
    }
    grid_colors.push_back(res(4, cells));
  }
  const auto [gc, gk] = orbit_transport(Cover{z2, grid_colors, step, gcov.s}, 40);
  CHECK(gk.pass);
  for (const auto& [g, c] : gc) CHECK(c == gcov.cover.color_of(g));
}

TEST_CASE("certificates replay") {
  auto round = [](const Certificate& c) { return replay(json::parse(c.to_json().dump())); };
  CHECK(round(verify_dad_cover(halves())).pass);
  CHECK(round(verify_dad_cover(Cover{z2, {arc(3, 0, 4), arc(3, 4, 8)}, step, ball(1, 1)})).pass);
  const auto [ca, cb] = half_covers();
  CHECK(round(combine_union(ca, cb, step, 5, 5, 1, 1).second).pass);
  CHECK(round(orbit_transport(halves(), 8).second).pass);
  CHECK(round(verify_group_cover(grid_cover(2, 3), 3, control_function(2, 3))).pass);
  CHECK(round(verify_group_cover(grid_cover(1, 2), 2, 3)).pass);
  const auto g = gamma_action_cover(1, step);
  CHECK(round(verify_gamma_cover(g.cover, g.f, g.s)).pass);
  const auto fib = System::sturmian(Slope::golden());
  CHECK(round(check_free(fib, ball(1, 3), 8)).pass);
  CHECK(round(f_separated(fib, cylinders(fib, 0, {"1"}), cylinders(fib, 2, {"1"}), step)).pass);
  const auto sched = scale_schedule(1, step);
  CHECK(round(reduce_cover(odometer_arc_cover(z2, 2, sched.f[1]), step).second).pass);

  // A tampered verdict does not replay.
  auto j = verify_dad_cover(halves()).to_json();
  j["verdict"] = "fail";
  const auto tampered = replay(j);
  CHECK_FALSE(tampered.pass);
  CHECK(tampered.note == "verdict differs");
  // Nested-only kinds are rejected.
  CHECK_THROWS_AS(replay(verify_dad_cover(halves()).children.front().to_json()), Error);
}
