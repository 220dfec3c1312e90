#include <catch_amalgamated.hpp>

#include <numbers>

#include "oracles.hpp"

using namespace nervekit;

namespace {

std::vector<std::size_t> ranks(const BettiVector& b) { return b.ranks; }

}  // namespace

TEST_CASE("Betti numbers of small complexes", "[homology]") {
  CHECK(ranks(betti(SimplicialComplex::from_simplices(1, {}))) == std::vector<std::size_t>{1});
  const auto tri = SimplicialComplex::from_simplices(3, {{0, 1}, {0, 2}, {1, 2}});
  CHECK(ranks(betti(tri, 1)) == std::vector<std::size_t>{1, 1});

  std::vector<Simplex> octahedron;
  for (std::size_t a : {0, 1}) {
    for (std::size_t b : {2, 3}) {
      for (std::size_t c : {4, 5}) octahedron.push_back({a, b, c});
    }
  }
  const auto oct = SimplicialComplex::from_simplices(6, octahedron);
  CHECK(ranks(betti(oct, 2)) == std::vector<std::size_t>{1, 0, 1});
  CHECK(ranks(betti(oct, 2)) == oracle::betti(octahedron, 2));
  CHECK(oct.euler_characteristic() == 2);

  CHECK_THROWS_AS(betti(SimplicialComplex{}, 0), ValidationError);
}

TEST_CASE("Betti numbers agree with the dense oracle on random complexes", "[homology]") {
  Rng rng = make_rng(5);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t n = 4 + uniform_index(rng, 5);
    std::vector<Simplex> gens;
    for (int g = 0; g < 6; ++g) {
      Simplex s;
      for (std::size_t v = 0; v < n; ++v) {
        if (uniform01(rng) < 0.4) s.push_back(v);
      }
      if (!s.empty() && s.size() <= 4) gens.push_back(s);
    }
    for (std::size_t v = 0; v < n; ++v) gens.push_back({v});
    const auto k = SimplicialComplex::from_simplices(n, gens);
    const auto b = betti(k, 3);
    auto expected = oracle::betti(gens, 3);
    std::vector<std::size_t> got = b.ranks;
    got.resize(4, 0);
    CHECK(got == expected);
    long alternating = 0;
    for (std::size_t d = 0; d < b.ranks.size(); ++d) alternating += (d % 2 ? -1 : 1) * static_cast<long>(b.ranks[d]);
    if (k.dimension() <= 3) CHECK(alternating == k.euler_characteristic());
  }
}

TEST_CASE("Betti numbers are invariant under relabeling", "[homology]") {
  const auto k = SimplicialComplex::from_simplices(6, {{0, 1, 2}, {2, 3}, {3, 4}, {4, 5}, {5, 2}});
  const auto r = relabel(k, {5, 3, 1, 0, 2, 4});
  CHECK(betti(k, 2) == betti(r, 2));
}

TEST_CASE("Vietoris-Rips complexes", "[homology]") {
  const auto circle = samples::circle(16);
  const double spacing = 2 * std::numbers::pi / 16;
  const auto discrete = vr_complex(circle, 0.5 * spacing, 2);
  CHECK(discrete.dimension() == 0);
  CHECK(discrete.simplices(0).size() == 16);

  const auto full = vr_complex(circle, circle.diameter(), 3);
  CHECK(full.dimension() == 3);
  CHECK(full.simplices(3).size() == 1820);  // C(16, 4)

  const auto cycle = vr_complex(circle, 1.5 * spacing, 2);
  CHECK(cycle.simplices(1).size() == 16);
  CHECK(cycle.simplices(2).empty());
  for (const auto& e : cycle.simplices(1)) CHECK(((e[1] - e[0]) == 1 || (e[0] == 0 && e[1] == 15)));
  CHECK(ranks(betti(cycle, 1)) == std::vector<std::size_t>{1, 1});
  CHECK_THROWS_AS(vr_complex(circle, 0.0, 1), ValidationError);
}

TEST_CASE("nerve_matches_space", "[homology]") {
  const auto circle = share(samples::circle(64));
  const double spacing = 2 * std::numbers::pi / 64;
  const auto arcs = samples::circle_arc_cover(circle, 3, 1.5);
  const auto r = nerve_matches_space(arcs, 1.5 * spacing, 1);
  CHECK(r.match());
  CHECK(r.euler_consistent);
  CHECK(r.nerve_betti.ranks == std::vector<std::size_t>{1, 1});

  // A cover whose one set is everything except a small arc, plus that arc:
  // the nerve is an edge (contractible) while the circle has a loop.
  std::vector<std::size_t> big;
  for (std::size_t i = 4; i < 64; ++i) big.push_back(i);
  const Cover bad(circle, {big, {63, 0, 1, 2, 3, 4, 5}}, {34, 1});
  const auto m = nerve_matches_space(bad, 1.5 * spacing, 1);
  CHECK_FALSE(m.match());
  CHECK(m.nerve_betti.ranks == std::vector<std::size_t>{1, 0});
}
