#include <catch_amalgamated.hpp>

#include "oracles.hpp"

using namespace nervekit;

namespace {

SimplicialComplex hollow_triangle() { return SimplicialComplex::from_simplices(3, {{0, 1}, {0, 2}, {1, 2}}); }

}  // namespace

TEST_CASE("nerve_of matches brute-force intersections", "[nerve]") {
  const auto line = share(samples::line(4));
  const auto split = nerve_of(Cover(line, {{0, 1}, {2, 3}}, {0, 3}));
  CHECK(split.dimension() == 0);
  CHECK(split.simplices(0).size() == 2);

  const auto circle = share(samples::circle(64));
  const auto arcs = samples::circle_arc_cover(circle, 3, 1.5);
  CHECK(nerve_of(arcs) == hollow_triangle());

  const auto coords = samples::fibonacci_sphere_coords(100);
  const auto sphere = share(samples::sphere_from_coords(coords));
  const auto octa = samples::octahedral_cover(sphere, coords);
  const auto n = nerve_of(octa);
  auto expected = oracle::nonempty_index_sets(octa, 9);
  auto got = n.all_simplices();
  std::sort(expected.begin(), expected.end());
  std::sort(got.begin(), got.end());
  CHECK(got == expected);
  CHECK(n.simplices(2).size() == 8);
  CHECK(n.simplices(1).size() == 12);
  CHECK(n.dimension() == 2);
}

TEST_CASE("nerve dimension cap and skeleta", "[nerve]") {
  const auto coords = samples::fibonacci_sphere_coords(100);
  const auto sphere = share(samples::sphere_from_coords(coords));
  const auto octa = samples::octahedral_cover(sphere, coords);
  const auto full = nerve_of(octa, 8);
  for (int k = 0; k <= 3; ++k) CHECK(nerve_of(octa, k).all_simplices() == skeleton(full, static_cast<std::size_t>(k)).all_simplices());
  CHECK(nerve_of(octa, 1).dim_cap() == 1);

  const auto tri = hollow_triangle();
  CHECK(skeleton(tri, 5).all_simplices() == tri.all_simplices());
  CHECK(skeleton(tri, 0).all_simplices().size() == 3);
  const auto solid = SimplicialComplex::from_simplices(3, {{0, 1, 2}});
  CHECK(skeleton(solid, 1).all_simplices() == tri.all_simplices());
}

TEST_CASE("closed stars", "[nerve]") {
  const auto isolated = SimplicialComplex::from_simplices(2, {{0}});
  CHECK(star(isolated, {1}).all_simplices() == std::vector<Simplex>{{1}});

  // Path 0-1-2 plus a triangle 1-3-4: the star of vertex 1 is everything
  // touching 1, closed downward.
  const auto k = SimplicialComplex::from_simplices(5, {{0, 1}, {1, 2}, {1, 3, 4}});
  const auto s = star(k, {1});
  std::vector<Simplex> expected;
  for (const auto& sigma : k.all_simplices()) expected.push_back(sigma);
  CHECK(s.all_simplices() == expected);

  const auto solid = SimplicialComplex::from_simplices(3, {{0, 1, 2}});
  CHECK(star(solid, {0, 1, 2}).all_simplices() == solid.all_simplices());
  CHECK_THROWS_AS(star(hollow_triangle(), {0, 1, 2}), ValidationError);
}

TEST_CASE("nerve is equivariant under relabeling", "[nerve]") {
  const auto coords = samples::fibonacci_sphere_coords(100);
  const auto sphere = share(samples::sphere_from_coords(coords));
  const auto octa = samples::octahedral_cover(sphere, coords);
  const std::vector<std::size_t> perm{4, 2, 5, 0, 3, 1};
  std::vector<std::vector<std::size_t>> sets(6);
  std::vector<std::size_t> centers(6);
  for (std::size_t j = 0; j < 6; ++j) {
    sets[perm[j]] = octa.set(j);
    centers[perm[j]] = octa.center(j);
  }
  const Cover permuted(sphere, sets, centers);
  CHECK_FALSE(isomorphism_defect(nerve_of(octa), nerve_of(permuted), perm).has_value());
  CHECK(relabel(nerve_of(octa), perm) == nerve_of(permuted));
}

TEST_CASE("barycentric points", "[nerve]") {
  const BarycentricPoint p({{3, 0.25}, {1, 0.75}});
  CHECK(p.support() == Simplex{1, 3});
  CHECK(p.weight(3) == 0.25);
  CHECK(p.weight(2) == 0.0);
  // Tiny entries are dropped and the remainder renormalized.
  const BarycentricPoint q({{0, 1.0 - 1e-16}, {1, 1e-16}});
  CHECK(q.support() == Simplex{0});
  CHECK(q.weight(0) == 1.0);
  CHECK_THROWS_AS(BarycentricPoint({{0, 0.5}}), ValidationError);
  CHECK_THROWS_AS(BarycentricPoint({{0, 1.5}, {1, -0.5}}), ValidationError);
  CHECK(BarycentricPoint::from_dense({0.0, 0.5, 0.5}) == BarycentricPoint({{1, 0.5}, {2, 0.5}}));
}

TEST_CASE("realization distance", "[nerve]") {
  const auto e1 = BarycentricPoint::vertex(1);
  const auto e2 = BarycentricPoint::vertex(2);
  const BarycentricPoint mid({{1, 0.5}, {2, 0.5}});
  CHECK(realization_distance(e1, e1) == 0.0);
  CHECK(realization_distance(e1, e2) == 1.0);
  CHECK(realization_distance(e1, mid) == 0.5);

  Rng rng = make_rng(42);
  auto random_point = [&] {
    std::vector<double> w(6, 0.0);
    double total = 0.0;
    for (auto& v : w) {
      if (uniform01(rng) < 0.5) total += (v = uniform01(rng));
    }
    if (total == 0.0) return BarycentricPoint::vertex(uniform_index(rng, 6));
    for (auto& v : w) v /= total;
    return BarycentricPoint::from_dense(w);
  };
  for (int i = 0; i < 2000; ++i) {
    const auto a = random_point();
    const auto b = random_point();
    const auto c = random_point();
    CHECK(realization_distance(a, b) == realization_distance(b, a));
    CHECK(realization_distance(a, c) <= realization_distance(a, b) + realization_distance(b, c) + 1e-12);
  }
}
