#include <catch_amalgamated.hpp>

#include <cmath>
#include <limits>

#include "oracles.hpp"

using namespace nervekit;
using Catch::Matchers::WithinAbs;

namespace {

constexpr double L = kDefaultConeHeight;

struct CircleFixture {
  SpacePtr space = share(samples::circle(64));
  Cover cover = samples::circle_arc_cover(space, 3, 1.5);
  PartitionOfUnity pou{cover};
  SimplicialComplex nerve = nerve_of(cover);
  ContractionAtlas atlas{cover, L, 4};
};

SimplexCoords random_coords(Rng& rng, std::size_t k1) {
  SimplexCoords x(k1);
  double total = 0.0;
  for (auto& v : x) total += (v = uniform_real(rng, 0.01, 1.0));
  for (auto& v : x) v /= total;
  return x;
}

// Euclidean distance from (x, t) to the sample points of an edge prism whose
// radial height satisfies `keep`, over a uniform grid.
template <typename Keep>
double grid_distance(const SimplexCoords& x, double t, Keep keep, int steps) {
  double best = std::numeric_limits<double>::infinity();
  for (int i = 0; i <= steps; ++i) {
    const double y0 = static_cast<double>(i) / steps;
    for (int j = 0; j <= steps; ++j) {
      const double s = L * static_cast<double>(j) / steps;
      const SimplexCoords y{y0, 1.0 - y0};
      if (!keep(radial_projection_r(y, s, L).u)) continue;
      const double d = std::sqrt((x[0] - y[0]) * (x[0] - y[0]) + (x[1] - y[1]) * (x[1] - y[1]) + (t - s) * (t - s));
      best = std::min(best, d);
    }
  }
  return best;
}

}  // namespace

TEST_CASE("parameter grid and cut-off profiles", "[retraction]") {
  const auto grid = parameter_grid();
  REQUIRE(grid.size() == 17);
  CHECK(grid.front() == 0.0);
  CHECK(grid.back() == 1.0);
  for (double s : grid) {
    if (s <= 1.0 / 3.0) CHECK(CutoffProfile::g(2.0, s) == 1.0);
    if (s <= 0.5) CHECK(CutoffProfile::mu(s) == 0.0);
    if (s >= 2.0 / 3.0) CHECK(CutoffProfile::mu(s) == 1.0);
    if (s <= 2.0 / 3.0) CHECK(CutoffProfile::nu(s) == 0.0);
    if (s >= 0.75) CHECK(CutoffProfile::nu(s) == 1.0);
    CHECK(CutoffProfile::g(3.0, s) >= 0.0);
    CHECK(CutoffProfile::g(3.0, s) <= 1.0);
  }
  CHECK(CutoffProfile::g(5.0, 1.0) == 0.0);
  CHECK(CutoffProfile::mu(2.0 / 3.0) == 1.0);
  CHECK_THROWS_AS(parameter_grid(0), ValidationError);
}

TEST_CASE("homotopy H", "[retraction]") {
  CircleFixture f;
  const std::size_t x = 10;  // in arcs 0 and 1
  REQUIRE(f.cover.memberships(x).size() == 2);
  const auto j = f.cover.memberships(x).front();
  const auto theta = BarycentricPoint::vertex(j);
  CHECK(homotopy_H(f.pou, theta, x, 0.0) == CylinderPoint{theta, {x, 0.0}});
  CHECK(homotopy_H(f.pou, theta, x, 1.0) == tau_embed(f.pou, x));
  for (double s : parameter_grid()) CHECK(homotopy_H(f.pou, f.pou.theta(x), x, s) == tau_embed(f.pou, x));
  const auto trace = trace_H(f.pou, theta, x);
  CHECK(trace.starts_at_input);
  CHECK(trace.ends_in_retract);

  // (v_j, x) with x outside U_j is not in D(U).
  std::size_t outside = 0;
  while (f.cover.contains(j, outside)) ++outside;
  CHECK_THROWS_AS(homotopy_H(f.pou, theta, outside, 0.5), ValidationError);
}

TEST_CASE("homotopy F", "[retraction]") {
  const CylinderPoint p{BarycentricPoint::vertex(0), {3, 0.0}};
  CHECK(homotopy_F(p, 0.0, L) == p);
  CHECK(homotopy_F(p, 1.0, L).cone.t == L);
  CHECK(homotopy_F(p, 0.5, L).cone.t == 3.5);
  const CylinderPoint apex{BarycentricPoint::vertex(0), {3, L}};
  for (double s : parameter_grid()) CHECK(homotopy_F(apex, s, L) == apex);
  const auto trace = trace_F(p, L);
  CHECK(trace.starts_at_input);
  CHECK(trace.ends_in_retract);
}

TEST_CASE("discrete contractions", "[retraction]") {
  CircleFixture f;
  const auto& phi = f.atlas.at({0});
  CHECK(phi.saturation() == L / 6.0);
  for (std::size_t x : phi.members()) {
    CHECK(phi(x, 0.0) == x);
    CHECK(phi(x, phi.saturation()) == phi.center());
    CHECK(phi(x, L / 2.0) == phi.center());
    const auto& path = phi.path(x);
    for (std::size_t k = 1; k < path.size(); ++k) {
      CHECK((*f.space)(path[k], phi.center()) < (*f.space)(path[k - 1], phi.center()));
      CHECK(phi.contains(path[k]));
    }
    double before = (*f.space)(x, phi.center());
    for (double s : parameter_grid()) {
      const double now = (*f.space)(phi(x, s * phi.saturation()), phi.center());
      CHECK(now <= before);
      before = now;
    }
  }
  CHECK_THROWS_AS(f.atlas.at({0, 1, 2}), PreconditionError);
}

TEST_CASE("cone retraction", "[retraction]") {
  CircleFixture f;
  const auto& phi = f.atlas.at({1});
  for (std::size_t x : phi.members()) {
    for (double t : {0.0, 0.4, 1.0, L / 2.0, L}) {
      const ConePoint p{x, t};
      CHECK(cone_retraction_phi(phi, p, 0.0, L) == p);
      CHECK(cone_retraction_phi(phi, p, 1.0, L) == cone_retraction_r(phi, p));
      CHECK(cone_retraction_r(phi, p).t == 0.0);
      if (t >= L / 2.0) CHECK(cone_retraction_phi(phi, p, 1.0, L) == ConePoint{phi.center(), 0.0});
    }
    CHECK(cone_retraction_phi(phi, {x, 0.0}, 1.0, L) == ConePoint{x, 0.0});
    for (double s : parameter_grid()) CHECK(cone_retraction_phi(phi, {x, 0.0}, s, L) == ConePoint{x, 0.0});
  }
  std::size_t outside = 0;
  while (phi.contains(outside)) ++outside;
  CHECK_THROWS_AS(cone_retraction_phi(phi, {outside, 1.0}, 0.5, L), ValidationError);

  const auto lip = measure_cone_retraction_lipschitz(*f.space, phi, L, 8, 0);
  CHECK(std::isfinite(lip.homotopy));
  CHECK(lip.contraction > 0.0);
  CHECK(lip.ratio == lip.homotopy / (L * (1.0 + L) * lip.contraction));
}

TEST_CASE("radial projection", "[retraction]") {
  const auto center = radial_projection_r({0.5, 0.5}, 3.0, L);
  CHECK(center.psi0 == SimplexCoords{0.5, 0.5});
  CHECK(center.u == 0.0);
  const auto tri_center = radial_projection_r({1.0 / 3, 1.0 / 3, 1.0 / 3}, 6.0, L);
  CHECK(tri_center.u == 0.0);

  const auto boundary = radial_projection_r({0.0, 1.0}, 4.0, L);
  CHECK(boundary.psi0 == SimplexCoords{0.0, 1.0});
  CHECK(boundary.u == 4.0);
  const auto face = radial_projection_r({0.0, 0.3, 0.7}, 2.5, L);
  CHECK(face.psi0 == SimplexCoords{0.0, 0.3, 0.7});
  CHECK(face.u == 2.5);

  CHECK(radial_projection_r({1.0}, 5.0, L).u == 0.0);

  // Ray from (0.5, 0.5; 14) through (0.25, 0.75; 7) reaches the corner
  // (0, 1; 0) at parameter 2 on both constraints.
  const auto edge = radial_projection_r({0.25, 0.75}, 7.0, L);
  CHECK(edge.psi0 == SimplexCoords{0.0, 1.0});
  CHECK(edge.u == 0.0);
  nlohmann::ordered_json golden{{"x", {0.25, 0.75}}, {"t", 7.0}, {"L", L}, {"psi0", edge.psi0}, {"u", edge.u}};
  CHECK(oracle::matches_golden("radial_edge.json", golden));

  Rng rng = make_rng(17);
  for (int i = 0; i < 600; ++i) {
    const std::size_t k1 = 2 + static_cast<std::size_t>(i % 3);
    const auto x = random_coords(rng, k1);
    const double t = uniform_real(rng, 0.0, L);
    const auto r = radial_projection_r(x, t, L);
    const auto hit = oracle::radial_by_bisection(x, t, L);
    CHECK_THAT(r.u, WithinAbs(hit.height, 1e-9));
    for (std::size_t k = 0; k < k1; ++k) CHECK_THAT(r.psi0[k], WithinAbs(hit.point[k], 1e-9));
    CHECK(r.u <= t);
  }
  CHECK_THROWS_AS(radial_projection_r({0.5, 0.5}, 8.0, L), ValidationError);
}

TEST_CASE("height blend", "[retraction]") {
  Rng rng = make_rng(23);
  int between = 0;
  for (int i = 0; i < 800; ++i) {
    const std::size_t k1 = 2 + static_cast<std::size_t>(i % 2);
    const auto x = random_coords(rng, k1);
    const double t = uniform_real(rng, 0.0, L);
    const auto r = radial_projection_r(x, t, L);
    const double w = height_blend_w(x, t, L);
    if (r.u <= L / 10.0) {
      CHECK(w == r.u);
    } else if (r.u >= L / 2.0) {
      CHECK(w == t);
    } else {
      ++between;
      CHECK(w >= std::min(r.u, t));
      CHECK(w <= std::max(r.u, t));
    }
  }
  CHECK(between > 0);

  // On an edge the distances to {u <= L/10} and {u >= L/2} agree with a grid
  // search up to the grid resolution.
  for (const auto& [x0, t] : std::vector<std::pair<double, double>>{{0.2, 4.0}, {0.35, 6.0}, {0.1, 2.0}, {0.45, 6.9}}) {
    const SimplexCoords x{x0, 1.0 - x0};
    const auto [s0, s1] = blend_distances(x, t, L);
    const int steps = 400;
    const double slack = std::hypot(std::sqrt(2.0) / steps, L / steps);
    const double g0 = grid_distance(x, t, [](double u) { return u <= L / 10.0; }, steps);
    const double g1 = grid_distance(x, t, [](double u) { return u >= L / 2.0; }, steps);
    CHECK(s0 <= g0 + 1e-9);
    CHECK(s0 >= g0 - slack);
    CHECK(s1 <= g1 + 1e-9);
    CHECK(s1 >= g1 - slack);
  }
}

TEST_CASE("simplexwise retraction", "[retraction]") {
  CircleFixture f;
  const auto& phi = f.atlas.at({0, 1});
  Rng rng = make_rng(31);
  for (int i = 0; i < 200; ++i) {
    const std::size_t y = phi.members()[uniform_index(rng, phi.members().size())];
    const SimplexCylinderPoint p{random_coords(rng, 2), {y, uniform_real(rng, 0.0, L)}};
    const auto d = simplexwise_data(p.x, p.cone.t, L);
    CHECK(simplexwise_retraction(phi, p, 0.0, d) == p);
    CHECK(simplexwise_retraction(phi, p, 1.0, d) == simplexwise_f(phi, p, d));
    CHECK(simplexwise_retraction(phi, p, 0.3, d) == simplexwise_retraction(phi, p, 0.3, L));

    const SimplexCylinderPoint floor{p.x, {y, 0.0}};
    const SimplexCylinderPoint side{{0.0, 1.0}, p.cone};
    for (double s : parameter_grid()) {
      CHECK(simplexwise_retraction(phi, floor, s, L) == floor);
      CHECK(simplexwise_retraction(phi, side, s, L) == side);
    }
  }
}

TEST_CASE("full cylinder retraction", "[retraction]") {
  CircleFixture f;
  const auto tau = tau_embed(f.pou, 5);
  const auto flat = full_cylinder_retraction(f.cover, f.nerve, f.atlas, tau, L);
  for (const auto& q : flat.path) CHECK(q == tau);
  CHECK(flat.ends_in_retract);

  // Over a vertex the composite is the cone retraction path.
  const std::size_t x = f.cover.center(2);
  const CylinderPoint v{BarycentricPoint::vertex(2), {x, 5.0}};
  const auto vt = full_cylinder_retraction(f.cover, f.nerve, f.atlas, v, L);
  const auto local = parameter_grid();
  const std::size_t stages = vt.stage_dims.size();
  for (std::size_t j = 0; j < local.size(); ++j) {
    const auto& q = vt.path[(stages - 1) * 16 + j];
    CHECK(q.cone == cone_retraction_phi(f.atlas.at({2}), v.cone, local[j], L));
    CHECK(q.theta == v.theta);
  }
  CHECK(vt.ends_in_retract);

  // Over an edge of the hollow triangle.
  const auto both = f.cover.intersect({0, 1});
  REQUIRE_FALSE(both.empty());
  const CylinderPoint e{BarycentricPoint({{0, 0.3}, {1, 0.7}}), {both[both.size() / 2], 6.0}};
  const auto et = full_cylinder_retraction(f.cover, f.nerve, f.atlas, e, L);
  CHECK(et.starts_at_input);
  CHECK(et.ends_in_retract);
  CHECK(oracle::matches_golden("edge_trace.json", io::trace_to_json(et)));

  Rng rng = make_rng(3);
  for (int i = 0; i < 300; ++i) {
    const std::size_t base = uniform_index(rng, 64);
    const auto& mem = f.cover.memberships(base);
    std::vector<std::pair<std::size_t, double>> w;
    for (std::size_t j : mem) {
      if (uniform01(rng) < 0.7 || w.empty()) w.emplace_back(j, uniform_real(rng, 0.05, 1.0));
    }
    double total = 0.0;
    for (auto& e2 : w) total += e2.second;
    for (auto& e2 : w) e2.second /= total;
    const CylinderPoint p{BarycentricPoint(w), {base, uniform01(rng) < 0.1 ? L : uniform_real(rng, 0.0, L)}};
    const auto tr = full_cylinder_retraction(f.cover, f.nerve, f.atlas, p, L);
    CHECK(tr.starts_at_input);
    CHECK(tr.ends_in_retract);
    for (const auto& q : tr.path) CHECK(in_cylinder(f.cover, q));
  }

  REQUIRE_FALSE(f.cover.contains(0, 32));
  const CylinderPoint stray{BarycentricPoint::vertex(0), {32, 1.0}};
  CHECK_THROWS_AS(full_cylinder_retraction(f.cover, f.nerve, f.atlas, stray, L), ValidationError);
}
