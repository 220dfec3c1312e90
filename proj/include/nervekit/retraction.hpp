#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <numeric>
#include <sstream>
#include <utility>
#include <vector>

#include "nervekit/cone_cylinder.hpp"
#include "nervekit/contraction.hpp"
#include "nervekit/cover.hpp"
#include "nervekit/error.hpp"
#include "nervekit/nerve.hpp"
#include "nervekit/pou.hpp"
#include "nervekit/simplicial_complex.hpp"

namespace nervekit {

inline constexpr int kDefaultGridSteps = 16;

/// s_j = j / K for j = 0..K.
inline std::vector<double> parameter_grid(int steps = kDefaultGridSteps) {
  if (steps < 1) throw ValidationError("the parameter grid needs at least one step");
  std::vector<double> s(static_cast<std::size_t>(steps) + 1);
  for (int j = 0; j <= steps; ++j) s[static_cast<std::size_t>(j)] = static_cast<double>(j) / steps;
  return s;
}

/**
 * Piecewise-linear cut-offs.
 *
 *   g(t, s) = 1 for s <= 1/3, then 1.5 (1 - s)   (so g(t, 1) = 0)
 *   mu(s)   = 0 for s <= 1/2, 1 for s >= 2/3, linear between
 *   nu(s)   = 0 for s <= 2/3, 1 for s >= 3/4, linear between
 */
struct CutoffProfile {
  static double g(double /*t*/, double s) { return s <= 1.0 / 3.0 ? 1.0 : 1.5 * (1.0 - s); }
  static double mu(double s) { return std::clamp(6.0 * s - 3.0, 0.0, 1.0); }
  static double nu(double s) { return std::clamp(12.0 * s - 8.0, 0.0, 1.0); }
};

// ---------------------------------------------------------------------------
// Homotopies H and F.

namespace detail {

// Vertexwise lerp of two barycentric points: lerp(a, b, 0) = a and
// lerp(a, b, 1) = b hold bit-for-bit, as does lerp(a, a, s) = a.
inline BarycentricPoint lerp_barycentric(const BarycentricPoint& a, const BarycentricPoint& b, double s) {
  std::vector<std::pair<std::size_t, double>> out;
  const auto& x = a.entries();
  const auto& y = b.entries();
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < x.size() || j < y.size()) {
    if (j == y.size() || (i < x.size() && x[i].first < y[j].first)) {
      out.emplace_back(x[i].first, std::lerp(x[i].second, 0.0, s));
      ++i;
    } else if (i == x.size() || y[j].first < x[i].first) {
      out.emplace_back(y[j].first, std::lerp(0.0, y[j].second, s));
      ++j;
    } else {
      out.emplace_back(x[i].first, std::lerp(x[i].second, y[j].second, s));
      ++i;
      ++j;
    }
  }
  std::erase_if(out, [](const auto& e) { return e.second == 0.0; });
  return BarycentricPoint(std::move(out));
}

}  // namespace detail

/// H(theta, x, s) = (s Theta(x) + (1 - s) theta, [x, 0]) on D(U).
inline CylinderPoint homotopy_H(const PartitionOfUnity& pou, const BarycentricPoint& theta, std::size_t x, double s) {
  CylinderPoint p{theta, ConePoint{x, 0.0}};
  if (!in_cylinder(pou.cover(), p)) {
    std::ostringstream msg;
    msg << "(theta, " << x << ") is not in D(U): the point is missing from a set of the support";
    throw ValidationError(msg.str());
  }
  return CylinderPoint{detail::lerp_barycentric(theta, pou.theta(x), s), ConePoint{x, 0.0}};
}

/// F(theta, [x, t], s) = (theta, [x, (1 - s) t + s L]).
inline CylinderPoint homotopy_F(const CylinderPoint& p, double s, double L) {
  validate_cone_height(L);
  return CylinderPoint{p.theta, ConePoint{p.cone.base, std::lerp(p.cone.t, L, s)}};
}

// ---------------------------------------------------------------------------
// Cone retraction for a single cover set.

/// r([x, t]) = [phi(x, t), 0].
inline ConePoint cone_retraction_r(const DiscreteContraction& phi, const ConePoint& p) {
  return ConePoint{phi(p.base, p.t), 0.0};
}

/// Phi([x, t], s) = [phi(x, s t), g(t, s) t].
inline ConePoint cone_retraction_phi(const DiscreteContraction& phi, const ConePoint& p, double s, double L) {
  validate_cone_height(L);
  if (!phi.contains(p.base)) {
    std::ostringstream msg;
    msg << "point " << p.base << " is outside the contraction's domain";
    throw ValidationError(msg.str());
  }
  return ConePoint{phi(p.base, s * p.t), CutoffProfile::g(p.t, s) * p.t};
}

// ---------------------------------------------------------------------------
// Radial projection of sigma x [0, L] onto sigma x 0 union boundary x [0, L].

/// Barycentric coordinates of a point of a k-simplex, in the simplex's
/// vertex order.
using SimplexCoords = std::vector<double>;

struct RadialProjection {
  SimplexCoords psi0;
  double u = 0.0;
};

/**
 * Project (x, t) from (x*, 2L), x* the barycenter, onto sigma x 0 union
 * boundary(sigma) x [0, L].
 *
 * With gauge g(x) = 1 - (k+1) min_i x_i the ray leaves sigma at parameter
 * 1/g and meets t = 0 at 2L / (2L - t); the earlier exit wins and
 * u = max(0, 2L - (2L - t) / g).
 */
inline RadialProjection radial_projection_r(const SimplexCoords& x, double t, double L) {
  validate_cone_height(L);
  if (x.empty()) throw ValidationError("radial projection needs a nonempty simplex");
  if (!(t >= 0.0 && t <= L)) throw ValidationError("radial projection height outside [0, L]");
  const std::size_t k1 = x.size();
  if (k1 == 1) return {x, 0.0};
  if (t == 0.0) return {x, 0.0};
  const double m = *std::min_element(x.begin(), x.end());
  if (m == 0.0) return {x, t};
  const double g = 1.0 - static_cast<double>(k1) * m;
  if (!(g > 0.0)) return {x, 0.0};  // x is the barycenter: the ray is vertical
  const double bary = 1.0 / static_cast<double>(k1);
  const double lambda_boundary = 1.0 / g;
  const double lambda_floor = 2.0 * L / (2.0 * L - t);
  RadialProjection out;
  out.psi0.resize(k1);
  if (lambda_boundary <= lambda_floor) {
    for (std::size_t i = 0; i < k1; ++i) {
      out.psi0[i] = x[i] == m ? 0.0 : std::max(0.0, bary + lambda_boundary * (x[i] - bary));
    }
    out.u = std::max(0.0, 2.0 * L - (2.0 * L - t) / g);
  } else {
    for (std::size_t i = 0; i < k1; ++i) out.psi0[i] = std::max(0.0, bary + lambda_floor * (x[i] - bary));
    out.u = 0.0;
  }
  return out;
}

namespace detail {

// Euclidean projection onto the probability simplex.
inline std::vector<double> project_probability_simplex(const std::vector<double>& v) {
  std::vector<double> sorted(v);
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  double cumulative = 0.0;
  double shift = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    cumulative += sorted[i];
    const double candidate = (cumulative - 1.0) / static_cast<double>(i + 1);
    if (sorted[i] - candidate > 0.0) shift = candidate;
  }
  std::vector<double> out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = std::max(0.0, v[i] - shift);
  return out;
}

// Points (x, t) with sum x = 1; the last entry is t.
using PrismPoint = std::vector<double>;

// Half-space {a . x + at * t <= b} restricted to the plane sum x = 1.
struct PlaneHalfSpace {
  std::vector<double> a;
  double at = 0.0;
  double b = 0.0;

  PrismPoint project(PrismPoint z) const {
    const std::size_t k1 = a.size();
    double value = at * z[k1] - b;
    for (std::size_t i = 0; i < k1; ++i) value += a[i] * z[i];
    if (value <= 0.0) return z;
    const double mean = std::accumulate(a.begin(), a.end(), 0.0) / static_cast<double>(k1);
    double norm2 = at * at;
    for (double ai : a) norm2 += (ai - mean) * (ai - mean);
    const double step = value / norm2;
    for (std::size_t i = 0; i < k1; ++i) z[i] -= step * (a[i] - mean);
    z[k1] -= step * at;
    return z;
  }
};

inline PrismPoint project_prism(const PrismPoint& z, double L) {
  const std::size_t k1 = z.size() - 1;
  PrismPoint out = project_probability_simplex(std::vector<double>(z.begin(), z.begin() + static_cast<std::ptrdiff_t>(k1)));
  out.push_back(std::clamp(z[k1], 0.0, L));
  return out;
}

inline double euclidean(const PrismPoint& a, const PrismPoint& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(s);
}

// Dykstra's alternating projection onto prism intersected with half-spaces.
inline double distance_to_polytope(const PrismPoint& z0, double L, const std::vector<PlaneHalfSpace>& halves,
                                   int max_sweeps = 5000, double tolerance = 1e-13) {
  const std::size_t sets = halves.size() + 1;
  std::vector<PrismPoint> increments(sets, PrismPoint(z0.size(), 0.0));
  PrismPoint z = z0;
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    const PrismPoint before = z;
    for (std::size_t s = 0; s < sets; ++s) {
      PrismPoint shifted(z.size());
      for (std::size_t i = 0; i < z.size(); ++i) shifted[i] = z[i] + increments[s][i];
      PrismPoint projected = s == 0 ? project_prism(shifted, L) : halves[s - 1].project(shifted);
      for (std::size_t i = 0; i < z.size(); ++i) increments[s][i] = shifted[i] - projected[i];
      z = std::move(projected);
    }
    if (euclidean(before, z) < tolerance) break;
  }
  return euclidean(z0, z);
}

}  // namespace detail

/// Euclidean distances (s0, s1) from (x, t) to the sets {u <= L/10} and
/// {u >= L/2} inside sigma x [0, L].
inline std::pair<double, double> blend_distances(const SimplexCoords& x, double t, double L) {
  const std::size_t k1 = x.size();
  const double kk = static_cast<double>(k1);
  detail::PrismPoint z(x);
  z.push_back(t);

  // {u <= L/10} = {t + 1.9 L (1 - (k+1) x_i) <= 2L for all i}: convex.
  std::vector<detail::PlaneHalfSpace> low;
  for (std::size_t i = 0; i < k1; ++i) {
    detail::PlaneHalfSpace h;
    h.a.assign(k1, 0.0);
    h.a[i] = -1.9 * L * kk;
    h.at = 1.0;
    h.b = 2.0 * L - 1.9 * L;
    low.push_back(std::move(h));
  }
  const double s0 = detail::distance_to_polytope(z, L, low);

  // {u >= L/2} = union over i of {1.5 L (1 - (k+1) x_i) + t >= 2L}.
  double s1 = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < k1; ++i) {
    detail::PlaneHalfSpace h;
    h.a.assign(k1, 0.0);
    h.a[i] = 1.5 * L * kk;
    h.at = -1.0;
    h.b = -0.5 * L;
    s1 = std::min(s1, detail::distance_to_polytope(z, L, {h}));
  }
  return {s0, s1};
}

/**
 * w = (s1 u + s0 t) / (s0 + s1), with the plateaus w = u for u <= L/10 and
 * w = t for u >= L/2 returned exactly.
 */
inline double height_blend_w(const SimplexCoords& x, double t, double L, const RadialProjection& r) {
  const double u = r.u;
  if (u <= L / 10.0) return u;
  if (u >= L / 2.0 || u == t) return t;
  const auto [s0, s1] = blend_distances(x, t, L);
  if (s0 + s1 <= 0.0) return u;
  return std::lerp(u, t, s0 / (s0 + s1));
}

inline double height_blend_w(const SimplexCoords& x, double t, double L) {
  return height_blend_w(x, t, L, radial_projection_r(x, t, L));
}

/// (simplex coordinates, cone point) in sigma x K(U_sigma).
struct SimplexCylinderPoint {
  SimplexCoords x;
  ConePoint cone;

  friend bool operator==(const SimplexCylinderPoint&, const SimplexCylinderPoint&) = default;
};

/// Precomputed radial data for a fixed (x, t); reuse across the s-grid.
struct SimplexwiseData {
  RadialProjection r;
  double w = 0.0;
};

inline SimplexwiseData simplexwise_data(const SimplexCoords& x, double t, double L) {
  SimplexwiseData d;
  d.r = radial_projection_r(x, t, L);
  d.w = height_blend_w(x, t, L, d.r);
  return d;
}

/// f(x, [y, t]) = (psi0(x, t), [phi(y, t - u), w]).
inline SimplexCylinderPoint simplexwise_f(const DiscreteContraction& phi, const SimplexCylinderPoint& p,
                                          const SimplexwiseData& d) {
  return {d.r.psi0, ConePoint{phi(p.cone.base, p.cone.t - d.r.u), d.w}};
}

/**
 * Phi(x, [y, t], s) = ((1-s) x + s psi0, [phi(y, mu(s)(t - u)), (1 - nu(s)) t + nu(s) w]).
 */
inline SimplexCylinderPoint simplexwise_retraction(const DiscreteContraction& phi, const SimplexCylinderPoint& p,
                                                   double s, const SimplexwiseData& d) {
  if (!phi.contains(p.cone.base)) throw ValidationError("cone base is outside U_sigma");
  SimplexCylinderPoint out;
  out.x.resize(p.x.size());
  for (std::size_t i = 0; i < p.x.size(); ++i) out.x[i] = std::lerp(p.x[i], d.r.psi0[i], s);
  const double drop = p.cone.t - d.r.u;
  const double m = CutoffProfile::mu(s);
  out.cone = ConePoint{phi(p.cone.base, m * drop), std::lerp(p.cone.t, d.w, CutoffProfile::nu(s))};
  return out;
}

inline SimplexCylinderPoint simplexwise_retraction(const DiscreteContraction& phi, const SimplexCylinderPoint& p,
                                                   double s, double L) {
  return simplexwise_retraction(phi, p, s, simplexwise_data(p.x, p.cone.t, L));
}

// ---------------------------------------------------------------------------
// Traces and the composite retraction M(p) -> D(U) x 0.

/// Images of one input point over a parameter grid.
struct DeformationTrace {
  std::vector<double> s;               // global grid, s.front() = 0, s.back() = 1
  std::vector<CylinderPoint> path;     // path[i] is the image at s[i]
  std::vector<int> stage_dims;         // skeleton dimension handled by each stage
  std::vector<bool> stage_moved;       // whether the stage touched the point
  bool starts_at_input = false;
  bool ends_in_retract = false;
};

namespace detail {

inline Simplex support_of(const CylinderPoint& p) { return p.theta.support(); }

inline SimplexCoords coords_on(const BarycentricPoint& theta, const Simplex& sigma) {
  SimplexCoords x(sigma.size());
  for (std::size_t i = 0; i < sigma.size(); ++i) x[i] = theta.weight(sigma[i]);
  return x;
}

inline BarycentricPoint from_coords(const Simplex& sigma, const SimplexCoords& x) {
  std::vector<std::pair<std::size_t, double>> w;
  for (std::size_t i = 0; i < sigma.size(); ++i) {
    if (x[i] != 0.0) w.emplace_back(sigma[i], x[i]);
  }
  return BarycentricPoint(std::move(w));
}

}  // namespace detail

/// True iff p is in D(U) x 0: height 0 and base in U_{supp theta}.
inline bool in_retract_D(const Cover& cover, const CylinderPoint& p) {
  return p.cone.t == 0.0 && in_cylinder(cover, p);
}

/**
 * Trace of the composite strong deformation retraction of M(p) onto D(U) x 0.
 *
 * Skeleta are processed from the top dimension down. At stage k a point
 * whose support is a k-simplex sigma and whose height is positive follows
 * the simplexwise homotopy on sigma x K(U_sigma) (the cone retraction when
 * k = 0); every other point stays put. Each stage contributes `steps` grid
 * intervals to the global parameter.
 */
inline DeformationTrace full_cylinder_retraction(const Cover& cover, const SimplicialComplex& nerve,
                                                 const ContractionAtlas& atlas, const CylinderPoint& start,
                                                 double L, int steps = kDefaultGridSteps) {
  validate_cone_height(L);
  if (!in_cylinder(cover, start)) throw ValidationError("trace start is not a point of the mapping cylinder");
  const auto local = parameter_grid(steps);
  const int top = std::max(nerve.dimension(), 0);
  const int stages = top + 1;
  DeformationTrace trace;
  trace.path.push_back(start);
  trace.s.push_back(0.0);
  CylinderPoint current = start;
  for (int k = top; k >= 0; --k) {
    const int stage_index = top - k;
    const Simplex sigma = detail::support_of(current);
    const bool moves = static_cast<int>(sigma.size()) - 1 == k && current.cone.t > 0.0;
    trace.stage_dims.push_back(k);
    trace.stage_moved.push_back(moves);
    const CylinderPoint stage_start = current;
    const DiscreteContraction* phi = moves ? &atlas.at(sigma) : nullptr;
    SimplexwiseData data;
    SimplexCylinderPoint local_start;
    if (moves && k >= 1) {
      local_start = {detail::coords_on(stage_start.theta, sigma), stage_start.cone};
      data = simplexwise_data(local_start.x, local_start.cone.t, L);
    }
    for (int j = 1; j <= steps; ++j) {
      const double s = local[static_cast<std::size_t>(j)];
      CylinderPoint next = stage_start;
      if (moves && k == 0) {
        next.cone = cone_retraction_phi(*phi, stage_start.cone, s, L);
      } else if (moves) {
        const auto q = simplexwise_retraction(*phi, local_start, s, data);
        next = CylinderPoint{detail::from_coords(sigma, q.x), q.cone};
      }
      trace.path.push_back(next);
      trace.s.push_back(static_cast<double>(stage_index * steps + j) / (stages * steps));
      current = std::move(next);
    }
  }
  trace.starts_at_input = trace.path.front() == start;
  trace.ends_in_retract = in_retract_D(cover, trace.path.back());
  return trace;
}

/// Trace of H(theta, x, .) over the grid; the retract is tau(M).
inline DeformationTrace trace_H(const PartitionOfUnity& pou, const BarycentricPoint& theta, std::size_t x,
                                int steps = kDefaultGridSteps) {
  DeformationTrace trace;
  trace.s = parameter_grid(steps);
  trace.stage_dims = {-1};
  trace.stage_moved = {true};
  for (double s : trace.s) trace.path.push_back(homotopy_H(pou, theta, x, s));
  trace.starts_at_input = trace.path.front().theta == theta && trace.path.front().cone.base == x;
  trace.ends_in_retract = trace.path.back() == tau_embed(pou, x);
  return trace;
}

/// Trace of F(p, .) over the grid; the retract is the apex slice Psi(|N|).
inline DeformationTrace trace_F(const CylinderPoint& p, double L, int steps = kDefaultGridSteps) {
  DeformationTrace trace;
  trace.s = parameter_grid(steps);
  trace.stage_dims = {-1};
  trace.stage_moved = {true};
  for (double s : trace.s) trace.path.push_back(homotopy_F(p, s, L));
  trace.starts_at_input = trace.path.front() == p;
  trace.ends_in_retract = trace.path.back().cone.t == L && trace.path.back().theta == p.theta;
  return trace;
}

// ---------------------------------------------------------------------------
// Measured Lipschitz constants.

struct ConeRetractionLipschitz {
  double homotopy = 0.0;     // Lip of Phi on K(U) x [0, 1] over the sample grid
  double contraction = 0.0;  // Lip of phi on U x [0, L] over the sample grid
  double ratio = 0.0;        // homotopy / (L (1 + L) contraction): the measured constant c
  std::size_t pairs_checked = 0;
};

/**
 * Empirical Lipschitz constants of the cone retraction for one cover set,
 * on the sample x {j L / K} x {i / K}. The ratio against L (1 + L) Lip(phi)
 * is reported, not bounded.
 */
inline ConeRetractionLipschitz measure_cone_retraction_lipschitz(const FiniteMetricSpace& space,
                                                                 const DiscreteContraction& phi, double L,
                                                                 int steps = kDefaultGridSteps,
                                                                 std::uint64_t seed = 0) {
  validate_cone_height(L);
  const auto grid = parameter_grid(steps);
  const auto& members = phi.members();
  const std::size_t g = grid.size();
  ConeRetractionLipschitz out;

  // phi on U x [0, L] with the product metric.
  const std::size_t n2 = members.size() * g;
  if (n2 >= 2) {
    auto src = [&](std::size_t a, std::size_t b) {
      return std::hypot(space(members[a / g], members[b / g]), L * (grid[a % g] - grid[b % g]));
    };
    auto img = [&](std::size_t a, std::size_t b) {
      return space(phi(members[a / g], L * grid[a % g]), phi(members[b / g], L * grid[b % g]));
    };
    LipschitzOptions opt;
    opt.seed = seed;
    out.contraction = estimate_lipschitz(n2, src, img, opt).value;
  }

  // Phi on K(U) x [0, 1].
  const std::size_t n3 = members.size() * g * g;
  if (n3 >= 2) {
    auto decode = [&](std::size_t a) {
      const std::size_t s_idx = a % g;
      const std::size_t t_idx = (a / g) % g;
      return std::make_pair(ConePoint{members[a / (g * g)], L * grid[t_idx]}, grid[s_idx]);
    };
    auto src = [&](std::size_t a, std::size_t b) {
      const auto [p, s] = decode(a);
      const auto [q, r] = decode(b);
      return std::hypot(cone_distance(space, p, q, L), s - r);
    };
    auto img = [&](std::size_t a, std::size_t b) {
      const auto [p, s] = decode(a);
      const auto [q, r] = decode(b);
      return cone_distance(space, cone_retraction_phi(phi, p, s, L), cone_retraction_phi(phi, q, r, L), L);
    };
    LipschitzOptions opt;
    opt.seed = seed;
    const auto est = estimate_lipschitz(n3, src, img, opt);
    out.homotopy = est.value;
    out.pairs_checked = est.pairs_checked;
  }
  if (out.contraction > 0.0) out.ratio = out.homotopy / (L * (1.0 + L) * out.contraction);
  return out;
}

}  // namespace nervekit
