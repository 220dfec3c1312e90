#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <sstream>

#include "nervekit/cover.hpp"
#include "nervekit/error.hpp"
#include "nervekit/nerve.hpp"
#include "nervekit/pou.hpp"

namespace nervekit {

inline constexpr double kDefaultConeHeight = 7.0;

/// The cone height must exceed 6 for the cylinder estimates to hold.
inline void validate_cone_height(double L) {
  if (!(L > 6.0) || !std::isfinite(L)) {
    std::ostringstream msg;
    msg << "cone height L = " << L << " is invalid: the construction requires L > 6";
    throw ValidationError(msg.str());
  }
}

/// [x, t] in the Euclidean cone K(M) = M x [0, L] / M x {L}.
struct ConePoint {
  std::size_t base = 0;
  double t = 0.0;

  friend bool operator==(const ConePoint&, const ConePoint&) = default;
};

inline void validate_cone_point(const ConePoint& p, double L, std::size_t space_size) {
  if (p.base >= space_size) throw ValidationError("cone point base is out of range");
  if (!(p.t >= 0.0 && p.t <= L)) {
    std::ostringstream msg;
    msg << "cone height t = " << p.t << " outside [0, " << L << "]";
    throw ValidationError(msg.str());
  }
}

/**
 * Law-of-cosines cone metric with angle min(pi, |x x'|) and radii L - t.
 *
 * Evaluated as (a - b)^2 + 4ab sin^2(angle / 2), which is the same quantity
 * without cancellation when a and b are close; points with t = L are all the
 * apex and sit at distance 0 from each other.
 */
inline double cone_distance(const FiniteMetricSpace& space, const ConePoint& p, const ConePoint& q, double L) {
  validate_cone_height(L);
  validate_cone_point(p, L, space.size());
  validate_cone_point(q, L, space.size());
  const double a = L - p.t;
  const double b = L - q.t;
  const double angle = std::min(std::numbers::pi, space(p.base, q.base));
  const double h = std::sin(angle / 2.0);
  const double sq = (a - b) * (a - b) + 4.0 * a * b * h * h;
  return std::sqrt(std::max(0.0, sq));
}

/// (theta, [x, t]) in the mapping cylinder M(p) = union of sigma x K(U_sigma).
struct CylinderPoint {
  BarycentricPoint theta;
  ConePoint cone;

  friend bool operator==(const CylinderPoint&, const CylinderPoint&) = default;
};

/// True iff the base point lies in U_{supp theta}.
inline bool in_cylinder(const Cover& cover, const CylinderPoint& p) {
  for (const auto& [j, w] : p.theta.entries()) {
    if (j >= cover.size() || !cover.contains(j, p.cone.base)) return false;
  }
  return true;
}

/// Validating constructor for cylinder points.
inline CylinderPoint make_cylinder_point(const Cover& cover, BarycentricPoint theta, ConePoint cone, double L) {
  validate_cone_point(cone, L, cover.space().size());
  CylinderPoint p{std::move(theta), cone};
  if (!in_cylinder(cover, p)) {
    std::ostringstream msg;
    msg << "cylinder point violates membership: base " << cone.base << " is not in every set of the support";
    throw ValidationError(msg.str());
  }
  return p;
}

/// Product metric sqrt(|theta theta'|^2 + |[x,t] [x',t']|^2).
inline double cylinder_distance(const FiniteMetricSpace& space, const CylinderPoint& p, const CylinderPoint& q,
                                double L) {
  return std::hypot(realization_distance(p.theta, q.theta), cone_distance(space, p.cone, q.cone, L));
}

/// tau(x) = (Theta(x), [x, 0]).
inline CylinderPoint tau_embed(const PartitionOfUnity& pou, std::size_t x) {
  return CylinderPoint{pou.theta(x), ConePoint{x, 0.0}};
}

/// Psi(theta) = (theta, apex): the base is recorded as the lowest-index member
/// of U_{supp theta}, which does not affect any distance.
inline CylinderPoint psi_embed(const Cover& cover, const BarycentricPoint& theta, double L) {
  const auto members = cover.intersect(theta.support());
  if (members.empty()) throw ValidationError("barycentric point is not supported on a nerve simplex");
  return CylinderPoint{theta, ConePoint{members.front(), L}};
}

/// Psi'(theta, [x, t]) = theta.
inline const BarycentricPoint& psi_project(const CylinderPoint& p) { return p.theta; }

}  // namespace nervekit
