#pragma once

#include <algorithm>
#include <cstddef>
#include <optional>
#include <sstream>
#include <utility>
#include <vector>

#include "nervekit/approximation.hpp"
#include "nervekit/cone_cylinder.hpp"
#include "nervekit/contraction.hpp"
#include "nervekit/cover.hpp"
#include "nervekit/error.hpp"
#include "nervekit/nerve.hpp"
#include "nervekit/pou.hpp"
#include "nervekit/retraction.hpp"

namespace nervekit {

/// A cover on M' transported from a cover on M along an approximation.
struct LiftedCover {
  Cover source;
  Cover target;
  std::vector<std::size_t> vertex_map;  // alpha: source set j -> target set vertex_map[j]
  ApproximationCertificate approximation;
  int max_dim = kDefaultNerveMaxDim;
};

struct LiftOptions {
  /// Target radius = source radius + pad_factor * epsilon.
  double pad_factor = 2.0;
  int max_dim = kDefaultNerveMaxDim;
};

namespace detail {

// Radius of an open ball around the center of set j holding every member.
// Hinted sets use the hint; otherwise the radius sits halfway between the
// farthest member and the next larger distance from the center.
inline double open_radius(const Cover& cover, std::size_t j) {
  if (cover.radius_hint()[j]) return *cover.radius_hint()[j];
  const double r = cover.radius(j);
  double next = r + 1.0;
  bool found = false;
  for (std::size_t x = 0; x < cover.space().size(); ++x) {
    const double d = cover.space()(cover.center(j), x);
    if (d > r && (!found || d < next)) {
      next = d;
      found = true;
    }
  }
  return (r + next) / 2.0;
}

}  // namespace detail

/**
 * Lift a cover of M to M' along an epsilon-approximation phi : M -> M'.
 *
 * Target set j is the open ball around phi(p_j) of radius r_j + 2 epsilon.
 * Requires epsilon < mesh / 4. Throws ConstructionError naming the first
 * simplex on which the two nerves disagree under j -> j.
 */
inline LiftedCover lift_cover(const Cover& cover, const ApproximationCertificate& approx,
                              const LiftOptions& opt = {}) {
  approx.map.validate();
  if (approx.map.source.get() != cover.space_ptr().get() && approx.map.source->flat() != cover.space().flat()) {
    throw ValidationError("the approximation's source is not the cover's space");
  }
  const double mesh = cover.mesh();
  if (!(approx.epsilon < mesh / 4.0)) {
    std::ostringstream msg;
    msg << "approximation epsilon " << approx.epsilon << " is not below mesh/4 = " << mesh / 4.0
        << "; the spaces are too far apart for this cover";
    throw PreconditionError(msg.str());
  }
  std::vector<std::size_t> centers;
  std::vector<double> radii;
  for (std::size_t j = 0; j < cover.size(); ++j) {
    centers.push_back(approx.map(cover.center(j)));
    radii.push_back(detail::open_radius(cover, j) + opt.pad_factor * approx.epsilon);
  }
  Cover target = cover_from_balls(approx.map.target, centers, radii);
  std::vector<std::size_t> alpha(cover.size());
  for (std::size_t j = 0; j < alpha.size(); ++j) alpha[j] = j;
  const auto source_nerve = nerve_of(cover, opt.max_dim);
  const auto target_nerve = nerve_of(target, opt.max_dim);
  if (auto bad = isomorphism_defect(source_nerve, target_nerve, alpha)) {
    std::ostringstream msg;
    msg << "lifted nerve is not isomorphic: simplex {";
    for (std::size_t i = 0; i < bad->size(); ++i) msg << (i ? "," : "") << (*bad)[i];
    msg << "} has no counterpart";
    throw ConstructionError(msg.str());
  }
  return LiftedCover{cover, std::move(target), std::move(alpha), approx, opt.max_dim};
}

/// How a barycentric point is turned back into a sample point.
enum class ZetaRule {
  /// The center of the intersection indexed by the support.
  FaceCenter,
  /// Base point of the composite retraction applied to (theta, apex).
  Retraction,
};

struct StabilityReport {
  double mesh = 0.0;
  double epsilon = 0.0;
  double psi_h_displacement = 0.0;    // sup_y |psi(y), h(y)| in M
  double phi_g_displacement = 0.0;    // sup_x |phi(x), g(x)| in M'
  double target_roundtrip = 0.0;      // sup_y |y, g(h(y))| in M'
  double source_roundtrip = 0.0;      // sup_x |x, h(g(x))| in M
  bool h_membership = true;           // h(y) lies in a set of the transported support, for every y
  bool g_membership = true;
  bool within_10_mesh() const { return psi_h_displacement <= 10.0 * mesh && phi_g_displacement <= 10.0 * mesh; }
  bool within_100_mesh() const { return target_roundtrip <= 100.0 * mesh; }
};

struct NerveEquivalence {
  PointMap h;    // M' -> M
  PointMap g;    // M -> M'
  PointMap psi;  // M' -> M, nearest-preimage inverse of the approximation
  StabilityReport report;
};

namespace detail {

class Zeta {
 public:
  Zeta(const Cover& cover, int max_dim, ZetaRule rule, double L) : cover_(&cover), rule_(rule), L_(L) {
    for (auto& rec : intersections(cover, static_cast<std::size_t>(max_dim) + 1)) {
      centers_.emplace_back(rec.index_set, rec.center);
    }
    std::sort(centers_.begin(), centers_.end());
    if (rule_ == ZetaRule::Retraction) {
      nerve_ = nerve_of(cover, max_dim);
      atlas_ = ContractionAtlas(cover, L, static_cast<std::size_t>(max_dim) + 1);
    }
  }

  std::size_t operator()(const BarycentricPoint& theta) const {
    const Simplex support = theta.support();
    if (rule_ == ZetaRule::Retraction) {
      const auto start = psi_embed(*cover_, theta, L_);
      return full_cylinder_retraction(*cover_, nerve_, atlas_, start, L_).path.back().cone.base;
    }
    auto it = std::lower_bound(centers_.begin(), centers_.end(), std::make_pair(support, std::size_t{0}));
    if (it == centers_.end() || it->first != support) {
      throw ConstructionError("barycentric point is not supported on a simplex of the nerve");
    }
    return it->second;
  }

 private:
  const Cover* cover_;
  ZetaRule rule_;
  double L_;
  std::vector<std::pair<Simplex, std::size_t>> centers_;
  SimplicialComplex nerve_;
  ContractionAtlas atlas_;
};

inline BarycentricPoint transport(const BarycentricPoint& theta, const std::vector<std::size_t>& vertex_map) {
  std::vector<std::pair<std::size_t, double>> w;
  for (const auto& [v, x] : theta.entries()) w.emplace_back(vertex_map[v], x);
  return BarycentricPoint(std::move(w));
}

inline bool in_some_set(const Cover& cover, const Simplex& support, std::size_t x) {
  return std::any_of(support.begin(), support.end(), [&](std::size_t j) { return cover.contains(j, x); });
}

}  // namespace detail

/**
 * Homotopy equivalence through the isomorphic nerves of a lifted cover:
 * h = zeta o alpha^{-1} o Theta' : M' -> M and g = zeta' o alpha o Theta : M -> M'.
 *
 * Displacements are measured against psi(y) = argmin_x |phi(x), y| and phi,
 * with mu taken as the source cover's mesh.
 */
inline NerveEquivalence homotopy_equivalence_via_nerves(const LiftedCover& lift, ZetaRule rule = ZetaRule::FaceCenter,
                                                        double L = kDefaultConeHeight) {
  const auto& M = lift.source.space_ptr();
  const auto& Mp = lift.target.space_ptr();
  const auto& phi = lift.approximation.map;
  std::vector<std::size_t> inverse(lift.vertex_map.size());
  for (std::size_t j = 0; j < inverse.size(); ++j) inverse[lift.vertex_map[j]] = j;

  const PartitionOfUnity pou_source(lift.source);
  const PartitionOfUnity pou_target(lift.target);
  const detail::Zeta zeta_source(lift.source, lift.max_dim, rule, L);
  const detail::Zeta zeta_target(lift.target, lift.max_dim, rule, L);

  NerveEquivalence out;
  StabilityReport& rep = out.report;
  rep.mesh = lift.source.mesh();
  rep.epsilon = lift.approximation.epsilon;

  std::vector<std::size_t> h(Mp->size());
  for (std::size_t y = 0; y < Mp->size(); ++y) {
    const auto moved = detail::transport(pou_target.theta(y), inverse);
    h[y] = zeta_source(moved);
    rep.h_membership = rep.h_membership && detail::in_some_set(lift.source, moved.support(), h[y]);
  }
  std::vector<std::size_t> g(M->size());
  for (std::size_t x = 0; x < M->size(); ++x) {
    const auto moved = detail::transport(pou_source.theta(x), lift.vertex_map);
    g[x] = zeta_target(moved);
    rep.g_membership = rep.g_membership && detail::in_some_set(lift.target, moved.support(), g[x]);
  }
  std::vector<std::size_t> psi(Mp->size());
  for (std::size_t y = 0; y < Mp->size(); ++y) {
    std::size_t best = 0;
    for (std::size_t x = 1; x < M->size(); ++x) {
      if ((*Mp)(phi(x), y) < (*Mp)(phi(best), y)) best = x;
    }
    psi[y] = best;
  }
  for (std::size_t y = 0; y < Mp->size(); ++y) {
    rep.psi_h_displacement = std::max(rep.psi_h_displacement, (*M)(psi[y], h[y]));
    rep.target_roundtrip = std::max(rep.target_roundtrip, (*Mp)(y, g[h[y]]));
  }
  for (std::size_t x = 0; x < M->size(); ++x) {
    rep.phi_g_displacement = std::max(rep.phi_g_displacement, (*Mp)(phi(x), g[x]));
    rep.source_roundtrip = std::max(rep.source_roundtrip, (*M)(x, h[g[x]]));
  }
  out.h = PointMap(Mp, M, std::move(h));
  out.g = PointMap(M, Mp, std::move(g));
  out.psi = PointMap(Mp, M, std::move(psi));
  return out;
}

}  // namespace nervekit
