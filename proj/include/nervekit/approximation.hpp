#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <sstream>
#include <utility>
#include <vector>

#include "nervekit/error.hpp"
#include "nervekit/metric_space.hpp"
#include "nervekit/random.hpp"

namespace nervekit {

/// A point map together with the epsilon it was certified against.
struct ApproximationCertificate {
  PointMap map;
  double epsilon = 0.0;
};

/// Measured quality of a point map as an approximation.
struct ApproximationQuality {
  double distortion = 0.0;                            // sup | |f x f y| - |x y| |
  std::pair<std::size_t, std::size_t> worst_pair{0, 0};
  double surjectivity_defect = 0.0;                   // sup_y min_x |f x, y|
  std::size_t worst_target = 0;

  /// The smallest closed epsilon this map achieves.
  double epsilon() const { return std::max(distortion, surjectivity_defect); }
};

struct ApproximationCheck {
  ApproximationQuality quality;
  std::optional<ApproximationCertificate> certificate;  // set iff both strict bounds hold

  bool ok() const { return certificate.has_value(); }
};

namespace detail {

inline ApproximationQuality measure(const FiniteMetricSpace& x, const FiniteMetricSpace& y,
                                    const std::vector<std::size_t>& image) {
  ApproximationQuality q;
  for (std::size_t a = 0; a < x.size(); ++a) {
    for (std::size_t b = a + 1; b < x.size(); ++b) {
      const double d = std::abs(y(image[a], image[b]) - x(a, b));
      if (d > q.distortion) {
        q.distortion = d;
        q.worst_pair = {a, b};
      }
    }
  }
  for (std::size_t t = 0; t < y.size(); ++t) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t a = 0; a < x.size(); ++a) best = std::min(best, y(image[a], t));
    if (best > q.surjectivity_defect) {
      q.surjectivity_defect = best;
      q.worst_target = t;
    }
  }
  return q;
}

}  // namespace detail

inline ApproximationQuality measure_approximation(const PointMap& map) {
  map.validate();
  return detail::measure(*map.source, *map.target, map.image);
}

/// Certify `map` as an epsilon-approximation: distortion < epsilon and every
/// target point lies within < epsilon of the image.
inline ApproximationCheck check_approximation(const PointMap& map, double epsilon) {
  ApproximationCheck out;
  out.quality = measure_approximation(map);
  if (out.quality.distortion < epsilon && out.quality.surjectivity_defect < epsilon) {
    out.certificate = ApproximationCertificate{map, epsilon};
  }
  return out;
}

/// Largest size accepted by gh_distance_exhaustive on either side.
inline constexpr std::size_t kExhaustiveGhLimit = 6;

namespace detail {

// Best closed epsilon over all maps x -> y. Depth-first enumeration with
// pruning on the partial distortion.
inline double best_directional_epsilon(const FiniteMetricSpace& x, const FiniteMetricSpace& y) {
  const std::size_t n = x.size();
  const std::size_t m = y.size();
  if (n == 0 || m == 0) return n == m ? 0.0 : std::numeric_limits<double>::infinity();
  std::vector<std::size_t> image(n, 0);
  double best = std::numeric_limits<double>::infinity();
  std::vector<double> prefix_distortion(n + 1, 0.0);

  auto recurse = [&](auto&& self, std::size_t depth) -> void {
    if (depth == n) {
      double defect = 0.0;
      for (std::size_t t = 0; t < m; ++t) {
        double near = std::numeric_limits<double>::infinity();
        for (std::size_t a = 0; a < n; ++a) near = std::min(near, y(image[a], t));
        defect = std::max(defect, near);
      }
      best = std::min(best, std::max(prefix_distortion[n], defect));
      return;
    }
    for (std::size_t target = 0; target < m; ++target) {
      image[depth] = target;
      double dist = prefix_distortion[depth];
      for (std::size_t a = 0; a < depth; ++a) {
        dist = std::max(dist, std::abs(y(image[a], target) - x(a, depth)));
      }
      if (dist >= best) continue;
      prefix_distortion[depth + 1] = dist;
      self(self, depth + 1);
    }
  };
  recurse(recurse, 0);
  return best;
}

}  // namespace detail

/**
 * Gromov-Hausdorff distance by exhausting all maps in both directions.
 *
 * Returns max over the two directions of the smallest achievable
 * max(distortion, surjectivity defect). The strict inequalities of the
 * epsilon-approximation definition make the infimum unattained; the boundary
 * value is returned.
 */
inline double gh_distance_exhaustive(const FiniteMetricSpace& x, const FiniteMetricSpace& y) {
  if (x.size() > kExhaustiveGhLimit || y.size() > kExhaustiveGhLimit) {
    std::ostringstream msg;
    msg << "gh_distance_exhaustive supports at most " << kExhaustiveGhLimit
        << " points per space (got " << x.size() << " and " << y.size()
        << "); use gh_distance_bound for larger spaces";
    throw ValidationError(msg.str());
  }
  return std::max(detail::best_directional_epsilon(x, y), detail::best_directional_epsilon(y, x));
}

struct GhBound {
  double lower = 0.0;
  double upper = 0.0;
  std::vector<std::size_t> forward;   // best map found X -> Y
  std::vector<std::size_t> backward;  // best map found Y -> X
  double forward_epsilon = 0.0;
  double backward_epsilon = 0.0;
};

namespace detail {

// Greedy extension of a partial assignment: points are visited in
// farthest-first order from the anchor and each is sent to the target that
// keeps the running distortion smallest (ties to the lowest index).
inline std::vector<std::size_t> greedy_map(const FiniteMetricSpace& x, const FiniteMetricSpace& y,
                                           std::size_t anchor, std::size_t anchor_image) {
  const std::size_t n = x.size();
  const std::size_t m = y.size();
  std::vector<std::size_t> image(n, 0);
  std::vector<char> placed(n, 0);
  std::vector<std::size_t> order{anchor};
  image[anchor] = anchor_image;
  placed[anchor] = 1;
  std::vector<double> to_placed(n, std::numeric_limits<double>::infinity());
  for (std::size_t a = 0; a < n; ++a) to_placed[a] = x(a, anchor);

  for (std::size_t step = 1; step < n; ++step) {
    std::size_t next = n;
    for (std::size_t a = 0; a < n; ++a) {
      if (placed[a]) continue;
      if (next == n || to_placed[a] > to_placed[next]) next = a;
    }
    std::size_t best_target = 0;
    double best_cost = std::numeric_limits<double>::infinity();
    for (std::size_t t = 0; t < m; ++t) {
      double cost = 0.0;
      for (std::size_t a : order) cost = std::max(cost, std::abs(y(image[a], t) - x(a, next)));
      if (cost < best_cost) {
        best_cost = cost;
        best_target = t;
      }
    }
    image[next] = best_target;
    placed[next] = 1;
    order.push_back(next);
    for (std::size_t a = 0; a < n; ++a) to_placed[a] = std::min(to_placed[a], x(a, next));
  }
  return image;
}

inline std::pair<std::vector<std::size_t>, double> best_heuristic_map(
    const FiniteMetricSpace& x, const FiniteMetricSpace& y, int trials, Rng& rng) {
  const std::size_t n = x.size();
  const std::size_t m = y.size();
  std::vector<std::size_t> best_map(n, 0);
  double best = std::numeric_limits<double>::infinity();
  auto consider = [&](std::vector<std::size_t> candidate) {
    const double eps = measure(x, y, candidate).epsilon();
    if (eps < best) {
      best = eps;
      best_map = std::move(candidate);
    }
  };
  if (n == 0 || m == 0) return {best_map, n == m ? 0.0 : best};

  if (n == m) {
    std::vector<std::size_t> identity(n);
    for (std::size_t i = 0; i < n; ++i) identity[i] = i;
    consider(std::move(identity));
  }
  // Anchor point 0 at every target: recovers relabeling isometries.
  for (std::size_t t = 0; t < m; ++t) consider(greedy_map(x, y, 0, t));
  for (int trial = 0; trial < trials; ++trial) {
    if (trial % 2 == 0) {
      consider(greedy_map(x, y, uniform_index(rng, n), uniform_index(rng, m)));
    } else {
      std::vector<std::size_t> random_map(n);
      for (auto& v : random_map) v = uniform_index(rng, m);
      consider(std::move(random_map));
    }
  }
  return {best_map, best};
}

}  // namespace detail

/**
 * Bracket the Gromov-Hausdorff distance of spaces too large to exhaust.
 *
 * upper is the best epsilon achieved by seeded greedy and random maps in both
 * directions. lower is |diam X - diam Y|, since a map with distortion below
 * epsilon changes the diameter by less than epsilon.
 */
inline GhBound gh_distance_bound(const FiniteMetricSpace& x, const FiniteMetricSpace& y,
                                 int trials, std::uint64_t seed) {
  if (trials < 1) throw ValidationError("gh_distance_bound needs at least one trial");
  Rng rng = make_rng(seed);
  GhBound out;
  out.lower = std::abs(x.diameter() - y.diameter());
  auto [fwd, fwd_eps] = detail::best_heuristic_map(x, y, trials, rng);
  auto [bwd, bwd_eps] = detail::best_heuristic_map(y, x, trials, rng);
  out.forward = std::move(fwd);
  out.backward = std::move(bwd);
  out.forward_epsilon = fwd_eps;
  out.backward_epsilon = bwd_eps;
  out.upper = std::max(fwd_eps, bwd_eps);
  return out;
}

}  // namespace nervekit
