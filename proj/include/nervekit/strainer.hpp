#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <sstream>
#include <utility>
#include <vector>

#include "nervekit/error.hpp"
#include "nervekit/metric_space.hpp"

namespace nervekit {

/**
 * Angle at p of the Euclidean comparison triangle for (x, p, y).
 *
 * Uses the flat model: arccos((|px|^2 + |py|^2 - |xy|^2) / (2|px||py|)),
 * with the cosine clamped to [-1, 1].
 */
inline double comparison_angle(const FiniteMetricSpace& space, std::size_t x, std::size_t p,
                               std::size_t y) {
  const double px = space(p, x);
  const double py = space(p, y);
  if (px <= 0.0 || py <= 0.0) {
    std::ostringstream msg;
    msg << "comparison angle at " << p << " is undefined: vertex coincides with an endpoint";
    throw ValidationError(msg.str());
  }
  const double xy = space(x, y);
  const double c = (px * px + py * py - xy * xy) / (2.0 * px * py);
  return std::acos(std::clamp(c, -1.0, 1.0));
}

using StrainerPair = std::pair<std::size_t, std::size_t>;

struct StrainerCheck {
  bool strained = false;
  /// Smallest (angle - threshold) over every inequality; positive iff strained.
  double worst_margin = std::numeric_limits<double>::infinity();
  /// min over pairs of |p a_i| and |p b_i|.
  double length = std::numeric_limits<double>::infinity();
};

/// Check the (m, delta)-strainer inequalities at p for the given pairs.
inline StrainerCheck check_strainer(const FiniteMetricSpace& space, std::size_t p,
                                    const std::vector<StrainerPair>& pairs, double delta) {
  for (const auto& [a, b] : pairs) {
    if (a == p || b == p) throw ValidationError("strainer points must differ from the strained point");
  }
  StrainerCheck out;
  auto update = [&](double angle, double threshold) {
    out.worst_margin = std::min(out.worst_margin, angle - threshold);
  };
  const double pi = std::numbers::pi;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const auto [ai, bi] = pairs[i];
    out.length = std::min({out.length, space(p, ai), space(p, bi)});
    update(comparison_angle(space, ai, p, bi), pi - delta);
    for (std::size_t j = 0; j < pairs.size(); ++j) {
      if (i == j) continue;
      const auto [aj, bj] = pairs[j];
      update(comparison_angle(space, ai, p, bj), pi / 2 - delta);
      if (i < j) {
        update(comparison_angle(space, ai, p, aj), pi / 2 - delta);
        update(comparison_angle(space, bi, p, bj), pi / 2 - delta);
      }
    }
  }
  out.strained = !pairs.empty() && out.worst_margin > 0.0;
  return out;
}

}  // namespace nervekit
