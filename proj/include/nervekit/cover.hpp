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
#include "nervekit/homology.hpp"
#include "nervekit/metric_space.hpp"
#include "nervekit/random.hpp"
#include "nervekit/simplicial_complex.hpp"

namespace nervekit {

/**
 * An indexed family of point subsets covering a finite metric space, each
 * with a designated center.
 *
 * Sets are stored sorted. Membership in a sample is strict: a ball
 * B(p, r) is {x : d(p, x) < r}.
 */
class Cover {
 public:
  Cover() = default;

  /// Validates: every set nonempty and in range, each center a member of
  /// its set, every point covered, and (if given) point multiplicity at most
  /// `multiplicity_bound`.
  Cover(SpacePtr space, std::vector<std::vector<std::size_t>> sets, std::vector<std::size_t> centers,
        std::vector<std::optional<double>> radius_hint = {},
        std::optional<std::size_t> multiplicity_bound = std::nullopt)
      : space_(std::move(space)),
        sets_(std::move(sets)),
        centers_(std::move(centers)),
        radius_hint_(std::move(radius_hint)),
        multiplicity_bound_(multiplicity_bound) {
    if (!space_) throw ValidationError("cover needs a space");
    if (radius_hint_.empty()) radius_hint_.assign(sets_.size(), std::nullopt);
    if (centers_.size() != sets_.size()) throw ValidationError("cover needs one center per set");
    if (radius_hint_.size() != sets_.size()) throw ValidationError("radius_hint length must match the number of sets");
    const std::size_t n = space_->size();
    member_.assign(sets_.size(), std::vector<char>(n, 0));
    memberships_.assign(n, {});
    for (std::size_t j = 0; j < sets_.size(); ++j) {
      auto& set = sets_[j];
      std::sort(set.begin(), set.end());
      set.erase(std::unique(set.begin(), set.end()), set.end());
      if (set.empty()) {
        std::ostringstream msg;
        msg << "cover set " << j << " is empty";
        throw ValidationError(msg.str());
      }
      for (std::size_t x : set) {
        if (x >= n) {
          std::ostringstream msg;
          msg << "cover set " << j << " contains invalid point " << x;
          throw ValidationError(msg.str());
        }
        member_[j][x] = 1;
        memberships_[x].push_back(j);
      }
      if (centers_[j] >= n || !member_[j][centers_[j]]) {
        std::ostringstream msg;
        msg << "center " << centers_[j] << " of cover set " << j << " is not a member of the set";
        throw ValidationError(msg.str());
      }
    }
    for (std::size_t x = 0; x < n; ++x) {
      if (memberships_[x].empty()) {
        std::ostringstream msg;
        msg << "cover violation: point " << x << " lies in no set";
        throw ValidationError(msg.str());
      }
      if (multiplicity_bound_ && memberships_[x].size() > *multiplicity_bound_) {
        std::ostringstream msg;
        msg << "point " << x << " lies in " << memberships_[x].size()
            << " sets, above the multiplicity bound " << *multiplicity_bound_;
        throw ValidationError(msg.str());
      }
    }
  }

  const SpacePtr& space_ptr() const { return space_; }
  const FiniteMetricSpace& space() const { return *space_; }
  std::size_t size() const { return sets_.size(); }
  const std::vector<std::size_t>& set(std::size_t j) const { return sets_[j]; }
  const std::vector<std::vector<std::size_t>>& sets() const { return sets_; }
  std::size_t center(std::size_t j) const { return centers_[j]; }
  const std::vector<std::size_t>& centers() const { return centers_; }
  const std::vector<std::optional<double>>& radius_hint() const { return radius_hint_; }
  std::optional<std::size_t> multiplicity_bound() const { return multiplicity_bound_; }

  bool contains(std::size_t j, std::size_t x) const { return member_[j][x] != 0; }

  /// Indices of the sets containing x, ascending. This is the simplex s(x).
  const std::vector<std::size_t>& memberships(std::size_t x) const { return memberships_[x]; }

  std::size_t max_multiplicity() const {
    std::size_t m = 0;
    for (const auto& ms : memberships_) m = std::max(m, ms.size());
    return m;
  }

  /// Largest set radius: the hint when present, otherwise the largest
  /// distance from a set's center to its members.
  double mesh() const {
    double m = 0.0;
    for (std::size_t j = 0; j < sets_.size(); ++j) m = std::max(m, radius(j));
    return m;
  }

  double radius(std::size_t j) const {
    if (radius_hint_[j]) return *radius_hint_[j];
    double r = 0.0;
    for (std::size_t x : sets_[j]) r = std::max(r, (*space_)(centers_[j], x));
    return r;
  }

  /// Members of U_A, the intersection of the listed sets.
  std::vector<std::size_t> intersect(const std::vector<std::size_t>& index_set) const {
    std::vector<std::size_t> out;
    if (index_set.empty()) return out;
    for (std::size_t x : sets_[index_set.front()]) {
      bool in_all = true;
      for (std::size_t j : index_set) {
        if (!member_[j][x]) {
          in_all = false;
          break;
        }
      }
      if (in_all) out.push_back(x);
    }
    return out;
  }

 private:
  SpacePtr space_;
  std::vector<std::vector<std::size_t>> sets_;
  std::vector<std::size_t> centers_;
  std::vector<std::optional<double>> radius_hint_;
  std::optional<std::size_t> multiplicity_bound_;
  std::vector<std::vector<char>> member_;
  std::vector<std::vector<std::size_t>> memberships_;
};

/// Greedy maximal separated net: visit points in `order`, keep a point if it
/// is at distance >= separation from every point kept so far.
inline std::vector<std::size_t> greedy_separated_net(const FiniteMetricSpace& space,
                                                     const std::vector<std::size_t>& order,
                                                     double separation) {
  std::vector<std::size_t> net;
  for (std::size_t x : order) {
    bool far = true;
    for (std::size_t c : net) {
      if (space(x, c) < separation) {
        far = false;
        break;
      }
    }
    if (far) net.push_back(x);
  }
  return net;
}

/**
 * Cover by open balls of the given radius around a maximal
 * (radius/2)-separated net, built greedily in a seeded point order.
 */
inline Cover build_ball_cover(const SpacePtr& space, double radius, std::uint64_t seed) {
  if (!(radius > 0.0)) throw ValidationError("ball cover radius must be positive");
  const auto order = seeded_permutation(space->size(), seed);
  auto centers = greedy_separated_net(*space, order, radius / 2.0);
  std::sort(centers.begin(), centers.end());
  std::vector<std::vector<std::size_t>> sets;
  for (std::size_t c : centers) {
    std::vector<std::size_t> ball;
    for (std::size_t x = 0; x < space->size(); ++x) {
      if ((*space)(c, x) < radius) ball.push_back(x);
    }
    sets.push_back(std::move(ball));
  }
  std::vector<std::optional<double>> hints(centers.size(), radius);
  return Cover(space, std::move(sets), std::move(centers), std::move(hints));
}

/// Cover by open balls of per-set radii around the given centers.
inline Cover cover_from_balls(const SpacePtr& space, const std::vector<std::size_t>& centers,
                              const std::vector<double>& radii) {
  if (radii.size() != centers.size()) throw ValidationError("need one radius per center");
  std::vector<std::vector<std::size_t>> sets;
  std::vector<std::optional<double>> hints;
  for (std::size_t j = 0; j < centers.size(); ++j) {
    if (!(radii[j] > 0.0)) throw ValidationError("ball radius must be positive");
    std::vector<std::size_t> ball;
    for (std::size_t x = 0; x < space->size(); ++x) {
      if ((*space)(centers[j], x) < radii[j]) ball.push_back(x);
    }
    sets.push_back(std::move(ball));
    hints.emplace_back(radii[j]);
  }
  return Cover(space, std::move(sets), centers, std::move(hints));
}

/// A nonempty intersection U_A of cover sets with its chosen center.
struct IntersectionRecord {
  std::vector<std::size_t> index_set;  // A, ascending
  std::vector<std::size_t> members;    // U_A, ascending
  std::size_t center = 0;
};

/// Distance from x to the complement of `members`; diam + 1 when the
/// complement is empty.
inline double distance_to_complement(const FiniteMetricSpace& space, std::size_t x,
                                     const std::vector<char>& is_member) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t y = 0; y < space.size(); ++y) {
    if (!is_member[y]) best = std::min(best, space(x, y));
  }
  return std::isinf(best) ? space.diameter() + 1.0 : best;
}

/// Chebyshev-center proxy: the member farthest from the complement, lowest
/// index on ties.
inline std::size_t chebyshev_center(const FiniteMetricSpace& space, const std::vector<std::size_t>& members) {
  std::vector<char> is_member(space.size(), 0);
  for (std::size_t x : members) is_member[x] = 1;
  std::size_t best = members.front();
  double best_depth = -1.0;
  for (std::size_t x : members) {
    const double depth = distance_to_complement(space, x, is_member);
    if (depth > best_depth) {
      best_depth = depth;
      best = x;
    }
  }
  return best;
}

/**
 * All nonempty intersections U_A with 1 <= |A| <= max_order, ordered by
 * |A| then lexicographically. Singletons keep the cover's designated center;
 * larger intersections use the Chebyshev-center proxy.
 */
inline std::vector<IntersectionRecord> intersections(const Cover& cover, std::size_t max_order) {
  if (max_order < 1) throw ValidationError("max_order must be at least 1");
  std::vector<IntersectionRecord> out;
  std::vector<std::size_t> index_set;
  auto extend = [&](auto&& self, const std::vector<std::size_t>& members) -> void {
    IntersectionRecord rec;
    rec.index_set = index_set;
    rec.members = members;
    rec.center = index_set.size() == 1 ? cover.center(index_set.front())
                                       : chebyshev_center(cover.space(), members);
    out.push_back(std::move(rec));
    if (index_set.size() >= max_order) return;
    for (std::size_t j = index_set.back() + 1; j < cover.size(); ++j) {
      std::vector<std::size_t> next;
      for (std::size_t x : members) {
        if (cover.contains(j, x)) next.push_back(x);
      }
      if (next.empty()) continue;
      index_set.push_back(j);
      self(self, next);
      index_set.pop_back();
    }
  };
  for (std::size_t j = 0; j < cover.size(); ++j) {
    index_set = {j};
    extend(extend, cover.set(j));
  }
  std::stable_sort(out.begin(), out.end(), [](const IntersectionRecord& a, const IntersectionRecord& b) {
    if (a.index_set.size() != b.index_set.size()) return a.index_set.size() < b.index_set.size();
    return a.index_set < b.index_set;
  });
  return out;
}

struct GoodnessEntry {
  std::vector<std::size_t> index_set;
  std::size_t center = 0;
  std::size_t size = 0;
  bool star_shaped = true;
  std::optional<std::pair<std::size_t, std::size_t>> star_violation;  // (x, waypoint outside U_A)
  BettiVector proxy_betti;
  bool acyclic = true;
  bool pass() const { return star_shaped && acyclic; }
};

struct GoodnessReport {
  std::vector<GoodnessEntry> entries;
  std::size_t flagged_boundary_points = 0;  // members with zero distance to the complement
  double proxy_scale = 0.0;
  int proxy_max_dim = 1;
  bool all_pass() const {
    return std::all_of(entries.begin(), entries.end(), [](const GoodnessEntry& e) { return e.pass(); });
  }
};

struct GoodnessOptions {
  std::size_t max_order = 8;
  double proxy_scale = 0.0;   // <= 0: twice the largest nearest-neighbour distance
  int proxy_max_dim = 1;      // Betti numbers checked up to this dimension
  double between_tolerance = 1e-9;
};

/// Twice the largest nearest-neighbour distance: the smallest scale at which
/// every point has a Rips neighbour, with slack.
inline double default_proxy_scale(const FiniteMetricSpace& space) {
  double worst = 0.0;
  for (std::size_t x = 0; x < space.size(); ++x) {
    double nn = std::numeric_limits<double>::infinity();
    for (std::size_t y = 0; y < space.size(); ++y) {
      if (y != x) nn = std::min(nn, space(x, y));
    }
    if (std::isfinite(nn)) worst = std::max(worst, nn);
  }
  return worst > 0.0 ? 2.0 * worst : 1.0;
}

/**
 * Advisory contractibility check of every nonempty intersection.
 *
 * Two sample-level proxies are tested: metric star-shapedness about the
 * center (every sample point metrically between a member and the center is a
 * member) and acyclicity of the intersection's Vietoris-Rips complex. Passing
 * does not prove the intersection retracts to its center.
 */
inline GoodnessReport goodness_report(const Cover& cover, const GoodnessOptions& opt = {}) {
  const FiniteMetricSpace& space = cover.space();
  GoodnessReport report;
  report.proxy_scale = opt.proxy_scale > 0.0 ? opt.proxy_scale : default_proxy_scale(space);
  report.proxy_max_dim = opt.proxy_max_dim;
  const double tol = opt.between_tolerance * std::max(1.0, space.diameter());

  for (std::size_t j = 0; j < cover.size(); ++j) {
    std::vector<char> is_member(space.size(), 0);
    for (std::size_t x : cover.set(j)) is_member[x] = 1;
    for (std::size_t x : cover.set(j)) {
      if (distance_to_complement(space, x, is_member) == 0.0) ++report.flagged_boundary_points;
    }
  }

  for (const auto& rec : intersections(cover, opt.max_order)) {
    GoodnessEntry e;
    e.index_set = rec.index_set;
    e.center = rec.center;
    e.size = rec.members.size();
    std::vector<char> is_member(space.size(), 0);
    for (std::size_t x : rec.members) is_member[x] = 1;
    for (std::size_t x : rec.members) {
      const double direct = space(x, rec.center);
      for (std::size_t z = 0; z < space.size() && e.star_shaped; ++z) {
        if (is_member[z]) continue;
        if (space(x, z) + space(z, rec.center) <= direct + tol) {
          e.star_shaped = false;
          e.star_violation = std::make_pair(x, z);
        }
      }
      if (!e.star_shaped) break;
    }
    const auto proxy = vr_complex_on(space, rec.members, report.proxy_scale, opt.proxy_max_dim + 1);
    e.proxy_betti = betti(proxy, opt.proxy_max_dim);
    e.acyclic = e.proxy_betti[0] == 1;
    for (std::size_t k = 1; k < e.proxy_betti.ranks.size(); ++k) e.acyclic = e.acyclic && e.proxy_betti.ranks[k] == 0;
    report.entries.push_back(std::move(e));
  }
  return report;
}

}  // namespace nervekit
