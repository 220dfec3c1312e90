#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <sstream>
#include <utility>
#include <vector>

#include "nervekit/cover.hpp"
#include "nervekit/error.hpp"
#include "nervekit/metric_space.hpp"
#include "nervekit/simplicial_complex.hpp"

namespace nervekit {

/**
 * A sampled strong deformation retraction phi : U x [0, L] -> U onto a center.
 *
 * Each member follows a waypoint path that strictly decreases the distance
 * to the center, choosing at every step the nearest such member. Time is
 * arc length rescaled so the path ends at `saturation`; from then on
 * phi(x, t) = center. phi(x, 0) = x and phi(center, t) = center exactly.
 */
class DiscreteContraction {
 public:
  DiscreteContraction() = default;

  DiscreteContraction(const FiniteMetricSpace& space, std::vector<std::size_t> members, std::size_t center,
                      double saturation)
      : members_(std::move(members)), center_(center), saturation_(saturation) {
    if (!(saturation_ > 0.0)) throw ValidationError("contraction saturation time must be positive");
    std::sort(members_.begin(), members_.end());
    if (!std::binary_search(members_.begin(), members_.end(), center_)) {
      throw ValidationError("contraction center must be a member of its set");
    }
    paths_.resize(members_.size());
    arc_.resize(members_.size());
    for (std::size_t i = 0; i < members_.size(); ++i) {
      std::size_t current = members_[i];
      auto& path = paths_[i];
      auto& arc = arc_[i];
      path.push_back(current);
      arc.push_back(0.0);
      while (current != center_) {
        const double here = space(current, center_);
        std::size_t next = center_;
        for (std::size_t z : members_) {
          const double dz = space(z, center_);
          if (!(dz < here)) continue;
          const double step = space(current, z);
          const double best = space(current, next);
          if (step < best || (step == best && (dz < space(next, center_) || (dz == space(next, center_) && z < next)))) {
            next = z;
          }
        }
        arc.push_back(arc.back() + space(current, next));
        path.push_back(next);
        current = next;
      }
    }
  }

  const std::vector<std::size_t>& members() const { return members_; }
  std::size_t center() const { return center_; }
  double saturation() const { return saturation_; }

  bool contains(std::size_t x) const { return std::binary_search(members_.begin(), members_.end(), x); }

  const std::vector<std::size_t>& path(std::size_t x) const { return paths_[slot(x)]; }

  /// phi(x, t): the last waypoint whose rescaled arc length is at most t.
  std::size_t operator()(std::size_t x, double t) const {
    const std::size_t i = slot(x);
    const auto& path = paths_[i];
    const auto& arc = arc_[i];
    if (t <= 0.0) return path.front();
    if (t >= saturation_) return path.back();
    const double reach = (t / saturation_) * arc.back();
    std::size_t k = 0;
    while (k + 1 < arc.size() && arc[k + 1] <= reach) ++k;
    return path[k];
  }

 private:
  std::size_t slot(std::size_t x) const {
    auto it = std::lower_bound(members_.begin(), members_.end(), x);
    if (it == members_.end() || *it != x) {
      std::ostringstream msg;
      msg << "point " << x << " is outside the contraction's domain";
      throw ValidationError(msg.str());
    }
    return static_cast<std::size_t>(it - members_.begin());
  }

  std::vector<std::size_t> members_;
  std::size_t center_ = 0;
  double saturation_ = 1.0;
  std::vector<std::vector<std::size_t>> paths_;
  std::vector<std::vector<double>> arc_;
};

/// Contraction data for every nonempty intersection U_sigma of a cover.
class ContractionAtlas {
 public:
  ContractionAtlas() = default;

  /// Default saturation is L / 6 (see README: it keeps the cone retraction
  /// well defined at the apex while still saturating before L / 2).
  ContractionAtlas(const Cover& cover, double L, std::size_t max_order, double saturation = 0.0) {
    const double sat = saturation > 0.0 ? saturation : L / 6.0;
    for (auto& rec : intersections(cover, max_order)) {
      by_simplex_.emplace(rec.index_set, DiscreteContraction(cover.space(), rec.members, rec.center, sat));
    }
  }

  const DiscreteContraction& at(const Simplex& sigma) const {
    auto it = by_simplex_.find(sigma);
    if (it == by_simplex_.end()) {
      std::ostringstream msg;
      msg << "no contraction data for simplex {";
      for (std::size_t i = 0; i < sigma.size(); ++i) msg << (i ? "," : "") << sigma[i];
      msg << "}";
      throw PreconditionError(msg.str());
    }
    return it->second;
  }

  bool has(const Simplex& sigma) const { return by_simplex_.count(sigma) != 0; }
  std::size_t size() const { return by_simplex_.size(); }

  void insert(Simplex sigma, DiscreteContraction c) { by_simplex_.insert_or_assign(std::move(sigma), std::move(c)); }

 private:
  std::map<Simplex, DiscreteContraction> by_simplex_;
};

}  // namespace nervekit
