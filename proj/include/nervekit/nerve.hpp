#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <utility>
#include <vector>

#include "nervekit/cover.hpp"
#include "nervekit/error.hpp"
#include "nervekit/homology.hpp"
#include "nervekit/simplicial_complex.hpp"

namespace nervekit {

inline constexpr int kDefaultNerveMaxDim = 8;

/// Nerve of a cover: a simplex for every nonempty intersection of at most
/// max_dim + 1 sets.
inline SimplicialComplex nerve_of(const Cover& cover, int max_dim = kDefaultNerveMaxDim) {
  if (max_dim < 0) throw ValidationError("max_dim must be nonnegative");
  std::vector<Simplex> gens;
  for (auto& rec : intersections(cover, static_cast<std::size_t>(max_dim) + 1)) gens.push_back(std::move(rec.index_set));
  return SimplicialComplex::from_simplices(cover.size(), gens, max_dim);
}

/**
 * A point of the geometric realization |K|, stored as sorted
 * (vertex, weight) pairs with positive weights summing to 1.
 */
class BarycentricPoint {
 public:
  static constexpr double kDropBelow = 1e-15;
  static constexpr double kSumTolerance = 1e-12;

  BarycentricPoint() = default;

  /// Normalizes the representation: merges duplicate vertices, drops
  /// entries below 1e-15 and renormalizes only when something was dropped.
  explicit BarycentricPoint(std::vector<std::pair<std::size_t, double>> weights) {
    std::sort(weights.begin(), weights.end());
    double dropped = 0.0;
    for (const auto& [v, w] : weights) {
      if (!std::isfinite(w) || w < 0.0) throw ValidationError("barycentric weights must be finite and nonnegative");
      if (!entries_.empty() && entries_.back().first == v) {
        entries_.back().second += w;
      } else {
        entries_.emplace_back(v, w);
      }
    }
    std::vector<std::pair<std::size_t, double>> kept;
    for (const auto& e : entries_) {
      if (e.second < kDropBelow) {
        dropped += e.second;
      } else {
        kept.push_back(e);
      }
    }
    entries_ = std::move(kept);
    if (entries_.empty()) throw ValidationError("barycentric point has no positive weight");
    double sum = 0.0;
    for (const auto& e : entries_) sum += e.second;
    if (dropped > 0.0) {
      for (auto& e : entries_) e.second /= sum;
      sum = 1.0;
    }
    if (std::abs(sum - 1.0) > kSumTolerance) throw ValidationError("barycentric weights must sum to 1");
  }

  static BarycentricPoint vertex(std::size_t v) { return BarycentricPoint({{v, 1.0}}); }

  /// Dense weights over the given vertex count.
  static BarycentricPoint from_dense(const std::vector<double>& weights) {
    std::vector<std::pair<std::size_t, double>> pairs;
    for (std::size_t v = 0; v < weights.size(); ++v) {
      if (weights[v] != 0.0) pairs.emplace_back(v, weights[v]);
    }
    return BarycentricPoint(std::move(pairs));
  }

  const std::vector<std::pair<std::size_t, double>>& entries() const { return entries_; }

  double weight(std::size_t v) const {
    auto it = std::lower_bound(entries_.begin(), entries_.end(), std::make_pair(v, -1.0));
    return (it != entries_.end() && it->first == v) ? it->second : 0.0;
  }

  /// The carrier simplex supp(theta).
  Simplex support() const {
    Simplex s;
    for (const auto& e : entries_) s.push_back(e.first);
    return s;
  }

  friend bool operator==(const BarycentricPoint& a, const BarycentricPoint& b) { return a.entries_ == b.entries_; }

 private:
  std::vector<std::pair<std::size_t, double>> entries_;
};

/// Sup-norm distance between weight vectors.
inline double realization_distance(const BarycentricPoint& a, const BarycentricPoint& b) {
  const auto& x = a.entries();
  const auto& y = b.entries();
  double d = 0.0;
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < x.size() || j < y.size()) {
    if (j == y.size() || (i < x.size() && x[i].first < y[j].first)) {
      d = std::max(d, x[i++].second);
    } else if (i == x.size() || y[j].first < x[i].first) {
      d = std::max(d, y[j++].second);
    } else {
      d = std::max(d, std::abs(x[i++].second - y[j++].second));
    }
  }
  return d;
}

/// Outcome of comparing the nerve's homology with a Rips proxy of the space.
struct NerveMatchReport {
  BettiVector nerve_betti;
  BettiVector space_betti;
  int max_dim = 0;
  double scale = 0.0;
  bool euler_consistent = true;  // alternating Betti sum equals face-count Euler characteristic (nerve)
  bool match() const { return nerve_betti == space_betti; }
};

/**
 * Compare GF(2) Betti numbers of the nerve with those of the Vietoris-Rips
 * complex of the space at `scale`, up to dimension max_dim.
 *
 * Agreement is a necessary condition for a homotopy equivalence, not a
 * certificate of one.
 */
inline NerveMatchReport nerve_matches_space(const Cover& cover, double scale, int max_dim) {
  if (max_dim < 0) throw ValidationError("max_dim must be nonnegative");
  NerveMatchReport r;
  r.max_dim = max_dim;
  r.scale = scale;
  const auto nerve = nerve_of(cover, max_dim + 1);
  const auto rips = vr_complex(cover.space(), scale, max_dim + 1);
  r.nerve_betti = betti(nerve, max_dim);
  r.space_betti = betti(rips, max_dim);
  if (nerve.dimension() <= max_dim) {
    long alt = 0;
    for (std::size_t k = 0; k < r.nerve_betti.ranks.size(); ++k) {
      alt += (k % 2 == 0 ? 1L : -1L) * static_cast<long>(r.nerve_betti.ranks[k]);
    }
    r.euler_consistent = alt == nerve.euler_characteristic();
  }
  // Pad to a common length so truncation differences do not read as mismatch.
  const std::size_t len = static_cast<std::size_t>(max_dim) + 1;
  r.nerve_betti.ranks.resize(len, 0);
  r.space_betti.ranks.resize(len, 0);
  return r;
}

}  // namespace nervekit
