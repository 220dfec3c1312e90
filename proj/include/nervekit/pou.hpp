#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <sstream>
#include <utility>
#include <vector>

#include "nervekit/cover.hpp"
#include "nervekit/error.hpp"
#include "nervekit/nerve.hpp"
#include "nervekit/random.hpp"

namespace nervekit {

namespace detail {

inline double complement_distance(const Cover& cover, std::size_t j, std::size_t x) {
  const auto& space = cover.space();
  double best = -1.0;
  for (std::size_t y = 0; y < space.size(); ++y) {
    if (cover.contains(j, y)) continue;
    if (best < 0.0 || space(x, y) < best) best = space(x, y);
  }
  return best < 0.0 ? space.diameter() + 1.0 : best;
}

}  // namespace detail

/// f_j(x) = |x,U_j^c| / (|x,U_j^c| + |x,p_j|), zero off U_j. An empty
/// complement counts as being at distance diam + 1.
inline double f_weight(const Cover& cover, std::size_t j, std::size_t x) {
  if (!cover.contains(j, x)) return 0.0;
  const double out = detail::complement_distance(cover, j, x);
  const double denom = out + cover.space()(x, cover.center(j));
  if (denom == 0.0) {
    std::ostringstream msg;
    msg << "f_" << j << " is undefined at point " << x << ": the center lies on the boundary of its set";
    throw ValidationError(msg.str());
  }
  return out / denom;
}

/// The normalized weights xi_j = f_j / sum_i f_i, stored densely. Keeps a
/// reference to the cover, which must outlive it.
class PartitionOfUnity {
 public:
  explicit PartitionOfUnity(const Cover& cover) : cover_(&cover) {
    const std::size_t n = cover.space().size();
    const std::size_t m = cover.size();
    for (std::size_t j = 0; j < m; ++j) {
      // A center at distance 0 from the complement makes every f_j at the
      // center 0/0; reject it up front with a clear message.
      if (detail::complement_distance(cover, j, cover.center(j)) == 0.0) {
        std::ostringstream msg;
        msg << "center " << cover.center(j) << " of set " << j << " lies on the boundary of its set";
        throw ValidationError(msg.str());
      }
    }
    values_.assign(n * m, 0.0);
    for (std::size_t x = 0; x < n; ++x) {
      double total = 0.0;
      for (std::size_t j : cover.memberships(x)) {
        const double f = f_weight(cover, j, x);
        if (f == 0.0) zero_members_.emplace_back(x, j);
        values_[x * m + j] = f;
        total += f;
      }
      if (total <= 0.0) {
        std::ostringstream msg;
        msg << "cover violation: every weight vanishes at point " << x;
        throw ValidationError(msg.str());
      }
      for (std::size_t j : cover.memberships(x)) values_[x * m + j] /= total;
    }
  }

  const Cover& cover() const { return *cover_; }
  std::size_t points() const { return cover_->space().size(); }
  std::size_t sets() const { return cover_->size(); }
  double operator()(std::size_t x, std::size_t j) const { return values_[x * sets() + j]; }

  std::vector<double> row(std::size_t x) const {
    return {values_.begin() + static_cast<std::ptrdiff_t>(x * sets()),
            values_.begin() + static_cast<std::ptrdiff_t>((x + 1) * sets())};
  }

  /// Members x of U_j with f_j(x) = 0 (zero distance to the complement).
  /// These break the support law and are reported, not hidden.
  const std::vector<std::pair<std::size_t, std::size_t>>& zero_members() const { return zero_members_; }

  /// Theta(x) as a barycentric point over the nerve's vertices.
  BarycentricPoint theta(std::size_t x) const {
    std::vector<std::pair<std::size_t, double>> w;
    for (std::size_t j : cover_->memberships(x)) {
      if (values_[x * sets() + j] > 0.0) w.emplace_back(j, values_[x * sets() + j]);
    }
    return BarycentricPoint(std::move(w));
  }

 private:
  const Cover* cover_;
  std::vector<double> values_;
  std::vector<std::pair<std::size_t, std::size_t>> zero_members_;
};

/// Theta(x) computed directly from the cover.
inline BarycentricPoint theta(const Cover& cover, std::size_t x) {
  if (x >= cover.space().size()) throw ValidationError("cover violation: point index out of range");
  std::vector<std::pair<std::size_t, double>> w;
  double total = 0.0;
  for (std::size_t j : cover.memberships(x)) {
    const double f = f_weight(cover, j, x);
    if (f > 0.0) {
      w.emplace_back(j, f);
      total += f;
    }
  }
  if (w.empty()) {
    std::ostringstream msg;
    msg << "cover violation: no positive weight at point " << x;
    throw ValidationError(msg.str());
  }
  for (auto& e : w) e.second /= total;
  return BarycentricPoint(std::move(w));
}

struct LipschitzEstimate {
  double value = 0.0;
  std::pair<std::size_t, std::size_t> witness{0, 0};
  std::size_t pairs_checked = 0;
  bool sampled = false;
  std::uint64_t seed = 0;
};

struct LipschitzOptions {
  std::size_t exhaustive_limit = 2000;  // all pairs when the point count is at most this
  std::size_t sampled_pairs = 200000;
  std::uint64_t seed = 0;
};

/**
 * Largest ratio image_distance(a, b) / source_distance(a, b) over pairs with
 * positive source distance.
 *
 * Both arguments are callables (size_t, size_t) -> double.
 */
template <typename SourceDistance, typename ImageDistance>
LipschitzEstimate estimate_lipschitz(std::size_t n, SourceDistance&& source, ImageDistance&& image,
                                     const LipschitzOptions& opt = {}) {
  if (n < 2) throw ValidationError("a Lipschitz estimate needs at least two points");
  LipschitzEstimate est;
  auto visit = [&](std::size_t a, std::size_t b) {
    const double d = source(a, b);
    if (!(d > 0.0)) return;
    ++est.pairs_checked;
    const double ratio = image(a, b) / d;
    if (ratio > est.value) {
      est.value = ratio;
      est.witness = {a, b};
    }
  };
  if (n <= opt.exhaustive_limit) {
    for (std::size_t a = 0; a < n; ++a) {
      for (std::size_t b = a + 1; b < n; ++b) visit(a, b);
    }
  } else {
    est.sampled = true;
    est.seed = opt.seed;
    Rng rng = make_rng(opt.seed);
    for (std::size_t k = 0; k < opt.sampled_pairs; ++k) {
      const std::size_t a = uniform_index(rng, n);
      const std::size_t b = uniform_index(rng, n);
      if (a != b) visit(std::min(a, b), std::max(a, b));
    }
  }
  return est;
}

/// Lipschitz estimate of Theta : M -> |N| with the sup metric.
inline LipschitzEstimate estimate_theta_lipschitz(const PartitionOfUnity& pou, const LipschitzOptions& opt = {}) {
  const auto& space = pou.cover().space();
  std::vector<BarycentricPoint> images;
  images.reserve(space.size());
  for (std::size_t x = 0; x < space.size(); ++x) images.push_back(pou.theta(x));
  return estimate_lipschitz(
      space.size(), [&](std::size_t a, std::size_t b) { return space(a, b); },
      [&](std::size_t a, std::size_t b) { return realization_distance(images[a], images[b]); }, opt);
}

}  // namespace nervekit
