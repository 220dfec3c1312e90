#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <memory>
#include <span>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "nervekit/error.hpp"

namespace nervekit {

/// Absolute tolerance used when validating the metric axioms on ingestion.
inline constexpr double kMetricTolerance = 1e-9;

/**
 * A finite metric space stored as a dense, validated distance matrix.
 *
 * Points are identified by their index in [0, size()). Instances are
 * immutable once constructed; share them through SpacePtr.
 */
class FiniteMetricSpace {
 public:
  /// Build from a row-major n*n matrix. Throws ValidationError naming the
  /// first violated axiom (and the violating triple for the triangle inequality).
  static FiniteMetricSpace from_flat(std::size_t n, std::vector<double> flat,
                                     double tolerance = kMetricTolerance) {
    if (flat.size() != n * n) {
      throw ValidationError("distance matrix must have n*n entries");
    }
    FiniteMetricSpace space;
    space.n_ = n;
    space.dist_ = std::move(flat);
    space.validate(tolerance);
    space.diameter_ = 0.0;
    for (double d : space.dist_) space.diameter_ = std::max(space.diameter_, d);
    return space;
  }

  static FiniteMetricSpace from_rows(const std::vector<std::vector<double>>& rows,
                                     double tolerance = kMetricTolerance) {
    const std::size_t n = rows.size();
    std::vector<double> flat;
    flat.reserve(n * n);
    for (std::size_t i = 0; i < n; ++i) {
      if (rows[i].size() != n) {
        std::ostringstream msg;
        msg << "distance matrix row " << i << " has " << rows[i].size()
            << " entries, expected " << n;
        throw ValidationError(msg.str());
      }
      flat.insert(flat.end(), rows[i].begin(), rows[i].end());
    }
    return from_flat(n, std::move(flat), tolerance);
  }

  /// Euclidean distances between points of R^d.
  static FiniteMetricSpace from_coords(const std::vector<std::vector<double>>& coords) {
    const std::size_t n = coords.size();
    const std::size_t d = n == 0 ? 0 : coords.front().size();
    for (const auto& c : coords) {
      if (c.size() != d) throw ValidationError("all coordinate rows must have the same dimension");
      for (double v : c) {
        if (!std::isfinite(v)) throw ValidationError("coordinates must be finite");
      }
    }
    std::vector<double> flat(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        double s = 0.0;
        for (std::size_t k = 0; k < d; ++k) {
          const double diff = coords[i][k] - coords[j][k];
          s += diff * diff;
        }
        flat[i * n + j] = flat[j * n + i] = std::sqrt(s);
      }
    }
    return from_flat(n, std::move(flat));
  }

  std::size_t size() const { return n_; }
  bool empty() const { return n_ == 0; }

  double operator()(std::size_t i, std::size_t j) const { return dist_[i * n_ + j]; }

  std::span<const double> row(std::size_t i) const {
    return {dist_.data() + i * n_, n_};
  }

  const std::vector<double>& flat() const { return dist_; }

  double diameter() const { return diameter_; }

 private:
  void validate(double tol) const {
    for (std::size_t i = 0; i < n_; ++i) {
      for (std::size_t j = 0; j < n_; ++j) {
        const double d = dist_[i * n_ + j];
        if (!std::isfinite(d) || d < 0.0) {
          std::ostringstream msg;
          msg << "distance (" << i << "," << j << ") = " << d
              << " is not a finite nonnegative real";
          throw ValidationError(msg.str());
        }
      }
      if (std::abs(dist_[i * n_ + i]) > tol) {
        std::ostringstream msg;
        msg << "diagonal entry (" << i << "," << i << ") = " << dist_[i * n_ + i]
            << " is not zero";
        throw ValidationError(msg.str());
      }
      for (std::size_t j = i + 1; j < n_; ++j) {
        if (std::abs(dist_[i * n_ + j] - dist_[j * n_ + i]) > tol) {
          std::ostringstream msg;
          msg << "matrix is not symmetric at (" << i << "," << j << ")";
          throw ValidationError(msg.str());
        }
      }
    }
    for (std::size_t i = 0; i < n_; ++i) {
      for (std::size_t j = 0; j < n_; ++j) {
        const double dij = dist_[i * n_ + j];
        for (std::size_t k = 0; k < n_; ++k) {
          if (dist_[i * n_ + k] > dij + dist_[j * n_ + k] + tol) {
            std::ostringstream msg;
            msg << "triangle inequality violated for triple (" << i << "," << j << ","
                << k << "): d(" << i << "," << k << ") = " << dist_[i * n_ + k]
                << " > d(" << i << "," << j << ") + d(" << j << "," << k
                << ") = " << dij + dist_[j * n_ + k];
            throw ValidationError(msg.str());
          }
        }
      }
    }
  }

  std::size_t n_ = 0;
  std::vector<double> dist_;
  double diameter_ = 0.0;
};

using SpacePtr = std::shared_ptr<const FiniteMetricSpace>;

inline SpacePtr share(FiniteMetricSpace space) {
  return std::make_shared<const FiniteMetricSpace>(std::move(space));
}

/// min over s in `set` of d(x, s).
inline double distance_to_set(const FiniteMetricSpace& space, std::size_t x,
                              std::span<const std::size_t> set) {
  if (set.empty()) throw ValidationError("empty set has no distance");
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t s : set) best = std::min(best, space(x, s));
  return best;
}

/// Index of the point of `set` nearest to x; ties go to the lowest index.
inline std::size_t nearest_in_set(const FiniteMetricSpace& space, std::size_t x,
                                  std::span<const std::size_t> set) {
  if (set.empty()) throw ValidationError("empty set has no nearest point");
  std::size_t best = set.front();
  for (std::size_t s : set) {
    if (space(x, s) < space(x, best) || (space(x, s) == space(x, best) && s < best)) best = s;
  }
  return best;
}

/**
 * A map between finite metric spaces, stored as an index array.
 *
 * image[i] is the target index of source point i.
 */
struct PointMap {
  SpacePtr source;
  SpacePtr target;
  std::vector<std::size_t> image;

  PointMap() = default;
  PointMap(SpacePtr src, SpacePtr tgt, std::vector<std::size_t> img)
      : source(std::move(src)), target(std::move(tgt)), image(std::move(img)) {
    validate();
  }

  std::size_t operator()(std::size_t x) const { return image[x]; }

  void validate() const {
    if (!source || !target) throw ValidationError("point map needs source and target spaces");
    if (image.size() != source->size()) {
      throw ValidationError("point map image length must equal the source size");
    }
    for (std::size_t i = 0; i < image.size(); ++i) {
      if (image[i] >= target->size()) {
        std::ostringstream msg;
        msg << "point map sends " << i << " to invalid target index " << image[i];
        throw ValidationError(msg.str());
      }
    }
  }

  static PointMap identity(const SpacePtr& space) {
    std::vector<std::size_t> img(space->size());
    for (std::size_t i = 0; i < img.size(); ++i) img[i] = i;
    return PointMap(space, space, std::move(img));
  }
};

/// Largest pairwise distance among the listed points.
inline double subset_diameter(const FiniteMetricSpace& space, std::span<const std::size_t> pts) {
  double d = 0.0;
  for (std::size_t a = 0; a < pts.size(); ++a) {
    for (std::size_t b = a + 1; b < pts.size(); ++b) d = std::max(d, space(pts[a], pts[b]));
  }
  return d;
}

}  // namespace nervekit
