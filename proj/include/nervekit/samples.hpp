#pragma once

// Seeded sample spaces used by the command-line tool and the test suites.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <utility>
#include <vector>

#include "nervekit/cover.hpp"
#include "nervekit/error.hpp"
#include "nervekit/metric_space.hpp"
#include "nervekit/random.hpp"
#include "nervekit/strainer.hpp"

namespace nervekit::samples {

/// Points 0, spacing, 2 spacing, ... on a line.
inline FiniteMetricSpace line(std::size_t n, double spacing = 1.0) {
  std::vector<std::vector<double>> coords;
  for (std::size_t i = 0; i < n; ++i) coords.push_back({spacing * static_cast<double>(i)});
  return FiniteMetricSpace::from_coords(coords);
}

inline double circle_gap(double a, double b) {
  const double two_pi = 2.0 * std::numbers::pi;
  double d = std::fmod(std::abs(a - b), two_pi);
  return std::min(d, two_pi - d);
}

/// Unit circle with the arc-length metric at the given angles.
inline FiniteMetricSpace circle_from_angles(const std::vector<double>& angles) {
  const std::size_t n = angles.size();
  std::vector<double> flat(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) flat[i * n + j] = flat[j * n + i] = circle_gap(angles[i], angles[j]);
  }
  return FiniteMetricSpace::from_flat(n, std::move(flat));
}

inline std::vector<double> circle_angles(std::size_t n) {
  std::vector<double> a(n);
  for (std::size_t i = 0; i < n; ++i) a[i] = 2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(n);
  return a;
}

/// n equally spaced points on the unit circle, arc-length metric.
inline FiniteMetricSpace circle(std::size_t n) { return circle_from_angles(circle_angles(n)); }

/// Cover of an equally spaced circle sample by `arcs` open arcs of angular
/// radius `radius`, centered at the sample points nearest to 2 pi k / arcs.
inline Cover circle_arc_cover(const SpacePtr& circle_space, std::size_t arcs, double radius) {
  const std::size_t n = circle_space->size();
  std::vector<std::size_t> centers;
  for (std::size_t k = 0; k < arcs; ++k) centers.push_back((k * n + arcs / 2) / arcs % n);
  std::sort(centers.begin(), centers.end());
  centers.erase(std::unique(centers.begin(), centers.end()), centers.end());
  return cover_from_balls(circle_space, centers, std::vector<double>(centers.size(), radius));
}

/// Unit vectors of a Fibonacci lattice on S^2.
inline std::vector<std::vector<double>> fibonacci_sphere_coords(std::size_t n) {
  std::vector<std::vector<double>> pts;
  const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
  for (std::size_t i = 0; i < n; ++i) {
    const double z = 1.0 - 2.0 * (static_cast<double>(i) + 0.5) / static_cast<double>(n);
    const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
    const double phi = golden * static_cast<double>(i);
    pts.push_back({r * std::cos(phi), r * std::sin(phi), z});
  }
  return pts;
}

/// Great-circle metric between unit vectors.
inline FiniteMetricSpace sphere_from_coords(const std::vector<std::vector<double>>& pts) {
  const std::size_t n = pts.size();
  std::vector<double> flat(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      double dot = 0.0;
      for (std::size_t k = 0; k < 3; ++k) dot += pts[i][k] * pts[j][k];
      flat[i * n + j] = flat[j * n + i] = std::acos(std::clamp(dot, -1.0, 1.0));
    }
  }
  return FiniteMetricSpace::from_flat(n, std::move(flat));
}

inline FiniteMetricSpace fibonacci_sphere(std::size_t n) { return sphere_from_coords(fibonacci_sphere_coords(n)); }

/// Six open caps of angular radius `radius` centered at the sample points
/// nearest to +-e_1, +-e_2, +-e_3.
inline Cover octahedral_cover(const SpacePtr& sphere, const std::vector<std::vector<double>>& coords,
                              double radius = 75.0 * std::numbers::pi / 180.0) {
  std::vector<std::size_t> centers;
  for (std::size_t axis = 0; axis < 3; ++axis) {
    for (double sign : {1.0, -1.0}) {
      std::size_t best = 0;
      for (std::size_t i = 1; i < coords.size(); ++i) {
        if (sign * coords[i][axis] > sign * coords[best][axis]) best = i;
      }
      centers.push_back(best);
    }
  }
  return cover_from_balls(sphere, centers, std::vector<double>(centers.size(), radius));
}

/// Path metric of a random weighted tree: vertex i > 0 attaches to a
/// uniformly chosen earlier vertex with an edge length in [0.5, 1.5).
inline FiniteMetricSpace random_tree(std::size_t n, std::uint64_t seed) {
  Rng rng = make_rng(seed);
  std::vector<double> flat(n * n, 0.0);
  for (std::size_t v = 1; v < n; ++v) {
    const std::size_t parent = uniform_index(rng, v);
    const double len = uniform_real(rng, 0.5, 1.5);
    for (std::size_t u = 0; u < v; ++u) flat[v * n + u] = flat[u * n + v] = flat[parent * n + u] + len;
  }
  return FiniteMetricSpace::from_flat(n, std::move(flat));
}

/// Random points in the unit square with Euclidean distances.
inline FiniteMetricSpace random_planar(std::size_t n, std::uint64_t seed) {
  Rng rng = make_rng(seed);
  std::vector<std::vector<double>> coords;
  for (std::size_t i = 0; i < n; ++i) coords.push_back({uniform01(rng), uniform01(rng)});
  return FiniteMetricSpace::from_coords(coords);
}

/// A square grid patch in the plane plus four far strainer points.
struct FlatPatch {
  std::vector<std::vector<double>> coords;  // grid points first, then the strainer points
  std::size_t side = 0;                     // grid points per side
  double spacing = 0.0;
  std::vector<StrainerPair> pairs;          // ((+R,0),(-R,0)) and ((0,+R),(0,-R)) around the patch center
  std::size_t grid_size() const { return side * side; }
  std::size_t index(std::size_t row, std::size_t col) const { return row * side + col; }
};

inline FlatPatch flat_patch(std::size_t side, double spacing, double strainer_distance = 100.0) {
  FlatPatch p;
  p.side = side;
  p.spacing = spacing;
  const double mid = spacing * static_cast<double>(side - 1) / 2.0;
  for (std::size_t r = 0; r < side; ++r) {
    for (std::size_t c = 0; c < side; ++c) p.coords.push_back({spacing * static_cast<double>(c), spacing * static_cast<double>(r)});
  }
  const std::size_t base = p.coords.size();
  p.coords.push_back({mid + strainer_distance, mid});
  p.coords.push_back({mid - strainer_distance, mid});
  p.coords.push_back({mid, mid + strainer_distance});
  p.coords.push_back({mid, mid - strainer_distance});
  p.pairs = {{base, base + 1}, {base + 2, base + 3}};
  return p;
}

/// Copy of the coordinates with every entry moved uniformly in [-amount, amount).
inline std::vector<std::vector<double>> jitter(const std::vector<std::vector<double>>& coords, double amount,
                                               std::uint64_t seed) {
  Rng rng = make_rng(seed);
  auto out = coords;
  for (auto& row : out) {
    for (auto& v : row) v += uniform_real(rng, -amount, amount);
  }
  return out;
}

}  // namespace nervekit::samples
