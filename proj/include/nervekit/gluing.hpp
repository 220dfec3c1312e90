#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <sstream>
#include <utility>
#include <vector>

#include "nervekit/cover.hpp"
#include "nervekit/error.hpp"
#include "nervekit/metric_space.hpp"
#include "nervekit/random.hpp"
#include "nervekit/strainer.hpp"

namespace nervekit {

using ChartCoords = std::vector<double>;

inline double coord_distance(const ChartCoords& a, const ChartCoords& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(s);
}

/**
 * Strainer chart x -> (|a_1 x|, ..., |a_m x|) on the open ball B(center, radius).
 *
 * Coordinates can be evaluated at any point of the space; inversion is by
 * nearest coordinate tuple among the ball's points.
 */
class StrainerChart {
 public:
  StrainerChart() = default;

  StrainerChart(SpacePtr space, std::size_t center, std::vector<StrainerPair> pairs, double radius, double delta,
                std::size_t id = 0)
      : space_(std::move(space)), center_(center), pairs_(std::move(pairs)), radius_(radius), id_(id) {
    if (!(radius_ > 0.0)) throw ValidationError("chart radius must be positive");
    check_ = check_strainer(*space_, center_, pairs_, delta);
    if (!check_.strained) {
      std::ostringstream msg;
      msg << "chart " << id_ << ": point " << center_ << " is not strained (worst angle margin "
          << check_.worst_margin << ")";
      throw PreconditionError(msg.str());
    }
    for (std::size_t x = 0; x < space_->size(); ++x) {
      if ((*space_)(center_, x) < radius_) {
        domain_.push_back(x);
        coords_.push_back(coordinates(x));
      }
    }
    measure();
  }

  std::size_t id() const { return id_; }
  std::size_t center() const { return center_; }
  double radius() const { return radius_; }
  const std::vector<std::size_t>& domain() const { return domain_; }
  const StrainerCheck& strainer() const { return check_; }
  /// max over domain pairs of max(r, 1/r) - 1, r = coordinate distance / distance.
  double distortion() const { return distortion_; }
  /// Smallest coordinate distance between distinct domain points.
  double injectivity_radius() const { return injectivity_; }

  bool in_domain(std::size_t x) const { return (*space_)(center_, x) < radius_; }

  ChartCoords coordinates(std::size_t x) const {
    ChartCoords c;
    c.reserve(pairs_.size());
    for (const auto& pr : pairs_) c.push_back((*space_)(pr.first, x));
    return c;
  }

  /// Nearest domain point in coordinates (lowest index on ties). Throws if a
  /// second domain point also lies within half the injectivity radius.
  std::size_t inverse(const ChartCoords& c) const {
    std::size_t best = domain_.size();
    double best_d = std::numeric_limits<double>::infinity();
    std::size_t close = 0;
    for (std::size_t i = 0; i < domain_.size(); ++i) {
      const double d = coord_distance(coords_[i], c);
      if (d < best_d) {
        best_d = d;
        best = i;
      }
      if (d < injectivity_ / 2.0) ++close;
    }
    if (best == domain_.size()) throw ConstructionError("chart has an empty domain");
    if (close > 1) {
      std::ostringstream msg;
      msg << "chart " << id_ << " cannot invert coordinates: " << close << " preimages within half the injectivity radius";
      throw ConstructionError(msg.str());
    }
    return domain_[best];
  }

 private:
  void measure() {
    distortion_ = 0.0;
    injectivity_ = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < domain_.size(); ++i) {
      for (std::size_t j = i + 1; j < domain_.size(); ++j) {
        const double d = (*space_)(domain_[i], domain_[j]);
        const double c = coord_distance(coords_[i], coords_[j]);
        injectivity_ = std::min(injectivity_, c);
        if (d > 0.0 && c > 0.0) {
          distortion_ = std::max(distortion_, std::max(c / d, d / c) - 1.0);
        } else if (d != c) {
          distortion_ = std::numeric_limits<double>::infinity();
        }
      }
    }
  }

  SpacePtr space_;
  std::size_t center_ = 0;
  std::vector<StrainerPair> pairs_;
  double radius_ = 0.0;
  std::size_t id_ = 0;
  StrainerCheck check_;
  std::vector<std::size_t> domain_;
  std::vector<ChartCoords> coords_;
  double distortion_ = 0.0;
  double injectivity_ = 0.0;
};

/// Build a strainer chart; the spec-facing entry point.
inline StrainerChart strainer_chart(const SpacePtr& space, std::size_t center, const std::vector<StrainerPair>& pairs,
                                    double radius, double delta) {
  return StrainerChart(space, center, pairs, radius, delta);
}

/**
 * A region D with D0, D1 its closed mu- and 2mu-neighborhoods and
 * d(x) = min(|D x|, mu).
 */
class GluingConfig {
 public:
  GluingConfig(SpacePtr space, std::vector<std::size_t> D, double mu) : space_(std::move(space)), mu_(mu) {
    if (!(mu_ > 0.0)) throw ValidationError("mu must be positive");
    const std::size_t n = space_->size();
    in_D_.assign(n, 0);
    for (std::size_t x : D) {
      if (x >= n) throw ValidationError("region D contains an invalid point");
      in_D_[x] = 1;
    }
    dist_.assign(n, std::numeric_limits<double>::infinity());
    for (std::size_t x = 0; x < n; ++x) {
      for (std::size_t y = 0; y < n; ++y) {
        if (in_D_[y]) dist_[x] = std::min(dist_[x], (*space_)(x, y));
      }
    }
  }

  const SpacePtr& space_ptr() const { return space_; }
  double mu() const { return mu_; }
  std::size_t size() const { return in_D_.size(); }
  bool empty_region() const { return std::none_of(in_D_.begin(), in_D_.end(), [](char c) { return c != 0; }); }

  /// |D, x|, infinite when D is empty.
  double distance_to_D(std::size_t x) const { return dist_[x]; }
  /// d(x) = min(|D, x|, mu).
  double d(std::size_t x) const { return std::min(dist_[x], mu_); }

  bool in_D(std::size_t x) const { return in_D_[x] != 0; }
  bool in_D0(std::size_t x) const { return dist_[x] <= mu_; }
  bool in_D1(std::size_t x) const { return dist_[x] <= 2.0 * mu_; }
  /// The collar E = D1 minus D.
  bool in_E(std::size_t x) const { return in_D1(x) && !in_D(x); }

  std::vector<std::size_t> collar() const {
    std::vector<std::size_t> e;
    for (std::size_t x = 0; x < size(); ++x) {
      if (in_E(x)) e.push_back(x);
    }
    return e;
  }

  std::vector<std::size_t> D1() const {
    std::vector<std::size_t> out;
    for (std::size_t x = 0; x < size(); ++x) {
      if (in_D1(x)) out.push_back(x);
    }
    return out;
  }

 private:
  SpacePtr space_;
  double mu_;
  std::vector<char> in_D_;
  std::vector<double> dist_;
};

/**
 * Charts around a maximal (deltaR/2)-separated family x_i in the collar E.
 *
 * The cut-off balls B_i = B(x_i, deltaR/2) cover E. Chart i lives on the
 * chart space (M' for map gluing, M for homotopy gluing) around
 * center_map(x_i), with domain radius 2 deltaR.
 */
class ChartAtlas {
 public:
  ChartAtlas() = default;

  ChartAtlas(const GluingConfig& config, SpacePtr chart_space, const std::function<std::size_t(std::size_t)>& center_map,
             const std::vector<StrainerPair>& pairs, double deltaR, double delta, std::uint64_t seed = 0)
      : base_(config.space_ptr()), chart_space_(std::move(chart_space)), deltaR_(deltaR) {
    if (!(deltaR_ > 0.0)) throw ValidationError("deltaR must be positive");
    auto collar = config.collar();
    Rng rng = make_rng(seed);
    shuffle(collar, rng);
    centers_ = greedy_separated_net(*base_, collar, deltaR_ / 2.0);
    std::sort(centers_.begin(), centers_.end());
    for (std::size_t i = 0; i < centers_.size(); ++i) {
      charts_.emplace_back(chart_space_, center_map(centers_[i]), pairs, 2.0 * deltaR_, delta, i);
    }
    multiplicity_ = 0;
    for (std::size_t x = 0; x < base_->size(); ++x) {
      std::size_t m = 0;
      for (std::size_t c : centers_) m += (*base_)(x, c) < 2.0 * deltaR_ ? 1 : 0;
      multiplicity_ = std::max(multiplicity_, m);
    }
  }

  std::size_t size() const { return centers_.size(); }
  double deltaR() const { return deltaR_; }
  const std::vector<std::size_t>& centers() const { return centers_; }
  const StrainerChart& chart(std::size_t i) const { return charts_[i]; }
  const std::vector<StrainerChart>& charts() const { return charts_; }
  const SpacePtr& chart_space_ptr() const { return chart_space_; }
  /// Largest number of balls B(x_i, 2 deltaR) containing a base point.
  std::size_t multiplicity() const { return multiplicity_; }

  double max_distortion() const {
    double d = 0.0;
    for (const auto& c : charts_) d = std::max(d, c.distortion());
    return d;
  }

  /// x in B_i = B(x_i, deltaR / 2).
  bool in_ball(std::size_t i, std::size_t x) const { return (*base_)(x, centers_[i]) < deltaR_ / 2.0; }

  /// phi_i(x) = 1 - |x x_i| / deltaR on B(x_i, deltaR), else 0.
  double cutoff(std::size_t i, std::size_t x) const {
    const double r = (*base_)(x, centers_[i]);
    return r < deltaR_ ? 1.0 - r / deltaR_ : 0.0;
  }

 private:
  SpacePtr base_;
  SpacePtr chart_space_;
  double deltaR_ = 0.0;
  std::vector<std::size_t> centers_;
  std::vector<StrainerChart> charts_;
  std::size_t multiplicity_ = 0;
};

namespace detail {

// chart^{-1}((1 - w) c(a) + w c(b)); w = 0 and w = 1 and a = b return the
// input points themselves without a chart round trip.
inline std::size_t chart_blend(const StrainerChart& chart, std::size_t a, std::size_t b, double w) {
  if (w == 0.0 || a == b) return a;
  if (w == 1.0) return b;
  const auto ca = chart.coordinates(a);
  const auto cb = chart.coordinates(b);
  ChartCoords c(ca.size());
  for (std::size_t k = 0; k < c.size(); ++k) c[k] = std::lerp(ca[k], cb[k], w);
  return chart.inverse(c);
}

}  // namespace detail

struct GlueReport {
  std::size_t charts = 0;
  std::size_t blended_points = 0;   // points whose value went through a chart
  double max_chart_distortion = 0.0;
  std::size_t multiplicity = 0;
};

struct GlueResult {
  PointMap map;
  GlueReport report;
};

/**
 * Glue f : M -> M' (total) with g : D1 -> M' (nullopt outside D1).
 *
 * Start from g where d = 0 and f where d = mu; then for each chart i and x in B_i
 * form h_i(x) = chart^{-1}((d/mu) c(f x) + (1 - d/mu) c(g x)) and blend it
 * into the running map with weight phi_i / psi_i, psi_i = sum_{j<=i} phi_j.
 * Points with d = 0 keep g and points with d = mu keep f, exactly.
 */
inline GlueResult glue_maps(const PointMap& f, const std::vector<std::optional<std::size_t>>& g,
                            const GluingConfig& config, const ChartAtlas& atlas) {
  f.validate();
  const std::size_t n = f.source->size();
  if (g.size() != n || config.size() != n) throw ValidationError("glue_maps: f, g and the region must share a source");
  const double mu = config.mu();
  for (std::size_t x = 0; x < n; ++x) {
    if (config.in_D1(x) && !g[x]) {
      std::ostringstream msg;
      msg << "g is undefined at point " << x << " of D1";
      throw ValidationError(msg.str());
    }
  }
  std::vector<std::optional<std::size_t>> h(n);
  for (std::size_t x = 0; x < n; ++x) {
    if (config.d(x) == 0.0) {
      h[x] = *g[x];
    } else if (config.d(x) >= mu) {
      h[x] = f(x);
    }
  }
  GlueReport rep;
  rep.charts = atlas.size();
  rep.max_chart_distortion = atlas.max_distortion();
  rep.multiplicity = atlas.multiplicity();
  std::vector<char> blended(n, 0);
  for (std::size_t i = 0; i < atlas.size(); ++i) {
    const auto& chart = atlas.chart(i);
    for (std::size_t x = 0; x < n; ++x) {
      if (!atlas.in_ball(i, x)) continue;
      const double dx = config.d(x);
      if (dx == 0.0) {
        h[x] = *g[x];
        continue;
      }
      if (dx >= mu) {
        h[x] = f(x);
        continue;
      }
      const std::size_t hi = detail::chart_blend(chart, *g[x], f(x), dx / mu);
      if (!h[x]) {
        h[x] = hi;
      } else {
        double psi = 0.0;
        for (std::size_t j = 0; j <= i; ++j) psi += atlas.cutoff(j, x);
        h[x] = detail::chart_blend(chart, *h[x], hi, atlas.cutoff(i, x) / psi);
      }
      blended[x] = 1;
    }
  }
  std::vector<std::size_t> image(n);
  for (std::size_t x = 0; x < n; ++x) {
    if (!h[x]) {
      std::ostringstream msg;
      msg << "charts do not cover collar point " << x;
      throw ConstructionError(msg.str());
    }
    image[x] = *h[x];
    rep.blended_points += blended[x];
  }
  return GlueResult{PointMap(f.source, f.target, std::move(image)), rep};
}

/// A homotopy M x {t_0..t_K} -> target, possibly undefined at some points.
struct SampledHomotopy {
  std::vector<double> t;
  std::vector<std::vector<std::optional<std::size_t>>> values;  // values[k][x] at time t[k]

  std::optional<std::size_t> at(std::size_t k, std::size_t x) const { return values[k][x]; }
};

/// rho(x, t) = max(a(x), min(b(x), clamp(1 - 2t))), a = clamp((|D x| - mu) / mu),
/// b = clamp(|D x| / mu): 0 on D x [0,1] and on D0 x [1/2, 1], 1 outside D1.
inline double default_rho(const GluingConfig& config, std::size_t x, double t) {
  const double delta = config.distance_to_D(x);
  const double mu = config.mu();
  const double a = std::clamp((delta - mu) / mu, 0.0, 1.0);
  const double b = std::clamp(delta / mu, 0.0, 1.0);
  return std::max(a, std::min(b, std::clamp(1.0 - 2.0 * t, 0.0, 1.0)));
}

using RhoFunction = std::function<double(std::size_t, double)>;

/**
 * G(x, t) = chart^{-1}(rho c(F(x,t)) + (1 - rho) c(H(x,t))), using the chart
 * of the nearest atlas center whose ball contains x. rho = 0 returns H and
 * rho = 1 returns F without a chart.
 */
inline SampledHomotopy glue_homotopies(const SampledHomotopy& F, const SampledHomotopy& H, const GluingConfig& config,
                                       const ChartAtlas& atlas, RhoFunction rho = {}) {
  if (F.t != H.t) throw ValidationError("homotopies must share a time grid");
  if (!rho) rho = [&config](std::size_t x, double t) { return default_rho(config, x, t); };
  const std::size_t n = config.size();
  SampledHomotopy G;
  G.t = F.t;
  G.values.assign(F.t.size(), std::vector<std::optional<std::size_t>>(n));
  for (std::size_t k = 0; k < F.t.size(); ++k) {
    for (std::size_t x = 0; x < n; ++x) {
      const double r = rho(x, F.t[k]);
      const auto fv = F.at(k, x);
      const auto hv = H.at(k, x);
      if (r == 0.0) {
        if (!hv) throw ValidationError("H is undefined where rho = 0");
        G.values[k][x] = hv;
        continue;
      }
      if (r == 1.0) {
        if (!fv) throw ValidationError("F is undefined where rho = 1");
        G.values[k][x] = fv;
        continue;
      }
      if (!fv || !hv) throw ValidationError("both homotopies must be defined where 0 < rho < 1");
      std::size_t chosen = atlas.size();
      double best = std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < atlas.size(); ++i) {
        const double dist = (*config.space_ptr())(x, atlas.centers()[i]);
        if (atlas.in_ball(i, x) && dist < best) {
          best = dist;
          chosen = i;
        }
      }
      if (chosen == atlas.size()) {
        std::ostringstream msg;
        msg << "no chart contains point " << x << " where the homotopies must be blended";
        throw ConstructionError(msg.str());
      }
      G.values[k][x] = detail::chart_blend(atlas.chart(chosen), *hv, *fv, r);
    }
  }
  return G;
}

/**
 * Straight-line homotopy from `from` to `to` (maps into the chart space):
 * inside a chart whose domain holds both endpoints the path is the chart
 * preimage of the coordinate segment; otherwise it jumps at t = 1/2.
 */
inline SampledHomotopy straight_line_homotopy(const std::vector<std::size_t>& from, const std::vector<std::size_t>& to,
                                              const ChartAtlas& atlas, int steps) {
  if (from.size() != to.size()) throw ValidationError("endpoint maps must have the same length");
  if (steps < 1) throw ValidationError("need at least one time step");
  SampledHomotopy out;
  for (int k = 0; k <= steps; ++k) out.t.push_back(static_cast<double>(k) / steps);
  out.values.assign(out.t.size(), std::vector<std::optional<std::size_t>>(from.size()));
  for (std::size_t x = 0; x < from.size(); ++x) {
    const StrainerChart* chart = nullptr;
    for (const auto& c : atlas.charts()) {
      if (c.in_domain(from[x]) && c.in_domain(to[x])) {
        chart = &c;
        break;
      }
    }
    for (std::size_t k = 0; k < out.t.size(); ++k) {
      const double t = out.t[k];
      if (chart) {
        out.values[k][x] = detail::chart_blend(*chart, from[x], to[x], t);
      } else {
        out.values[k][x] = t < 0.5 ? from[x] : to[x];
      }
    }
  }
  return out;
}

/// max over pairs of max(r, 1/r) - 1, r = |f x f y| / |x y|, restricted to `points`.
inline double map_distortion(const PointMap& f, const std::vector<std::size_t>& points) {
  double worst = 0.0;
  for (std::size_t a = 0; a < points.size(); ++a) {
    for (std::size_t b = a + 1; b < points.size(); ++b) {
      const double d = (*f.source)(points[a], points[b]);
      const double e = (*f.target)(f(points[a]), f(points[b]));
      if (d > 0.0 && e > 0.0) {
        worst = std::max(worst, std::max(e / d, d / e) - 1.0);
      } else if (d != e) {
        return std::numeric_limits<double>::infinity();
      }
    }
  }
  return worst;
}

}  // namespace nervekit
