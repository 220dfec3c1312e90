#pragma once

// Command implementations shared by the nervekit executable and the tests.
// Every command returns an exit code and a JSON report; reports embed the
// tool version and the effective configuration and contain no timings, so
// identical inputs give byte-identical output.

#include <cstddef>
#include <cstdint>
#include <exception>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "nervekit/approximation.hpp"
#include "nervekit/cover.hpp"
#include "nervekit/error.hpp"
#include "nervekit/gluing.hpp"
#include "nervekit/homology.hpp"
#include "nervekit/io.hpp"
#include "nervekit/metric_space.hpp"
#include "nervekit/nerve.hpp"
#include "nervekit/pou.hpp"
#include "nervekit/stability.hpp"

namespace nervekit::commands {

using io::Json;

inline constexpr const char* kToolName = "nervekit";
inline constexpr const char* kToolVersion = "0.1.0";

enum ExitCode : int { kPass = 0, kMismatch = 1, kUsage = 2 };

struct CommandResult {
  int exit_code = kPass;
  Json report;
};

/// Shared pipeline parameters: {"mu", "deltaR", "L", "seed", "vr_scale"}
/// plus the strainer angle tolerance and heuristic trial count.
struct RunConfig {
  double mu = 0.1;
  double deltaR = 0.2;
  double delta = 0.1;
  double L = kDefaultConeHeight;
  std::uint64_t seed = 0;
  double vr_scale = 0.0;
  int trials = 64;
  int max_dim = kDefaultNerveMaxDim;

  void validate() const {
    validate_cone_height(L);
    if (!(mu > 0.0)) throw ValidationError("mu must be positive");
    if (!(deltaR > 0.0)) throw ValidationError("deltaR must be positive");
    if (!(delta > 0.0)) throw ValidationError("delta must be positive");
    if (trials < 1) throw ValidationError("trials must be at least 1");
    if (max_dim < 0) throw ValidationError("max_dim must be nonnegative");
  }

  Json to_json() const {
    return Json{{"mu", mu},          {"deltaR", deltaR}, {"delta", delta},     {"L", L},
                {"seed", seed},      {"vr_scale", vr_scale}, {"trials", trials}, {"max_dim", max_dim}};
  }

  static RunConfig from_json(const Json& j) {
    RunConfig c;
    try {
      c.mu = j.value("mu", c.mu);
      c.deltaR = j.value("deltaR", c.deltaR);
      c.delta = j.value("delta", c.delta);
      c.L = j.value("L", c.L);
      c.seed = j.value("seed", c.seed);
      c.vr_scale = j.value("vr_scale", c.vr_scale);
      c.trials = j.value("trials", c.trials);
      c.max_dim = j.value("max_dim", c.max_dim);
    } catch (const nlohmann::json::exception& e) {
      throw ValidationError(std::string("malformed run config: ") + e.what());
    }
    c.validate();
    return c;
  }
};

inline Json header(const std::string& command, Json config) {
  return Json{{"tool", kToolName}, {"version", kToolVersion}, {"command", command}, {"config", std::move(config)}};
}

/// Run a command body, turning library exceptions into exit codes and an
/// error report: validation and precondition failures exit 2, construction
/// failures (e.g. a lifted nerve mismatch) exit 1.
inline CommandResult guarded(const std::string& command, const Json& config, const std::function<CommandResult()>& body) {
  auto failure = [&](int code, const char* kind, const std::exception& e) {
    CommandResult r;
    r.exit_code = code;
    r.report = header(command, config);
    r.report["status"] = "error";
    r.report["error"] = Json{{"kind", kind}, {"message", e.what()}};
    return r;
  };
  try {
    return body();
  } catch (const ValidationError& e) {
    return failure(kUsage, "validation", e);
  } catch (const PreconditionError& e) {
    return failure(kUsage, "precondition", e);
  } catch (const ConstructionError& e) {
    return failure(kMismatch, "construction", e);
  }
}

struct CoverOptions {
  double radius = 0.0;
  std::uint64_t seed = 0;
  double proxy_scale = 0.0;
  int proxy_max_dim = 1;
};

inline Json goodness_to_json(const GoodnessReport& g) {
  Json entries = Json::array();
  for (const auto& e : g.entries) {
    Json item{{"index_set", e.index_set},
              {"center", e.center},
              {"size", e.size},
              {"star_shaped", e.star_shaped},
              {"proxy_betti", io::betti_to_json(e.proxy_betti)},
              {"pass", e.pass()}};
    if (e.star_violation) item["star_violation"] = {e.star_violation->first, e.star_violation->second};
    entries.push_back(std::move(item));
  }
  return Json{{"advisory", "sample-level proxies; passing does not prove contractibility"},
              {"proxy_scale", g.proxy_scale},
              {"proxy_max_dim", g.proxy_max_dim},
              {"flagged_boundary_points", g.flagged_boundary_points},
              {"all_pass", g.all_pass()},
              {"intersections", entries}};
}

/// Ball cover by a greedy separated net plus the advisory goodness report.
inline CommandResult cmd_cover(const SpacePtr& space, const CoverOptions& opt) {
  const Json config{{"radius", opt.radius}, {"seed", opt.seed}, {"proxy_scale", opt.proxy_scale}, {"proxy_max_dim", opt.proxy_max_dim}};
  return guarded("cover", config, [&] {
    const Cover cover = build_ball_cover(space, opt.radius, opt.seed);
    GoodnessOptions gopt;
    gopt.proxy_scale = opt.proxy_scale;
    gopt.proxy_max_dim = opt.proxy_max_dim;
    CommandResult r;
    r.report = header("cover", config);
    r.report["status"] = "ok";
    r.report["cover"] = io::cover_to_json(cover);
    r.report["max_multiplicity"] = cover.max_multiplicity();
    r.report["goodness"] = goodness_to_json(goodness_report(cover, gopt));
    return r;
  });
}

/// Nerve (maximal simplices) with its Betti numbers.
inline CommandResult cmd_nerve(const Cover& cover, int max_dim) {
  const Json config{{"max_dim", max_dim}};
  return guarded("nerve", config, [&] {
    const auto nerve = nerve_of(cover, max_dim);
    CommandResult r;
    r.report = header("nerve", config);
    r.report["status"] = "ok";
    r.report["nerve"] = io::nerve_to_json(nerve);
    r.report["betti"] = io::betti_to_json(betti(nerve));
    r.report["euler_characteristic"] = nerve.euler_characteristic();
    return r;
  });
}

/// Compare Betti numbers of the nerve and of the Rips complex at vr_scale.
inline CommandResult cmd_verify(const Cover& cover, double vr_scale, int max_dim) {
  const Json config{{"vr_scale", vr_scale}, {"max_dim", max_dim}};
  return guarded("verify", config, [&] {
    if (!(vr_scale > 0.0)) throw ValidationError("vr_scale must be positive");
    const auto rep = nerve_matches_space(cover, vr_scale, max_dim);
    CommandResult r;
    r.exit_code = rep.match() ? kPass : kMismatch;
    r.report = header("verify", config);
    r.report["status"] = rep.match() ? "match" : "mismatch";
    r.report["nerve_betti"] = io::betti_to_json(rep.nerve_betti);
    r.report["space_betti"] = io::betti_to_json(rep.space_betti);
    r.report["euler_consistent"] = rep.euler_consistent;
    r.report["note"] = "equal Betti numbers are necessary for a homotopy equivalence, not sufficient";
    return r;
  });
}

/// Gromov-Hausdorff bracket, plus the exhaustive value for small spaces.
inline CommandResult cmd_gh(const FiniteMetricSpace& x, const FiniteMetricSpace& y, int trials, std::uint64_t seed) {
  const Json config{{"trials", trials}, {"seed", seed}};
  return guarded("gh", config, [&] {
    const auto bound = gh_distance_bound(x, y, trials, seed);
    CommandResult r;
    r.report = header("gh", config);
    r.report["status"] = "ok";
    r.report["lower"] = bound.lower;
    r.report["upper"] = bound.upper;
    r.report["forward_map"] = bound.forward;
    r.report["backward_map"] = bound.backward;
    if (x.size() <= kExhaustiveGhLimit && y.size() <= kExhaustiveGhLimit) {
      r.report["exact"] = gh_distance_exhaustive(x, y);
    } else {
      r.report["exact"] = nullptr;
    }
    return r;
  });
}

/**
 * Lift `cover` from A to B along `image` (or, when absent, the best map the
 * GH heuristic finds), build h and g through the nerves and check the
 * 10 mesh / 100 mesh displacement bounds.
 */
inline CommandResult cmd_stability(const SpacePtr& a, const SpacePtr& b, const Cover& cover,
                                   const std::optional<std::vector<std::size_t>>& image, const RunConfig& cfg,
                                   ZetaRule rule = ZetaRule::FaceCenter) {
  Json config = cfg.to_json();
  config["zeta"] = rule == ZetaRule::FaceCenter ? "face_center" : "retraction";
  config["map_supplied"] = image.has_value();
  return guarded("stability", config, [&] {
    cfg.validate();
    PointMap map = image ? PointMap(a, b, *image) : PointMap(a, b, gh_distance_bound(*a, *b, cfg.trials, cfg.seed).forward);
    const auto quality = measure_approximation(map);
    const ApproximationCertificate cert{map, quality.epsilon()};
    LiftOptions lopt;
    lopt.max_dim = cfg.max_dim;
    const auto lift = lift_cover(cover, cert, lopt);
    const auto eq = homotopy_equivalence_via_nerves(lift, rule, cfg.L);
    const auto& rep = eq.report;
    const bool ok = rep.within_10_mesh() && rep.within_100_mesh() && rep.h_membership && rep.g_membership;
    CommandResult r;
    r.exit_code = ok ? kPass : kMismatch;
    r.report = header("stability", config);
    r.report["status"] = ok ? "pass" : "bound_violated";
    r.report["epsilon"] = cert.epsilon;
    r.report["mesh"] = rep.mesh;
    r.report["nerve_isomorphic"] = true;
    r.report["lifted_cover"] = io::cover_to_json(lift.target);
    r.report["displacement"] = Json{{"psi_h", rep.psi_h_displacement},
                                    {"phi_g", rep.phi_g_displacement},
                                    {"target_roundtrip", rep.target_roundtrip},
                                    {"source_roundtrip", rep.source_roundtrip},
                                    {"bound_10_mesh", 10.0 * rep.mesh},
                                    {"bound_100_mesh", 100.0 * rep.mesh}};
    r.report["membership"] = Json{{"h", rep.h_membership}, {"g", rep.g_membership}};
    r.report["approximation"] = map.image;
    r.report["h"] = eq.h.image;
    r.report["g"] = eq.g.image;
    return r;
  });
}

struct GlueInputs {
  SpacePtr a;
  SpacePtr b;
  std::vector<std::size_t> region;         // D, indices of A
  std::vector<std::size_t> f;              // A -> B, total
  std::vector<std::size_t> g;              // A -> B, used on D1
  std::vector<StrainerPair> pairs;         // strainer pairs, indices of B
};

/**
 * Glue g (near D) with f (away from D) through strainer charts on B and
 * check the exactness conditions h = g on D and h = f outside D0.
 */
inline CommandResult cmd_glue(const GlueInputs& in, const RunConfig& cfg) {
  Json config = cfg.to_json();
  config["region_size"] = in.region.size();
  config["strainer_pairs"] = in.pairs.size();
  return guarded("glue", config, [&] {
    cfg.validate();
    const PointMap f(in.a, in.b, in.f);
    const PointMap gmap(in.a, in.b, in.g);
    const GluingConfig gc(in.a, in.region, cfg.mu);
    std::vector<std::optional<std::size_t>> g(in.a->size());
    for (std::size_t x = 0; x < g.size(); ++x) {
      if (gc.in_D1(x)) g[x] = gmap(x);
    }
    if (!gc.collar().empty() && in.pairs.empty()) throw ValidationError("gluing needs strainer pairs on the target");
    const ChartAtlas atlas(gc, in.b, [&](std::size_t x) { return gmap(x); }, in.pairs, cfg.deltaR, cfg.delta, cfg.seed);
    const auto glued = glue_maps(f, g, gc, atlas);
    bool g_on_D = true;
    bool f_off_D0 = true;
    std::vector<std::size_t> region_points;
    for (std::size_t x = 0; x < in.a->size(); ++x) {
      if (gc.in_D(x)) {
        region_points.push_back(x);
        g_on_D = g_on_D && glued.map(x) == gmap(x);
      }
      if (!gc.in_D0(x)) f_off_D0 = f_off_D0 && glued.map(x) == f(x);
    }
    const double dist_D = map_distortion(glued.map, region_points);
    const double chart = atlas.max_distortion();
    const bool ok = g_on_D && f_off_D0;
    CommandResult r;
    r.exit_code = ok ? kPass : kMismatch;
    r.report = header("glue", config);
    r.report["status"] = ok ? "pass" : "exactness_violated";
    r.report["g_on_D"] = g_on_D;
    r.report["f_outside_D0"] = f_off_D0;
    r.report["charts"] = glued.report.charts;
    r.report["chart_multiplicity"] = glued.report.multiplicity;
    r.report["max_chart_distortion"] = chart;
    r.report["distortion_on_D"] = dist_D;
    r.report["blended_points"] = glued.report.blended_points;
    r.report["h"] = glued.map.image;
    return r;
  });
}

}  // namespace nervekit::commands
