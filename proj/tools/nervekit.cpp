#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "nervekit/nervekit.hpp"

namespace nk = nervekit;
namespace cmd = nervekit::commands;
using nk::io::Json;

namespace {

nk::SpacePtr load(const std::string& path) { return nk::share(nk::io::load_space(path)); }

Json load_json(const std::string& path) { return nk::io::parse_json(nk::io::read_file(path), path); }

int emit(const Json& report, int code, const std::string& out) {
  const std::string text = report.dump(2) + "\n";
  if (out.empty()) {
    std::cout << text;
  } else {
    nk::io::write_file(out, text);
  }
  if (code == cmd::kUsage && report.contains("error")) {
    std::cerr << "error: " << report["error"]["message"].get<std::string>() << "\n";
  }
  return code;
}

void add_run_config(CLI::App* sub, cmd::RunConfig& cfg, std::string& config_path) {
  sub->add_option("--config", config_path, "pipeline config JSON {mu, deltaR, L, seed, vr_scale}");
  sub->add_option("--mu", cfg.mu, "collar width mu");
  sub->add_option("--delta-r", cfg.deltaR, "chart scale deltaR");
  sub->add_option("--delta", cfg.delta, "strainer angle tolerance");
  sub->add_option("--L", cfg.L, "cone height (must exceed 6)");
  sub->add_option("--seed", cfg.seed, "random seed");
  sub->add_option("--trials", cfg.trials, "heuristic map trials");
  sub->add_option("--max-dim", cfg.max_dim, "nerve dimension cap");
}

// Values from --config are the base; explicit flags given on the command line win.
cmd::RunConfig merge_config(CLI::App* sub, const cmd::RunConfig& flags, const std::string& path) {
  if (path.empty()) return flags;
  cmd::RunConfig cfg = cmd::RunConfig::from_json(load_json(path));
  if (sub->count("--mu")) cfg.mu = flags.mu;
  if (sub->count("--delta-r")) cfg.deltaR = flags.deltaR;
  if (sub->count("--delta")) cfg.delta = flags.delta;
  if (sub->count("--L")) cfg.L = flags.L;
  if (sub->count("--seed")) cfg.seed = flags.seed;
  if (sub->count("--trials")) cfg.trials = flags.trials;
  if (sub->count("--max-dim")) cfg.max_dim = flags.max_dim;
  return cfg;
}

Json sample_space(const std::string& kind, std::size_t n, std::uint64_t seed) {
  namespace s = nk::samples;
  if (kind == "circle") return nk::io::space_to_json(s::circle(n));
  if (kind == "sphere") return nk::io::space_to_json(s::fibonacci_sphere(n));
  if (kind == "line") return nk::io::space_to_json(s::line(n));
  if (kind == "tree") return nk::io::space_to_json(s::random_tree(n, seed));
  if (kind == "planar") return nk::io::space_to_json(s::random_planar(n, seed));
  if (kind == "patch") {
    const auto patch = s::flat_patch(n, 0.05);
    return Json{{"coords", patch.coords}, {"strainer_pairs", patch.pairs}};
  }
  throw nk::ValidationError("unknown sample kind " + kind);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"nervekit: nerves of good covers on finite metric spaces"};
  app.set_version_flag("--version", std::string(cmd::kToolName) + " " + cmd::kToolVersion);
  app.require_subcommand(1);
  app.fallthrough();
  std::string out;
  app.add_option("-o,--out", out, "write the report here instead of stdout");

  std::string kind = "circle";
  std::size_t n = 64;
  std::uint64_t sample_seed = 0;
  auto* sample = app.add_subcommand("sample", "write a sample space as JSON");
  sample->add_option("kind", kind, "circle | sphere | line | tree | planar | patch")->required();
  sample->add_option("-n,--points", n, "number of points (grid side for patch)");
  sample->add_option("--seed", sample_seed, "random seed");

  std::string space_path;
  std::string cover_path;
  cmd::CoverOptions cover_opt;
  auto* cover = app.add_subcommand("cover", "build a ball cover and its goodness report");
  cover->add_option("space", space_path, "distance matrix (.csv or .json)")->required();
  cover->add_option("--radius", cover_opt.radius, "ball radius")->required();
  cover->add_option("--seed", cover_opt.seed, "net ordering seed");
  cover->add_option("--proxy-scale", cover_opt.proxy_scale, "Rips scale for the acyclicity proxy");

  int max_dim = nk::kDefaultNerveMaxDim;
  auto* nerve = app.add_subcommand("nerve", "nerve of a cover");
  nerve->add_option("space", space_path)->required();
  nerve->add_option("cover", cover_path)->required();
  nerve->add_option("--max-dim", max_dim, "dimension cap");

  double vr_scale = 0.0;
  int verify_dim = 2;
  auto* verify = app.add_subcommand("verify", "compare nerve and Rips Betti numbers");
  verify->add_option("space", space_path)->required();
  verify->add_option("cover", cover_path)->required();
  verify->add_option("--vr-scale", vr_scale, "Vietoris-Rips scale")->required();
  verify->add_option("--max-dim", verify_dim, "highest Betti number compared");

  std::string other_path;
  int trials = 64;
  std::uint64_t gh_seed = 0;
  auto* gh = app.add_subcommand("gh", "Gromov-Hausdorff bracket of two spaces");
  gh->add_option("x", space_path)->required();
  gh->add_option("y", other_path)->required();
  gh->add_option("--trials", trials);
  gh->add_option("--seed", gh_seed);

  cmd::RunConfig run_cfg;
  std::string config_path;
  std::string map_path;
  std::string zeta = "face_center";
  auto* stability = app.add_subcommand("stability", "lift a cover along an approximation");
  stability->add_option("space_a", space_path)->required();
  stability->add_option("space_b", other_path)->required();
  stability->add_option("cover", cover_path, "cover of space_a")->required();
  stability->add_option("--map", map_path, "approximation A -> B as {\"image\": [...]}");
  stability->add_option("--zeta", zeta, "face_center | retraction");
  add_run_config(stability, run_cfg, config_path);

  std::string region_path;
  std::string f_path;
  std::string g_path;
  std::string strainer_path;
  auto* glue = app.add_subcommand("glue", "glue an almost isometry near D with a map away from D");
  glue->add_option("space_a", space_path)->required();
  glue->add_option("space_b", other_path)->required();
  glue->add_option("--region", region_path, "indices of D as a JSON array")->required();
  glue->add_option("--f", f_path, "map A -> B used away from D (default identity)");
  glue->add_option("--g", g_path, "map A -> B used near D (default identity)");
  glue->add_option("--strainers", strainer_path, "strainer pairs in B as [[a,b],...]");
  add_run_config(glue, run_cfg, config_path);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : cmd::kUsage;
  }

  try {
    if (*sample) {
      return emit(sample_space(kind, n, sample_seed), cmd::kPass, out);
    }
    if (*cover) {
      const auto r = cmd::cmd_cover(load(space_path), cover_opt);
      return emit(r.report, r.exit_code, out);
    }
    if (*nerve) {
      const auto space = load(space_path);
      const auto c = nk::io::cover_from_json(load_json(cover_path), space);
      const auto r = cmd::cmd_nerve(c, max_dim);
      return emit(r.report, r.exit_code, out);
    }
    if (*verify) {
      const auto space = load(space_path);
      const auto c = nk::io::cover_from_json(load_json(cover_path), space);
      const auto r = cmd::cmd_verify(c, vr_scale, verify_dim);
      return emit(r.report, r.exit_code, out);
    }
    if (*gh) {
      const auto r = cmd::cmd_gh(*load(space_path), *load(other_path), trials, gh_seed);
      return emit(r.report, r.exit_code, out);
    }
    if (*stability) {
      const auto a = load(space_path);
      const auto b = load(other_path);
      const auto c = nk::io::cover_from_json(load_json(cover_path), a);
      std::optional<std::vector<std::size_t>> image;
      if (!map_path.empty()) image = nk::io::index_map_from_json(load_json(map_path));
      if (zeta != "face_center" && zeta != "retraction") throw nk::ValidationError("--zeta must be face_center or retraction");
      const auto rule = zeta == "retraction" ? nk::ZetaRule::Retraction : nk::ZetaRule::FaceCenter;
      const auto r = cmd::cmd_stability(a, b, c, image, merge_config(stability, run_cfg, config_path), rule);
      return emit(r.report, r.exit_code, out);
    }
    if (*glue) {
      cmd::GlueInputs in;
      in.a = load(space_path);
      in.b = load(other_path);
      in.region = nk::io::index_map_from_json(load_json(region_path));
      auto identity = [&] {
        if (in.a->size() > in.b->size()) throw nk::ValidationError("default identity map needs |A| <= |B|");
        std::vector<std::size_t> id(in.a->size());
        for (std::size_t i = 0; i < id.size(); ++i) id[i] = i;
        return id;
      };
      in.f = f_path.empty() ? identity() : nk::io::index_map_from_json(load_json(f_path));
      in.g = g_path.empty() ? identity() : nk::io::index_map_from_json(load_json(g_path));
      if (!strainer_path.empty()) {
        const Json j = load_json(strainer_path);
        const Json& pairs = j.is_object() ? j.at("strainer_pairs") : j;
        in.pairs = pairs.get<std::vector<nk::StrainerPair>>();
      }
      const auto r = cmd::cmd_glue(in, merge_config(glue, run_cfg, config_path));
      return emit(r.report, r.exit_code, out);
    }
  } catch (const nk::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return cmd::kUsage;
  } catch (const nk::PreconditionError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return cmd::kUsage;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: malformed input: " << e.what() << "\n";
    return cmd::kUsage;
  }
  return cmd::kUsage;
}
