#include <catch_amalgamated.hpp>

#include "oracles.hpp"

using namespace nervekit;
namespace cmd = nervekit::commands;

TEST_CASE("space ingestion", "[io]") {
  const auto csv = io::space_from_csv("a,b,c\n0,1,2\n1,0,1\n2,1,0\n");
  CHECK(csv.size() == 3);
  CHECK(csv(0, 2) == 2.0);
  CHECK(io::space_from_csv("0,1\r\n1,0\r\n\n").size() == 2);
  CHECK_THROWS_AS(io::space_from_csv("0,1\n1,x\n"), ValidationError);
  CHECK_THROWS_AS(io::space_from_csv("0,1\n2,0\n"), ValidationError);

  const auto pts = io::space_from_json(io::Json::parse(R"({"coords": [[0, 0], [3, 4]]})"));
  CHECK(pts(0, 1) == 5.0);
  CHECK_THROWS_AS(io::space_from_json(io::Json::parse(R"({"n": 3, "dist": [[0, 1], [1, 0]]})")), ValidationError);
  CHECK_THROWS_AS(io::space_from_json(io::Json::parse(R"({"points": []})")), ValidationError);
  CHECK_THROWS_AS(io::parse_json("{", "input"), ValidationError);

  const auto circle = samples::circle(12);
  CHECK(io::space_from_json(io::space_to_json(circle)).flat() == circle.flat());
}

TEST_CASE("cover, nerve and point round trips", "[io]") {
  const auto circle = share(samples::circle(64));
  const auto cover = samples::circle_arc_cover(circle, 3, 1.5);
  const auto back = io::cover_from_json(io::cover_to_json(cover), circle);
  CHECK(back.sets() == cover.sets());
  CHECK(back.centers() == cover.centers());
  const auto nested = io::cover_from_json(io::Json{{"cover", io::cover_to_json(cover)}}, circle);
  CHECK(nested.sets() == cover.sets());
  CHECK_THROWS_AS(io::cover_from_json(io::Json::parse(R"({"sets": [[0]]})"), circle), ValidationError);

  const auto nerve = nerve_of(cover);
  CHECK(io::nerve_from_json(io::nerve_to_json(nerve)) == nerve);

  const BarycentricPoint p({{0, 0.25}, {2, 0.75}});
  CHECK(io::barycentric_from_json(io::barycentric_to_json(p)) == p);
  const CylinderPoint cp{p, {5, 2.5}};
  const auto cq = io::cylinder_point_from_json(io::cylinder_point_to_json(cp));
  CHECK(cq.theta == p);
  CHECK(cq.cone == cp.cone);

  CHECK(io::index_map_from_json(io::Json::parse("[2, 0, 1]")) == std::vector<std::size_t>{2, 0, 1});
  CHECK(io::index_map_from_json(io::Json::parse(R"({"image": [1]})")) == std::vector<std::size_t>{1});
  CHECK_THROWS_AS(io::index_map_from_json(io::Json::parse(R"({"img": [1]})")), ValidationError);
}

TEST_CASE("run config", "[commands]") {
  const auto c = cmd::RunConfig::from_json(io::Json::parse(R"({"mu": 0.2, "seed": 5})"));
  CHECK(c.mu == 0.2);
  CHECK(c.seed == 5);
  CHECK(c.L == kDefaultConeHeight);
  CHECK_THROWS_AS(cmd::RunConfig::from_json(io::Json::parse(R"({"L": 5})")), ValidationError);
  CHECK_THROWS_AS(cmd::RunConfig::from_json(io::Json::parse(R"({"mu": "wide"})")), ValidationError);
  CHECK_THROWS_AS(cmd::RunConfig::from_json(io::Json::parse(R"({"mu": -1})")), ValidationError);
}

TEST_CASE("command reports and exit codes", "[commands]") {
  const auto circle = share(samples::circle(64));

  const auto built = cmd::cmd_cover(circle, {0.6, 1, 0.2, 1});
  CHECK(built.exit_code == cmd::kPass);
  const auto& h = built.report;
  CHECK(h.begin().key() == "tool");
  CHECK(h["tool"] == "nervekit");
  CHECK(h["version"] == "0.1.0");
  CHECK(h["command"] == "cover");
  CHECK(h["config"]["radius"] == 0.6);
  CHECK(cmd::cmd_cover(circle, {-1.0, 0, 0.0, 1}).exit_code == cmd::kUsage);

  const auto cover = samples::circle_arc_cover(circle, 3, 1.5);
  const auto nerve = cmd::cmd_nerve(cover, 8);
  CHECK(nerve.exit_code == cmd::kPass);
  CHECK(nerve.report["betti"] == io::Json::parse("[1, 1]"));
  CHECK(nerve.report["euler_characteristic"] == 0);

  const double spacing = 2.0 * std::numbers::pi / 64.0;
  CHECK(cmd::cmd_verify(cover, 1.5 * spacing, 2).exit_code == cmd::kPass);
  // At a scale where the Rips complex fills the circle the Betti numbers disagree.
  CHECK(cmd::cmd_verify(cover, 4.0, 2).exit_code == cmd::kMismatch);
  CHECK(cmd::cmd_verify(cover, 0.0, 2).exit_code == cmd::kUsage);

  const auto gh = cmd::cmd_gh(samples::line(4), samples::line(4, 2.0), 16, 0);
  CHECK(gh.exit_code == cmd::kPass);
  // Scaling by 2 distorts the farthest pair by 3; nothing does better.
  CHECK(gh.report["exact"] == 3.0);
  CHECK(gh.report["lower"] == 3.0);
  CHECK(gh.report["upper"] == 3.0);
  CHECK(cmd::cmd_gh(samples::circle(10), samples::circle(10), 4, 0).report["exact"].is_null());

  std::vector<std::size_t> id(64);
  for (std::size_t i = 0; i < 64; ++i) id[i] = i;
  const auto stab = cmd::cmd_stability(circle, circle, cover, id, {});
  CHECK(stab.exit_code == cmd::kPass);
  CHECK(stab.report["status"] == "pass");
  cmd::RunConfig bad;
  bad.L = 3.0;
  CHECK(cmd::cmd_stability(circle, circle, cover, id, bad).exit_code == cmd::kUsage);
  const std::vector<std::size_t> short_map(10, 0);
  CHECK(cmd::cmd_stability(circle, circle, cover, short_map, {}).exit_code == cmd::kUsage);
}

TEST_CASE("glue command", "[commands]") {
  const auto patch = samples::flat_patch(11, 0.05);
  const auto a = share(FiniteMetricSpace::from_coords(patch.coords));
  std::vector<std::size_t> id(a->size());
  for (std::size_t i = 0; i < id.size(); ++i) id[i] = i;
  cmd::GlueInputs in{a, a, {patch.index(5, 5)}, id, id, patch.pairs};
  const auto r = cmd::cmd_glue(in, {});
  CHECK(r.exit_code == cmd::kPass);
  CHECK(r.report["g_on_D"] == true);
  CHECK(r.report["f_outside_D0"] == true);
  CHECK(r.report["h"] == io::Json(id));

  in.pairs.clear();
  CHECK(cmd::cmd_glue(in, {}).exit_code == cmd::kUsage);
}

TEST_CASE("reports are deterministic", "[commands]") {
  const auto sphere = share(samples::fibonacci_sphere(60));
  const auto a = cmd::cmd_cover(sphere, {0.7, 3, 0.4, 1}).report.dump();
  const auto b = cmd::cmd_cover(sphere, {0.7, 3, 0.4, 1}).report.dump();
  CHECK(a == b);
  const auto x = samples::random_tree(8, 2);
  const auto y = samples::random_planar(8, 2);
  CHECK(cmd::cmd_gh(x, y, 32, 9).report.dump() == cmd::cmd_gh(x, y, 32, 9).report.dump());
}
