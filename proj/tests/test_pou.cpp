#include <catch_amalgamated.hpp>

#include <numeric>

#include "oracles.hpp"

using namespace nervekit;

namespace {

// U_0 = {0,1} centered at 0, U_1 = {1,2,3} centered at 2, on the line {0,1,2,3}.
Cover line_pair() { return Cover(share(samples::line(4)), {{0, 1}, {1, 2, 3}}, {0, 2}); }

}  // namespace

TEST_CASE("f_weight", "[pou]") {
  const auto c = line_pair();
  CHECK(f_weight(c, 0, 0) == 1.0);
  CHECK(f_weight(c, 1, 2) == 1.0);
  CHECK(f_weight(c, 0, 3) == 0.0);
  CHECK(f_weight(c, 0, 1) == 0.5);  // |1,{2,3}| / (|1,{2,3}| + |1,0|) = 1 / 2
  CHECK(f_weight(c, 1, 1) == 0.5);  // |1,{0}| / (|1,{0}| + |1,2|) = 1 / 2

  // A set equal to the whole space uses diam + 1 for the missing complement.
  const auto whole = Cover(share(samples::line(4)), {{0, 1, 2, 3}}, {1});
  CHECK(f_weight(whole, 0, 1) == 1.0);
  CHECK(f_weight(whole, 0, 3) == 4.0 / (4.0 + 2.0));
}

TEST_CASE("theta", "[pou]") {
  const auto c = line_pair();
  CHECK(theta(c, 0) == BarycentricPoint::vertex(0));
  CHECK(theta(c, 3) == BarycentricPoint::vertex(1));
  CHECK(theta(c, 1) == BarycentricPoint({{0, 0.5}, {1, 0.5}}));

  const PartitionOfUnity pou(c);
  for (std::size_t x = 0; x < 4; ++x) CHECK(pou.theta(x) == theta(c, x));
  CHECK(pou.row(1) == std::vector<double>{0.5, 0.5});
}

TEST_CASE("partition rows sum to one and supports are memberships", "[pou]") {
  const auto circle = share(samples::circle(64));
  for (const auto& cover : {samples::circle_arc_cover(circle, 3, 1.5), build_ball_cover(circle, 0.6, 3)}) {
    const PartitionOfUnity pou(cover);
    const auto nerve = nerve_of(cover);
    CHECK(pou.zero_members().empty());
    for (std::size_t x = 0; x < 64; ++x) {
      const auto row = pou.row(x);
      CHECK(std::abs(std::accumulate(row.begin(), row.end(), 0.0) - 1.0) <= 1e-12);
      for (std::size_t j = 0; j < cover.size(); ++j) CHECK((row[j] > 0.0) == cover.contains(j, x));
      const auto th = pou.theta(x);
      CHECK(th.support() == cover.memberships(x));
      CHECK(nerve.contains(th.support()));
    }
  }
}

TEST_CASE("boundary centers are rejected", "[pou]") {
  // Points 0 and 1 coincide, so center 0 of U_0 = {0, 2} touches its
  // complement {1}.
  const auto twin = share(FiniteMetricSpace::from_rows({{0, 0, 1}, {0, 0, 1}, {1, 1, 0}}));
  const Cover c(twin, {{0, 2}, {1, 2}}, {0, 2});
  CHECK_THROWS_WITH(PartitionOfUnity(c), Catch::Matchers::ContainsSubstring("boundary"));
}

TEST_CASE("estimate_lipschitz", "[pou]") {
  const auto line = samples::line(30);
  auto src = [&](std::size_t a, std::size_t b) { return line(a, b); };
  CHECK(estimate_lipschitz(30, src, [](std::size_t, std::size_t) { return 0.0; }).value == 0.0);
  CHECK(estimate_lipschitz(30, src, src).value == 1.0);
  const auto est = estimate_lipschitz(30, src, [&](std::size_t a, std::size_t b) { return 2.0 * line(a, b); });
  CHECK(est.value == 2.0);
  CHECK(est.pairs_checked == 30 * 29 / 2);
  CHECK_FALSE(est.sampled);

  LipschitzOptions sampled;
  sampled.exhaustive_limit = 10;
  sampled.sampled_pairs = 500;
  sampled.seed = 7;
  const auto a = estimate_lipschitz(30, src, src, sampled);
  const auto b = estimate_lipschitz(30, src, src, sampled);
  CHECK(a.sampled);
  CHECK(a.value == b.value);
  CHECK(a.witness == b.witness);
  CHECK_THROWS_AS(estimate_lipschitz(1, src, src), ValidationError);
}

TEST_CASE("Theta Lipschitz estimate is finite and reported", "[pou]") {
  const auto circle = share(samples::circle(64));
  const auto cover = samples::circle_arc_cover(circle, 3, 1.5);
  const PartitionOfUnity pou(cover);
  const auto est = estimate_theta_lipschitz(pou);
  CHECK(std::isfinite(est.value));
  CHECK(est.value > 0.0);
  CHECK(est.pairs_checked == 64 * 63 / 2);
}
