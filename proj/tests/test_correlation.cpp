#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "vrsim/correlation.hpp"
#include "vrsim/rng.hpp"

using namespace vrsim;

namespace {

// Arc written as [lo, lo+width] on the circle.
ViewState arc(double lo_deg, double width_deg = 120.0, int content = 0) {
  return {content, lo_deg + width_deg / 2.0, width_deg};
}

std::vector<ViewState> random_views(Rng& rng, int count) {
  std::vector<ViewState> views;
  for (int i = 0; i < count; ++i) views.push_back({0, 360.0 * rng.uniform(), 120.0});
  return views;
}

}  // namespace

TEST_CASE("covariance at zero distance is the sigma product") {
  CHECK(covariance(1.0, 1.0, 0.0, 2.0, 5.0) == doctest::Approx(1.0));
  CHECK(covariance(2.0, 3.0, 0.0, 2.0, 5.0) == doctest::Approx(6.0));
}

TEST_CASE("covariance vanishes at large distance") {
  CHECK(covariance(1.0, 1.0, 1e6, 2.0, 5.0) == doctest::Approx(0.0));
}

TEST_CASE("covariance at d = sqrt(5), alpha 2, kappa 5 is 1/e") {
  CHECK(covariance(1.0, 1.0, std::sqrt(5.0), 2.0, 5.0) ==
        doctest::Approx(std::exp(-1.0)).epsilon(1e-12));
}

TEST_CASE("covariance is symmetric bit-exactly") {
  Rng rng = Rng::stream(3, "cov-sym");
  for (int i = 0; i < 100; ++i) {
    const double si = rng.uniform(0.1, 3.0), sj = rng.uniform(0.1, 3.0);
    const double d = rng.uniform(0.0, 800.0);
    CHECK(covariance(si, sj, d, 2.0, 5.0) == covariance(sj, si, d, 2.0, 5.0));
  }
}

TEST_CASE("sigma_max over co-associated peers") {
  Topology topo;
  topo.coverage_radius_m = 500.0;
  topo.sbs_positions = {{0.0, 0.0}};
  topo.user_positions = {{0.0, 0.0}, {1.0, 2.0}, {10.0, 20.0}};  // d = sqrt5, 10*sqrt5
  topo.association = {0, 0, 0};
  const std::vector<UserTrackingModel> models(3, UserTrackingModel{1.0, 0.0});
  const CorrelationDecay decay{2.0, 5.0};

  SUBCASE("singleton SBS gives zero") {
    CHECK(sigma_max(0, {0}, topo, models, decay) == 0.0);
    CHECK(sigma_max(0, {}, topo, models, decay) == 0.0);
  }
  SUBCASE("max over peers picks the nearest") {
    CHECK(sigma_max(0, {0, 1, 2}, topo, models, decay) ==
          doctest::Approx(std::exp(-1.0)).epsilon(1e-12));
  }
  SUBCASE("a co-located peer saturates the covariance at the sigma product") {
    Topology t2 = topo;
    t2.user_positions.push_back({0.0, 0.0});
    t2.association.push_back(0);
    const std::vector<UserTrackingModel> m2(4, UserTrackingModel{1.0, 0.0});
    CHECK(sigma_max(0, {0, 1, 2, 3}, t2, m2, decay) == doctest::Approx(1.0));
  }
}

TEST_CASE("tracking data size clamps linearly") {
  const TrackingSizeConfig cfg{0.1e6, 1e6, 1.0};
  CHECK(tracking_data_size(0.0, cfg) == doctest::Approx(0.1e6));
  CHECK(tracking_data_size(1.0, cfg) == doctest::Approx(1e6));
  CHECK(tracking_data_size(2.5, cfg) == doctest::Approx(1e6));
  CHECK(tracking_data_size(0.5, cfg) == doctest::Approx(0.55e6));  // midpoint
}

TEST_CASE("pairwise overlap coefficients") {
  SUBCASE("identical arcs overlap fully") {
    const auto sets = overlap_sets({arc(0.0), arc(0.0)});
    REQUIRE(sets.by_order.size() == 1);
    CHECK(sets.by_order[0][0] == doctest::Approx(1.0));
  }
  SUBCASE("disjoint arcs [0,120] vs [180,300]") {
    const auto sets = overlap_sets({arc(0.0), arc(180.0)});
    CHECK(sets.by_order[0][0] == doctest::Approx(0.0));
  }
  SUBCASE("half overlap, [0,120] vs [60,180]") {
    const auto sets = overlap_sets({arc(0.0), arc(60.0)});
    CHECK(sets.by_order[0][0] == doctest::Approx(0.5));
    // grid oracle agrees on the union, hence on the coefficient
    const double grid = oracles::grid_union_deg({arc(0.0), arc(60.0)});
    CHECK(grid == doctest::Approx(180.0).epsilon(1e-3));
  }
  SUBCASE("wrap-around arcs intersect correctly") {
    const auto sets = overlap_sets({arc(300.0), arc(0.0)});  // [300,60] vs [0,120]
    CHECK(sets.by_order[0][0] == doctest::Approx(0.5));
  }
}

TEST_CASE("visible union size via inclusion-exclusion") {
  const double g120 = 12e6;
  SUBCASE("two users at overlap one half ship 1.5 visible contents") {
    const auto sets = overlap_sets({arc(0.0), arc(60.0)});
    CHECK(visible_union_size(sets, 2, g120) == doctest::Approx(18e6));
  }
  SUBCASE("identical views collapse to one visible content") {
    const auto sets = overlap_sets({arc(10.0), arc(10.0), arc(10.0)});
    CHECK(visible_union_size(sets, 3, g120) == doctest::Approx(g120));
  }
  SUBCASE("three pairwise-disjoint views ship three full visible contents") {
    const auto sets = overlap_sets({arc(0.0), arc(120.0), arc(240.0)});
    CHECK(visible_union_size(sets, 3, g120) == doctest::Approx(3.0 * g120));
  }
  SUBCASE("a single user ships one visible content") {
    CHECK(visible_union_size(CorrelationSets{}, 1, g120) == doctest::Approx(g120));
  }
  SUBCASE("incomplete sets are rejected") {
    const auto sets = overlap_sets({arc(0.0), arc(60.0)});
    CHECK_THROWS_AS(visible_union_size(sets, 3, g120), std::invalid_argument);
  }
}

TEST_CASE("inclusion-exclusion equals the grid union measure") {
  Rng rng = Rng::stream(17, "union-oracle");
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 2 + static_cast<int>(rng.uniform_index(5));  // up to 6 views
    const auto views = random_views(rng, n);
    const double la = visible_union_size(overlap_sets(views), n, 12e6);
    const double grid = 12e6 * oracles::grid_union_deg(views, 100000) / 120.0;
    CHECK(la == doctest::Approx(grid).epsilon(0.01));
  }
}

TEST_CASE("union size stays between one and n visible contents") {
  Rng rng = Rng::stream(18, "union-bounds");
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 2 + static_cast<int>(rng.uniform_index(5));
    const auto views = random_views(rng, n);
    const double la = visible_union_size(overlap_sets(views), n, 12e6);
    CHECK(la >= 12e6 * (1.0 - 1e-12));
    CHECK(la <= 12e6 * n * (1.0 + 1e-12));
  }
}

TEST_CASE("higher-order coefficients never exceed contained lower-order ones") {
  Rng rng = Rng::stream(19, "monotone-sets");
  for (int trial = 0; trial < 50; ++trial) {
    const auto views = random_views(rng, 4);
    // oracle-side subset walk over arc intersections
    for (int mask = 0; mask < 16; ++mask) {
      if (__builtin_popcount(mask) < 3) continue;
      std::vector<ViewState> subset;
      for (int i = 0; i < 4; ++i)
        if (mask & (1 << i)) subset.push_back(views[i]);
      const double whole = arc_intersection_deg(subset);
      for (std::size_t drop = 0; drop < subset.size(); ++drop) {
        std::vector<ViewState> smaller;
        for (std::size_t i = 0; i < subset.size(); ++i)
          if (i != drop) smaller.push_back(subset[i]);
        CHECK(whole <= arc_intersection_deg(smaller) + 1e-9);
      }
    }
  }
}

TEST_CASE("interval-merge union agrees with inclusion-exclusion beyond the subset cap") {
  Rng rng = Rng::stream(20, "merge-vs-ie");
  for (int trial = 0; trial < 5; ++trial) {
    const auto views = random_views(rng, 13);
    const double ie = visible_union_size(overlap_sets(views), 13, 120.0);
    const double merged = arc_union_deg(views);  // g120 = width means L = union
    CHECK(ie == doctest::Approx(merged).epsilon(1e-9));
  }
}

TEST_CASE("format choice follows the payload comparison with visible winning ties") {
  SUBCASE("visible when the union is smaller") {
    const auto c = choose_format(50e6, 36e6);
    CHECK(c.format == ContentFormat::kVisible120);
    CHECK(c.payload_bits == doctest::Approx(36e6));
  }
  SUBCASE("full panorama when the union is larger") {
    const auto c = choose_format(50e6, 60e6);
    CHECK(c.format == ContentFormat::kFull360);
    CHECK(c.payload_bits == doctest::Approx(50e6));
  }
  SUBCASE("tie ships the visible format") {
    const auto c = choose_format(50e6, 50e6);
    CHECK(c.format == ContentFormat::kVisible120);
    CHECK(c.payload_bits == doctest::Approx(50e6));
  }
}

TEST_CASE("chosen payload is the minimum of the two candidates") {
  Rng rng = Rng::stream(21, "payload-min");
  for (int trial = 0; trial < 100; ++trial) {
    const double g360 = rng.uniform(1e6, 100e6);
    const double la = rng.uniform(1e6, 100e6);
    CHECK(choose_format(g360, la).payload_bits == doctest::Approx(std::min(g360, la)));
  }
}
