#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

#include "ioi/composition.hpp"
#include "ioi/errors.hpp"
#include "ioi/ks.hpp"
#include "oracles/oracles.hpp"

using ioi::Density1D;
using ioi::Interval;

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

TEST_CASE("truncation: half-normal") {
  const auto half = ioi::truncate_to_region(Density1D::normal(0.0, 1.0), {-kInf, 0.0});
  // median of N(0,1) restricted to (-inf, 0] is Phi^-1(0.25) = -0.6744897502
  CHECK(std::abs(half.quantile(0.5) - (-0.6745)) < 1e-3);
  CHECK(half.cdf(0.0) == doctest::Approx(1.0));
  CHECK(half.pdf(0.5) == 0.0);
  // density doubles inside
  CHECK(half.pdf(-1.0) == doctest::Approx(2.0 * oracle::normal_pdf(1.0)).epsilon(1e-5));
}

TEST_CASE("truncation: full-support region returns the input") {
  const auto g = Density1D::grid(-1.0, 3.0, {1.0, 2.0, 4.0, 2.0, 1.0});
  const auto t = ioi::truncate_to_region(g, {-kInf, kInf});
  CHECK(t.form() == Density1D::Form::grid);
  CHECK(t.weights().data() == g.weights().data());
  CHECK(ioi::truncate_to_region(g, {-2.0, 3.0}).weights().data() == g.weights().data());
}

TEST_CASE("truncation: empty region") {
  const auto n = Density1D::normal(0.0, 1.0);
  CHECK_THROWS_AS(ioi::truncate_to_region(n, {50.0, kInf}), ioi::EmptyRegion);
  const auto g = Density1D::grid(0.0, 1.0, {1.0, 1.0});
  CHECK_THROWS_AS(ioi::truncate_to_region(g, {2.0, 3.0}), ioi::EmptyRegion);
}

TEST_CASE("compose: single region is the identity") {
  const auto n = Density1D::normal(2.0, 3.0);
  const auto c = ioi::compose({{Interval{}}, {1.0}}, {{n}});
  CHECK(c.form() == Density1D::Form::normal);
  CHECK(c.mean() == 2.0);
  CHECK(c.variance() == 3.0);
}

TEST_CASE("compose: two uniforms") {
  const auto left = Density1D::grid(0.0, 1.0, std::vector<double>(11, 1.0));
  const auto right = Density1D::grid(1.0, 2.0, std::vector<double>(11, 1.0));
  const auto c = ioi::compose({{{-kInf, 1.0}, {1.0, kInf}}, {0.3, 0.7}}, {{left, right}});
  for (double t : {0.05, 0.25, 0.5, 0.99}) CHECK(c.pdf(t) == doctest::Approx(0.3));
  for (double t : {1.01, 1.5, 1.95}) CHECK(c.pdf(t) == doctest::Approx(0.7));
  CHECK(c.cdf(1.0) == doctest::Approx(0.3).epsilon(1e-12));
}

TEST_CASE("compose: pdf is the weighted sum and region masses are exact") {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    const auto f = Density1D::normal(-1.0 + 2.0 * u(rng), 0.3 + u(rng));
    const double a = f.quantile(0.2 + 0.2 * u(rng));
    const double b = f.quantile(0.6 + 0.2 * u(rng));
    const std::vector<Interval> regions{{-kInf, a}, {a, b}, {b, kInf}};
    double p1 = u(rng), p2 = u(rng), p3 = u(rng);
    const double s = p1 + p2 + p3;
    const std::vector<double> probs{p1 / s, p2 / s, 1.0 - p1 / s - p2 / s};
    ioi::RegionalDensitySet set;
    for (const auto& r : regions) set.densities.push_back(ioi::truncate_to_region(f, r));
    const auto c = ioi::compose({regions, probs}, set);
    for (std::size_t i = 0; i < 3; ++i) {
      CHECK(std::abs(c.mass(regions[i].lo, regions[i].hi) - probs[i]) < 1e-6);
    }
    for (int s_i = 0; s_i < 20; ++s_i) {
      const double t = f.quantile(0.01 + 0.98 * u(rng));
      double expect = 0.0;
      for (std::size_t i = 0; i < 3; ++i) expect += probs[i] * set.densities[i].pdf(t);
      CHECK(c.pdf(t) == doctest::Approx(expect).epsilon(1e-12));
    }
  }
}

TEST_CASE("compose: recomposing with the original masses recovers the density") {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    const auto f = Density1D::normal(-3.0 + 6.0 * u(rng), 0.1 + 4.0 * u(rng));
    const double cut = f.quantile(0.05 + 0.9 * u(rng));
    const std::vector<Interval> regions{{-kInf, cut}, {cut, kInf}};
    const double below = f.cdf(cut);
    const auto c = ioi::compose(
        {regions, {below, 1.0 - below}},
        {{ioi::truncate_to_region(f, regions[0]), ioi::truncate_to_region(f, regions[1])}});
    CHECK(ioi::ks_distance(c, f) < 0.005);
  }
}

TEST_CASE("compose: structural errors") {
  const auto n = Density1D::normal(0.0, 1.0);
  const auto left = ioi::truncate_to_region(n, {-kInf, 0.0});
  const auto right = ioi::truncate_to_region(n, {0.0, kInf});
  const std::vector<Interval> two{{-kInf, 0.0}, {0.0, kInf}};
  // probabilities off by more than 1e-9
  CHECK_THROWS_AS(ioi::compose({two, {0.5, 0.6}}, {{left, right}}), ioi::StructuralError);
  // count mismatch
  CHECK_THROWS_AS(ioi::compose({two, {0.5, 0.5}}, {{left}}), ioi::StructuralError);
  // overlapping regions
  CHECK_THROWS_AS(ioi::compose({{{-kInf, 1.0}, {0.0, kInf}}, {0.5, 0.5}}, {{left, right}}),
                  ioi::StructuralError);
  // density not concentrated in its region
  CHECK_THROWS_AS(ioi::compose({two, {0.5, 0.5}}, {{n, right}}), ioi::StructuralError);
  CHECK_THROWS_AS(ioi::compose({{}, {}}, {{}}), ioi::StructuralError);
}

TEST_CASE("pipeline: identity calibration reproduces the fiducial density") {
  ioi::BispatialConfig cfg;
  cfg.epsilon = 0.2;
  cfg.calibration = ioi::identity_calibration;
  cfg.calibration_name = "identity";
  const ioi::DataSummary data{1.0, 16, 1.0};
  const auto r = ioi::ioi_pipeline(data, cfg, ioi::PriorKnowledge::none_or_very_little);
  CHECK(r.p_value.applicable);
  CHECK(ioi::ks_distance(r.density, Density1D::normal(1.0, 1.0 / 16.0)) < 0.005);
}

TEST_CASE("pipeline: region mass below eps follows the calibration") {
  ioi::BispatialConfig cfg;
  cfg.epsilon = 0.1;
  cfg.pre_data_mass = 0.5;
  const double se = 0.2;
  const ioi::DataSummary data{cfg.epsilon + 3.0 * se, 25, 1.0};
  const auto r = ioi::ioi_pipeline(data, cfg, ioi::PriorKnowledge::none_or_very_little);
  const double p0 = 1.0 - oracle::phi_quadrature(3.0);
  // at m = 1/2 the odds rule returns p0 itself
  const double by_hand = (0.5 * p0) / (0.5 * p0 + 0.5 * (1.0 - p0));
  CHECK(std::abs(r.p_value.p0 - p0) < 1e-12);
  CHECK(std::abs(r.region_probability - by_hand) < 1e-12);
  CHECK(std::abs(r.density.mass(-kInf, cfg.epsilon) - by_hand) < 1e-6);
  CHECK(r.partition.regions.size() == 2);

  const ioi::DataSummary weak{cfg.epsilon, 25, 1.0};
  CHECK_THROWS_AS(ioi::ioi_pipeline(weak, cfg, ioi::PriorKnowledge::none_or_very_little),
                  ioi::AnalogyRejected);
  CHECK_THROWS_AS(ioi::ioi_pipeline(data, cfg, ioi::PriorKnowledge::substantive),
                  ioi::AnalogyRejected);
}
