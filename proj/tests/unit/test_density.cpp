#include <doctest.h>

#include <cmath>
#include <cstring>
#include <random>

#include "ioi/density.hpp"
#include "ioi/density_json.hpp"
#include "ioi/errors.hpp"
#include "ioi/ks.hpp"
#include "ioi/normal.hpp"
#include "oracles/oracles.hpp"

using ioi::Density1D;

namespace {

Density1D uniform01(std::size_t n = 1001) {
  return Density1D::grid(0.0, 1.0, std::vector<double>(n, 1.0));
}

// Random non-degenerate grid: bumps plus noise, some exact zeros.
Density1D random_grid(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double lo = -5.0 + 10.0 * u(rng);
  const double hi = lo + 0.1 + 5.0 * u(rng);
  const std::size_t n = 2 + static_cast<std::size_t>(500 * u(rng));
  std::vector<double> w(n);
  for (auto& x : w) x = u(rng) < 0.1 ? 0.0 : u(rng) * 1e3;
  w[n / 2] += 1.0;
  return Density1D::grid(lo, hi, std::move(w));
}

}  // namespace

TEST_CASE("construction validates invariants") {
  CHECK_THROWS_AS(Density1D::normal(0.0, 0.0), ioi::StructuralError);
  CHECK_THROWS_AS(Density1D::normal(0.0, -1.0), ioi::StructuralError);
  CHECK_THROWS_AS(Density1D::grid(1.0, 0.0, {1.0, 1.0}), ioi::StructuralError);
  CHECK_THROWS_AS(Density1D::grid(0.0, 1.0, {1.0}), ioi::StructuralError);
  CHECK_THROWS_AS(Density1D::grid(0.0, 1.0, {0.0, 0.0}), ioi::StructuralError);
  CHECK_THROWS_AS(Density1D::grid(0.0, 1.0, {1.0, -1.0}), ioi::StructuralError);
  CHECK_THROWS_AS(Density1D::mixture({0.5, 0.4}, {uniform01(), uniform01()}),
                  ioi::StructuralError);
}

TEST_CASE("pdf examples") {
  const auto n01 = Density1D::normal(0.0, 1.0);
  CHECK(std::abs(n01.pdf(0.0) - 0.398942) < 1e-6);
  CHECK(std::abs(n01.pdf(0.0) - 1.0 / std::sqrt(2.0 * M_PI)) < 1e-12);
  CHECK(uniform01().pdf(2.0) == 0.0);
  CHECK(uniform01().pdf(-0.1) == 0.0);

  const auto d = Density1D::normal(10.0, 0.16);
  double best_t = 8.0;
  for (double t = 8.0; t <= 12.0; t += 0.001) {
    if (d.pdf(t) > d.pdf(best_t)) best_t = t;
  }
  CHECK(std::abs(best_t - 10.0) < 1e-3);
  CHECK(d.pdf(10.0) >= d.pdf(best_t));
}

TEST_CASE("normal pdf matches the closed form") {
  const auto d = Density1D::normal(-3.0, 2.5);
  for (double t = -10.0; t < 4.0; t += 0.13) {
    const double z = (t + 3.0) / std::sqrt(2.5);
    CHECK(std::abs(d.pdf(t) - oracle::normal_pdf(z) / std::sqrt(2.5)) < 1e-12);
  }
}

TEST_CASE("quantile examples") {
  CHECK(Density1D::normal(0.0, 1.0).quantile(0.5) == 0.0);
  // oracle::bisect on the quadrature cdf gives 10.7839855938
  CHECK(std::abs(Density1D::normal(10.0, 0.16).quantile(0.975) - (10.0 + 1.96 * 0.4)) <
        1e-3);
  CHECK(std::abs(Density1D::normal(10.0, 0.16).quantile(0.975) - 10.7839855938) < 1e-9);
  const auto u = uniform01();
  CHECK(std::abs(u.quantile(0.25) - 0.25) <= u.spacing());
  CHECK_THROWS_AS(u.quantile(0.0), ioi::DomainError);
  CHECK_THROWS_AS(u.quantile(1.0), ioi::DomainError);
}

TEST_CASE("cdf/quantile round trip") {
  const auto n = Density1D::normal(2.0, 3.0);
  std::mt19937_64 rng(11);
  const auto g = random_grid(rng);
  for (int i = 1; i <= 99; ++i) {
    const double p = i / 100.0;
    CHECK(std::abs(n.cdf(n.quantile(p)) - p) <= 1e-6);
    // exact inversion of the piecewise-quadratic cdf, far inside one cell
    CHECK(std::abs(g.cdf(g.quantile(p)) - p) <= 1e-9);
  }
}

TEST_CASE("normalization: trapezoid mass is one after normalize") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    const auto g = ioi::normalize(random_grid(rng));
    double mass = 0.0;
    const auto w = g.weights();
    for (std::size_t i = 0; i + 1 < w.size(); ++i) {
      mass += 0.5 * g.spacing() * (w[i] + w[i + 1]);
    }
    CHECK(std::abs(mass - 1.0) < 1e-9);
    CHECK(g.cdf(g.hi()) == 1.0);
    CHECK(g.cdf(g.lo()) == 0.0);
  }
}

TEST_CASE("to_grid of a normal keeps the mass and the shape") {
  const auto n = Density1D::normal(1.0, 4.0);
  const auto g = ioi::to_grid(n);
  CHECK(g.n_points() == ioi::kDefaultGridPoints);
  CHECK(g.lo() == doctest::Approx(1.0 - 16.0));
  CHECK(g.hi() == doctest::Approx(1.0 + 16.0));
  CHECK(ioi::ks_distance(n, g) < 1e-5);
}

TEST_CASE("sampling: KS against the analytic cdf") {
  const auto batch = ioi::sample(Density1D::normal(0.0, 1.0), 100000, 42);
  CHECK(batch.seed == 42);
  CHECK(batch.values.size() == 100000);
  const double d = oracle::ks(batch.values, oracle::phi_quadrature);
  CHECK(d < 0.01);
  CHECK(ioi::ks_statistic(batch.values, ioi::std_normal_cdf) == doctest::Approx(d));
}

TEST_CASE("sampling: grid and mixture draws follow their cdf") {
  std::mt19937_64 rng(5);
  const auto g = random_grid(rng);
  const auto batch = ioi::sample(g, 100000, 9);
  CHECK(ioi::ks_statistic(batch.values, g) < 0.01);

  const auto m = Density1D::mixture(
      {0.3, 0.7}, {Density1D::normal(-2.0, 1.0), Density1D::normal(3.0, 0.5)});
  const auto mb = ioi::sample(m, 100000, 10);
  CHECK(ioi::ks_statistic(mb.values, m) < 0.01);
}

TEST_CASE("sampling: point-like grid stays inside the hot cell") {
  // all mass on the node at 3.0; the density is the triangle on its two cells
  std::vector<double> w(41, 0.0);
  w[20] = 1.0;
  const auto g = Density1D::grid(1.0, 5.0, w);
  const double h = g.spacing();
  const auto batch = ioi::sample(g, 10, 7);
  for (double v : batch.values) {
    CHECK(v > 3.0 - h);
    CHECK(v < 3.0 + h);
  }
}

TEST_CASE("sampling: determinism and errors") {
  const auto d = Density1D::normal(5.0, 4.0);
  const auto a = ioi::sample(d, 1000, 123);
  const auto b = ioi::sample(d, 1000, 123);
  REQUIRE(a.values.size() == b.values.size());
  CHECK(std::memcmp(a.values.data(), b.values.data(), a.values.size() * sizeof(double)) ==
        0);
  const auto c = ioi::sample(d, 1000, 124);
  CHECK(c.values != a.values);
  CHECK_THROWS_AS(ioi::sample(d, 0, 1), ioi::DomainError);
}

TEST_CASE("mixture of disjoint grids: pdf, cdf, quantile") {
  const auto left = Density1D::grid(0.0, 1.0, {1.0, 1.0});
  const auto right = Density1D::grid(2.0, 4.0, {1.0, 1.0, 1.0});
  const auto m = Density1D::mixture({0.3, 0.7}, {left, right});
  CHECK(m.pdf(0.5) == doctest::Approx(0.3));
  CHECK(m.pdf(3.0) == doctest::Approx(0.35));
  CHECK(m.pdf(1.5) == 0.0);
  CHECK(m.cdf(1.5) == doctest::Approx(0.3));
  CHECK(m.quantile(0.15) == doctest::Approx(0.5));
  CHECK(m.quantile(0.65) == doctest::Approx(3.0));
}

TEST_CASE("mixture of overlapping normals: quantile by bisection") {
  const auto m = Density1D::mixture(
      {0.5, 0.5}, {Density1D::normal(-1.0, 1.0), Density1D::normal(1.0, 1.0)});
  CHECK(std::abs(m.quantile(0.5)) < 1e-9);
  for (double p : {0.01, 0.3, 0.77, 0.99}) {
    CHECK(std::abs(m.cdf(m.quantile(p)) - p) < 1e-12);
  }
}

TEST_CASE("JSON: grid form round-trips bit-exactly") {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 25; ++trial) {
    const auto g = random_grid(rng);
    const auto text = ioi::density_to_json(g).dump();
    const auto back = ioi::density_from_json(nlohmann::json::parse(text));
    REQUIRE(back.form() == Density1D::Form::grid);
    const double ends[] = {g.lo(), g.hi()};
    const double back_ends[] = {back.lo(), back.hi()};
    CHECK(std::memcmp(ends, back_ends, sizeof ends) == 0);
    REQUIRE(back.weights().size() == g.weights().size());
    CHECK(std::memcmp(back.weights().data(), g.weights().data(),
                      g.weights().size() * sizeof(double)) == 0);
    CHECK(ioi::density_to_json(back).dump() == text);
  }
}

TEST_CASE("JSON: normal and mixture forms") {
  const auto n = Density1D::normal(10.0, 0.16);
  const auto j = ioi::density_to_json(n);
  CHECK(j.dump() == R"({"form":"normal","mean":10.0,"variance":0.16})");
  const auto m = Density1D::mixture({0.25, 0.75}, {n, uniform01(5)});
  const auto back = ioi::density_from_json(ioi::density_to_json(m));
  CHECK(back.form() == Density1D::Form::mixture);
  CHECK(back.cdf(0.5) == m.cdf(0.5));
  CHECK_THROWS_AS(ioi::density_from_json(nlohmann::json{{"form", "cauchy"}}),
                  ioi::ValidationError);
  CHECK_THROWS_AS(ioi::density_from_json(
                      nlohmann::json{{"form", "normal"}, {"mean", 0}, {"variance", -1}}),
                  ioi::StructuralError);
}
