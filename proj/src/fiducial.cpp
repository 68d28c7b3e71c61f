#include "ioi/fiducial.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "ioi/errors.hpp"

namespace ioi {

double DataSummary::standard_error() const {
  return std::sqrt(sigma2 / static_cast<double>(n));
}

void DataSummary::validate() const {
  if (n < 1) throw DomainError("data summary: n must be >= 1");
  if (!(sigma2 > 0.0) || !std::isfinite(sigma2)) {
    throw DomainError("data summary: sigma2 must be positive and finite");
  }
  if (!std::isfinite(mean)) throw DomainError("data summary: mean must be finite");
}

Pivot normal_mean_pivot() {
  Pivot p{
      Density1D::normal(0.0, 1.0),
      [](double gamma, const DataSummary& data) {
        return data.mean - gamma * data.standard_error();
      },
      PivotDirection::decreasing,
      Pivot::Kind::normal_mean,
  };
  return p;
}

void check_pivot_monotone(const Pivot& pivot, const DataSummary& data) {
  constexpr int kScan = 100;
  constexpr double kTail = 0.5e-4;  // central 99.99%
  const double g0 = pivot.pre_data.quantile(kTail);
  const double g1 = pivot.pre_data.quantile(1.0 - kTail);
  const double sign = pivot.direction == PivotDirection::increasing ? 1.0 : -1.0;
  double prev = pivot.invert(g0, data);
  for (int i = 1; i < kScan; ++i) {
    const double g = g0 + (g1 - g0) * i / (kScan - 1);
    const double cur = pivot.invert(g, data);
    if (!std::isfinite(cur) || !(sign * (cur - prev) > 0.0)) {
      throw StructuralError(
          "pivot inversion is not strictly monotone in the declared direction "
          "near gamma = " + std::to_string(g));
    }
    prev = cur;
  }
}

namespace {

// Solve invert(gamma) = theta for gamma on [g0, g1] by bisection.
double solve_gamma(const Pivot& pivot, const DataSummary& data, double theta,
                   double g0, double g1) {
  const bool up = pivot.direction == PivotDirection::increasing;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (g0 + g1);
    if (mid <= g0 || mid >= g1) break;
    const bool below = pivot.invert(mid, data) < theta;
    if (below == up) {
      g0 = mid;
    } else {
      g1 = mid;
    }
  }
  return 0.5 * (g0 + g1);
}

Density1D numeric_push_forward(const Pivot& pivot, const DataSummary& data) {
  const auto [g_lo, g_hi] = pivot.pre_data.support();
  double t_lo = pivot.invert(g_lo, data);
  double t_hi = pivot.invert(g_hi, data);
  if (t_lo > t_hi) std::swap(t_lo, t_hi);
  if (!(t_lo < t_hi)) {
    throw StructuralError("pivot inversion maps the support to a single point");
  }
  const std::size_t n = kDefaultGridPoints;
  const double step = (t_hi - t_lo) / static_cast<double>(n - 1);
  const double dg = 1e-6 * (g_hi - g_lo);
  std::vector<double> w(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double theta = t_lo + step * static_cast<double>(i);
    const double g = solve_gamma(pivot, data, theta, g_lo, g_hi);
    const double a = std::max(g - dg, g_lo);
    const double b = std::min(g + dg, g_hi);
    const double slope =
        std::abs(pivot.invert(b, data) - pivot.invert(a, data)) / (b - a);
    w[i] = slope > 0.0 ? pivot.pre_data.pdf(g) / slope : 0.0;
  }
  return Density1D::grid(t_lo, t_hi, std::move(w));
}

}  // namespace

Density1D fiducial_density(const Pivot& pivot, const DataSummary& data,
                           PriorKnowledge knowledge) {
  if (knowledge == PriorKnowledge::substantive) {
    throw AnalogyRejected(
        "fiducial argument blocked: substantive pre-data knowledge about the "
        "parameter means observing the data may inform the pivot");
  }
  data.validate();
  if (!pivot.invert) throw StructuralError("pivot has no inversion map");
  if (pivot.kind == Pivot::Kind::normal_mean) {
    return Density1D::normal(data.mean, data.sigma2 / static_cast<double>(data.n));
  }
  check_pivot_monotone(pivot, data);
  return numeric_push_forward(pivot, data);
}

double fiducial_region_probability(const Density1D& d, double threshold,
                                   Side side) {
  const double below = d.cdf(threshold);
  return side == Side::leq ? below : 1.0 - below;
}

}  // namespace ioi
