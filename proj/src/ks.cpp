#include "ioi/ks.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "ioi/errors.hpp"

namespace ioi {

double ks_statistic(std::span<const double> samples,
                    const std::function<double(double)>& cdf) {
  if (samples.empty()) throw DomainError("ks_statistic: no samples");
  std::vector<double> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end());
  const auto n = static_cast<double>(sorted.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const double f = cdf(sorted[i]);
    const double lo = static_cast<double>(i) / n;
    const double hi = static_cast<double>(i + 1) / n;
    d = std::max({d, hi - f, f - lo});
  }
  return d;
}

double ks_two_sample(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty()) throw DomainError("ks_two_sample: empty sample");
  std::vector<double> x(a.begin(), a.end());
  std::vector<double> y(b.begin(), b.end());
  std::sort(x.begin(), x.end());
  std::sort(y.begin(), y.end());
  const auto nx = static_cast<double>(x.size());
  const auto ny = static_cast<double>(y.size());
  std::size_t i = 0;
  std::size_t j = 0;
  double d = 0.0;
  while (i < x.size() && j < y.size()) {
    const double t = std::min(x[i], y[j]);
    while (i < x.size() && x[i] <= t) ++i;
    while (j < y.size() && y[j] <= t) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / nx -
                             static_cast<double>(j) / ny));
  }
  return d;
}

double ks_distance(const Density1D& a, const Density1D& b) {
  constexpr int kScan = 4000;
  std::vector<double> points;
  points.reserve(4 * kScan + 8);
  for (const Density1D* d : {&a, &b}) {
    for (int i = 0; i < kScan; ++i) {
      points.push_back(d->quantile((i + 0.5) / kScan));
    }
    const auto [lo, hi] = d->support();
    points.push_back(lo);
    points.push_back(hi);
    if (d->form() == Density1D::Form::mixture) {
      for (const auto& part : d->components()) {
        const auto [plo, phi] = part.support();
        points.push_back(plo);
        points.push_back(phi);
      }
    }
  }
  double dist = 0.0;
  for (double t : points) {
    dist = std::max(dist, std::abs(a.cdf(t) - b.cdf(t)));
  }
  return dist;
}

namespace {

// Thresholds at pooled quantiles, and the 2-D histogram of each sample on
// the lattice they induce.
std::vector<double> lattice(std::span<const double> a, std::span<const double> b,
                            std::size_t resolution) {
  std::vector<double> pooled(a.begin(), a.end());
  pooled.insert(pooled.end(), b.begin(), b.end());
  std::sort(pooled.begin(), pooled.end());
  std::vector<double> cuts;
  cuts.reserve(resolution);
  for (std::size_t k = 1; k <= resolution; ++k) {
    const auto idx = std::min(pooled.size() - 1,
                              k * pooled.size() / (resolution + 1));
    cuts.push_back(pooled[idx]);
  }
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  return cuts;
}

// cum[i][j] = fraction of points with x <= xc[i] and y <= yc[j]; the last
// row/column index (size) stands for +infinity.
std::vector<double> lower_left(std::span<const double> x, std::span<const double> y,
                               const std::vector<double>& xc,
                               const std::vector<double>& yc) {
  const std::size_t nx = xc.size() + 1;
  const std::size_t ny = yc.size() + 1;
  std::vector<double> cell(nx * ny, 0.0);
  for (std::size_t k = 0; k < x.size(); ++k) {
    const auto i = static_cast<std::size_t>(
        std::lower_bound(xc.begin(), xc.end(), x[k]) - xc.begin());
    const auto j = static_cast<std::size_t>(
        std::lower_bound(yc.begin(), yc.end(), y[k]) - yc.begin());
    cell[i * ny + j] += 1.0;
  }
  for (std::size_t i = 0; i < nx; ++i) {
    for (std::size_t j = 0; j < ny; ++j) {
      double v = cell[i * ny + j];
      if (i > 0) v += cell[(i - 1) * ny + j];
      if (j > 0) v += cell[i * ny + j - 1];
      if (i > 0 && j > 0) v -= cell[(i - 1) * ny + j - 1];
      cell[i * ny + j] = v;
    }
  }
  const auto n = static_cast<double>(x.size());
  for (double& v : cell) v /= n;
  return cell;
}

}  // namespace

double ks_two_sample_2d(std::span<const double> x1, std::span<const double> y1,
                        std::span<const double> x2, std::span<const double> y2,
                        std::size_t resolution) {
  if (x1.size() != y1.size() || x2.size() != y2.size() || x1.empty() ||
      x2.empty()) {
    throw DomainError("ks_two_sample_2d: need paired, non-empty samples");
  }
  const auto xc = lattice(x1, x2, resolution);
  const auto yc = lattice(y1, y2, resolution);
  const auto f1 = lower_left(x1, y1, xc, yc);
  const auto f2 = lower_left(x2, y2, xc, yc);
  const std::size_t nx = xc.size() + 1;
  const std::size_t ny = yc.size() + 1;
  const auto at = [ny](const std::vector<double>& f, std::size_t i,
                       std::size_t j) { return f[i * ny + j]; };
  double d = 0.0;
  for (std::size_t i = 0; i + 1 < nx; ++i) {
    for (std::size_t j = 0; j + 1 < ny; ++j) {
      // F(x,y), F(x,inf), F(inf,y) give all four quadrant masses.
      const double ll1 = at(f1, i, j), ll2 = at(f2, i, j);
      const double fx1 = at(f1, i, ny - 1), fx2 = at(f2, i, ny - 1);
      const double fy1 = at(f1, nx - 1, j), fy2 = at(f2, nx - 1, j);
      const double q1[4] = {ll1, fx1 - ll1, fy1 - ll1, 1.0 - fx1 - fy1 + ll1};
      const double q2[4] = {ll2, fx2 - ll2, fy2 - ll2, 1.0 - fx2 - fy2 + ll2};
      for (int q = 0; q < 4; ++q) d = std::max(d, std::abs(q1[q] - q2[q]));
    }
  }
  return d;
}

}  // namespace ioi
