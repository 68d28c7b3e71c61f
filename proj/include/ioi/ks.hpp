#pragma once

#include <functional>
#include <span>

#include "ioi/density.hpp"

namespace ioi {

/// One-sample Kolmogorov-Smirnov statistic sup |F_n(t) - F(t)|.
double ks_statistic(std::span<const double> samples,
                    const std::function<double(double)>& cdf);

inline double ks_statistic(std::span<const double> samples, const Density1D& d) {
  return ks_statistic(samples, [&d](double t) { return d.cdf(t); });
}

/// Two-sample Kolmogorov-Smirnov statistic.
double ks_two_sample(std::span<const double> a, std::span<const double> b);

/// sup_t |F_a(t) - F_b(t)| evaluated on a dense scan built from both
/// densities' quantiles and supports.
double ks_distance(const Density1D& a, const Density1D& b);

/// Two-sample bivariate KS statistic: the largest difference in empirical
/// quadrant probabilities over all four quadrant orientations, with the
/// quadrant corners restricted to a `resolution` x `resolution` lattice of
/// pooled-sample quantiles.
double ks_two_sample_2d(std::span<const double> x1, std::span<const double> y1,
                        std::span<const double> x2, std::span<const double> y2,
                        std::size_t resolution = 128);

}  // namespace ioi
