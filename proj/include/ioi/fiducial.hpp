#pragma once

#include <cstdint>
#include <functional>

#include "ioi/density.hpp"

namespace ioi {

/// Sufficient summary of a normal sample with known variance.
struct DataSummary {
  double mean = 0.0;       // sample mean
  std::int64_t n = 1;      // sample size
  double sigma2 = 1.0;     // known variance of one observation

  /// Standard error sigma / sqrt(n).
  double standard_error() const;
  /// Throws DomainError unless n >= 1, sigma2 > 0 and mean is finite.
  void validate() const;
};

enum class PivotDirection { increasing, decreasing };

/// What was known about the parameter before the data. Fiducial inversion is
/// only admissible when this is none_or_very_little.
enum class PriorKnowledge { none_or_very_little, substantive };

/// A primary random variable: its pre-data distribution plus the map that
/// recovers the parameter from a pivot value and the data.
struct Pivot {
  enum class Kind { normal_mean, general };

  Density1D pre_data;
  std::function<double(double gamma, const DataSummary& data)> invert;
  PivotDirection direction = PivotDirection::increasing;
  Kind kind = Kind::general;
};

/// Gamma = (mean - mu) / (sigma / sqrt(n)) ~ N(0,1); inverted as
/// mu = mean - gamma * sigma / sqrt(n), which is decreasing in gamma.
Pivot normal_mean_pivot();

/// Checks that `pivot.invert(., data)` moves strictly in the declared
/// direction over 100 points spanning the central 99.99% of the pre-data
/// distribution. Throws StructuralError otherwise.
void check_pivot_monotone(const Pivot& pivot, const DataSummary& data);

/// Post-data density of the parameter obtained by letting the pivot keep its
/// pre-data distribution and pushing it through the inversion.
///
/// The normal-mean pivot yields N(mean, sigma2 / n) exactly. Any other pivot
/// is transformed numerically onto a uniform grid.
///
/// Throws AnalogyRejected when `knowledge` is substantive and
/// StructuralError for a non-monotone pivot.
Density1D fiducial_density(const Pivot& pivot, const DataSummary& data,
                           PriorKnowledge knowledge);

enum class Side { leq, gt };

/// Mass of {theta <= threshold} or {theta > threshold} under `d`.
double fiducial_region_probability(const Density1D& d, double threshold,
                                   Side side);

}  // namespace ioi
