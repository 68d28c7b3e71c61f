#pragma once

#include <limits>
#include <span>
#include <vector>

#include "ioi/bispatial.hpp"
#include "ioi/density.hpp"
#include "ioi/fiducial.hpp"

namespace ioi {

/// Half-open interval (lo, hi]; either end may be infinite.
struct Interval {
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();

  bool contains(double t) const { return t > lo && t <= hi; }
};

/// Disjoint regions of the parameter line, in increasing order, together
/// with the post-data probability of each.
struct RegionPartition {
  std::vector<Interval> regions;
  std::vector<double> probabilities;

  /// Throws StructuralError unless m >= 1, regions are ordered and
  /// disjoint, and the probabilities are >= 0 and sum to 1 within 1e-9.
  void validate() const;
};

/// One density per region, each concentrated (>= 1 - 1e-6) inside it.
struct RegionalDensitySet {
  std::vector<Density1D> densities;
};

inline constexpr double kMinRegionMass = 1e-12;
inline constexpr double kRegionMassTolerance = 1e-6;

/// `d` conditioned on the region: restricted to it and renormalised.
/// The result is `d` itself when the region covers its whole support,
/// otherwise a grid over the intersection. Throws EmptyRegion when the region
/// holds less than 1e-12 of the mass.
Density1D truncate_to_region(const Density1D& d, const Interval& region);

/// p(t) = sum_i prob_i * p_i(t). Returns the single density unchanged when
/// m = 1, otherwise a mixture with one component per non-empty region.
Density1D compose(const RegionPartition& partition, const RegionalDensitySet& set);

/// Both halves of the normal-mean analysis around eps.
struct PipelineResult {
  PValueResult p_value;
  double region_probability = 0.0;  // P(mu <= eps | x)
  RegionPartition partition;
  Density1D density;
};

/// Region probabilities for {mu <= eps} and {mu > eps} from the bispatial
/// assessment, the density inside each region from the fiducial argument,
/// composed into one post-data density.
PipelineResult ioi_pipeline(const DataSummary& data, const BispatialConfig& cfg,
                            PriorKnowledge knowledge);

}  // namespace ioi
