#include "ioi/composition.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ioi/errors.hpp"

namespace ioi {

void RegionPartition::validate() const {
  if (regions.empty()) throw StructuralError("partition: need at least one region");
  if (regions.size() != probabilities.size()) {
    throw StructuralError("partition: one probability per region required");
  }
  double total = 0.0;
  for (std::size_t i = 0; i < regions.size(); ++i) {
    const auto& r = regions[i];
    if (std::isnan(r.lo) || std::isnan(r.hi) || !(r.lo < r.hi)) {
      throw StructuralError("partition: region " + std::to_string(i) +
                            " is empty or malformed");
    }
    if (i > 0 && regions[i - 1].hi > r.lo) {
      throw StructuralError("partition: regions must be ordered and disjoint");
    }
    const double p = probabilities[i];
    if (!(p >= 0.0) || !std::isfinite(p)) {
      throw StructuralError("partition: probabilities must be >= 0");
    }
    total += p;
  }
  if (std::abs(total - 1.0) > kMassTolerance) {
    throw StructuralError("partition: probabilities sum to " +
                          std::to_string(total) + ", expected 1");
  }
}

namespace {

Density1D truncate_simple(const Density1D& d, const Interval& region) {
  const auto [s_lo, s_hi] = d.support();
  if (region.lo <= s_lo && region.hi >= s_hi) return d;
  const double lo = std::max(s_lo, region.lo);
  const double hi = std::min(s_hi, region.hi);
  if (!(lo < hi)) {
    throw EmptyRegion("truncate_to_region: region misses the density's support");
  }
  return to_grid(d, lo, hi, std::max(kDefaultGridPoints,
                                     d.form() == Density1D::Form::grid
                                         ? d.n_points()
                                         : std::size_t{0}));
}

}  // namespace

Density1D truncate_to_region(const Density1D& d, const Interval& region) {
  const double inside = d.mass(region.lo, region.hi);
  if (!(inside >= kMinRegionMass)) {
    throw EmptyRegion("truncate_to_region: region (" + std::to_string(region.lo) +
                      ", " + std::to_string(region.hi) + "] holds mass " +
                      std::to_string(inside));
  }
  if (d.form() != Density1D::Form::mixture) return truncate_simple(d, region);

  const auto w = d.mixture_weights();
  const auto parts = d.components();
  std::vector<double> weights;
  std::vector<Density1D> kept;
  double total = 0.0;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    const double m = w[i] * parts[i].mass(region.lo, region.hi);
    if (!(m >= kMinRegionMass * inside)) continue;
    weights.push_back(m);
    kept.push_back(truncate_simple(parts[i], region));
    total += m;
  }
  if (kept.size() == 1) return kept.front();
  for (double& x : weights) x /= total;
  return Density1D::mixture(std::move(weights), std::move(kept));
}

Density1D compose(const RegionPartition& partition, const RegionalDensitySet& set) {
  partition.validate();
  if (set.densities.size() != partition.regions.size()) {
    throw StructuralError("compose: " + std::to_string(set.densities.size()) +
                          " densities for " +
                          std::to_string(partition.regions.size()) + " regions");
  }
  for (std::size_t i = 0; i < set.densities.size(); ++i) {
    const auto& r = partition.regions[i];
    const double inside = set.densities[i].mass(r.lo, r.hi);
    if (inside < 1.0 - kRegionMassTolerance) {
      throw StructuralError("compose: density " + std::to_string(i) +
                            " has only " + std::to_string(inside) +
                            " of its mass inside its region");
    }
  }
  if (set.densities.size() == 1) return set.densities.front();
  return Density1D::mixture(partition.probabilities, set.densities);
}

PipelineResult ioi_pipeline(const DataSummary& data, const BispatialConfig& cfg,
                            PriorKnowledge knowledge) {
  cfg.validate();
  const auto fiducial = fiducial_density(normal_mean_pivot(), data, knowledge);
  const auto pv = one_sided_p_value(data, cfg.epsilon, cfg.applicability_threshold);
  const double below = assess_region_probability(pv, cfg);

  RegionPartition partition{
      {Interval{-std::numeric_limits<double>::infinity(), cfg.epsilon},
       Interval{cfg.epsilon, std::numeric_limits<double>::infinity()}},
      {below, 1.0 - below}};
  RegionalDensitySet set;
  for (const auto& r : partition.regions) {
    set.densities.push_back(truncate_to_region(fiducial, r));
  }
  auto density = compose(partition, set);
  return PipelineResult{pv, below, std::move(partition), std::move(density)};
}

}  // namespace ioi
