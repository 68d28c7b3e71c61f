#pragma once

#include <functional>

#include "ioi/density.hpp"
#include "ioi/fiducial.hpp"

namespace ioi {

struct NormalPrior {
  double mean = 0.0;
  double variance = 1.0;
};

struct LikelihoodKernel {
  std::function<double(double theta, const DataSummary& data)> log_likelihood;
};

/// log p(data | mu) for a normal mean with known variance, up to a constant:
/// -n (mean - mu)^2 / (2 sigma2).
LikelihoodKernel normal_mean_likelihood();

/// Posterior precision 1/v0 + n/sigma2, mean the precision-weighted average
/// of the prior mean and the sample mean.
Density1D conjugate_normal_update(const NormalPrior& prior,
                                  const DataSummary& data);

/// Unnormalised log-weights below this are treated as underflowed.
inline constexpr double kLogUnderflow = -745.0;

/// Prior (grid form) times likelihood, renormalised on the same grid.
///
/// Log-space accumulation with max subtraction before exponentiating. Throws
/// DegenerateUpdate when every unnormalised log-weight is below -745, and
/// StructuralError when `prior` is not a grid.
Density1D grid_bayes_update(const Density1D& prior, const LikelihoodKernel& lik,
                            const DataSummary& data);

/// Uniform prior on [lo, hi] with `n` nodes.
Density1D uniform_grid_prior(double lo, double hi,
                             std::size_t n = kDefaultGridPoints);

}  // namespace ioi
