#include "ioi/bayes.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "ioi/errors.hpp"

namespace ioi {

LikelihoodKernel normal_mean_likelihood() {
  return {[](double theta, const DataSummary& data) {
    const double r = data.mean - theta;
    return -static_cast<double>(data.n) * r * r / (2.0 * data.sigma2);
  }};
}

Density1D conjugate_normal_update(const NormalPrior& prior,
                                  const DataSummary& data) {
  data.validate();
  if (!(prior.variance > 0.0)) {
    throw DomainError("normal prior: variance must be positive");
  }
  const double prior_precision = 1.0 / prior.variance;
  const double data_precision = static_cast<double>(data.n) / data.sigma2;
  const double precision = prior_precision + data_precision;
  const double mean =
      (prior_precision * prior.mean + data_precision * data.mean) / precision;
  return Density1D::normal(mean, 1.0 / precision);
}

Density1D grid_bayes_update(const Density1D& prior, const LikelihoodKernel& lik,
                            const DataSummary& data) {
  if (prior.form() != Density1D::Form::grid) {
    throw StructuralError("grid_bayes_update: prior must be in grid form");
  }
  data.validate();
  const std::size_t n = prior.n_points();
  const double lo = prior.lo();
  const double h = prior.spacing();
  const auto w = prior.weights();
  const double z = prior.grid_mass();

  constexpr double kMinusInf = -std::numeric_limits<double>::infinity();
  std::vector<double> logw(n, kMinusInf);
  double top = kMinusInf;
  for (std::size_t i = 0; i < n; ++i) {
    if (w[i] <= 0.0) continue;
    const double theta = i + 1 == n ? prior.hi() : lo + h * static_cast<double>(i);
    const double ll = lik.log_likelihood(theta, data);
    if (std::isnan(ll)) {
      throw DomainError("grid_bayes_update: log-likelihood is NaN");
    }
    logw[i] = std::log(w[i] / z) + ll;
    top = std::max(top, logw[i]);
  }
  if (!(top >= kLogUnderflow)) {
    throw DegenerateUpdate(
        "grid_bayes_update: every posterior weight underflows; the "
        "likelihood is negligible across the prior's support");
  }
  std::vector<double> post(n);
  for (std::size_t i = 0; i < n; ++i) {
    post[i] = logw[i] == kMinusInf ? 0.0 : std::exp(logw[i] - top);
  }
  return normalize(Density1D::grid(lo, prior.hi(), std::move(post)));
}

Density1D uniform_grid_prior(double lo, double hi, std::size_t n) {
  return normalize(Density1D::grid(lo, hi, std::vector<double>(n, 1.0)));
}

}  // namespace ioi
