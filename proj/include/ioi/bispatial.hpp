#pragma once

#include <functional>
#include <string>

#include "ioi/fiducial.hpp"

namespace ioi {

/// Largest P value for which the one-sided-P-value analogy may be used.
/// Configurations can lower it but never raise it.
inline constexpr double kApplicabilityThreshold = 0.1;

struct PValueResult {
  double p0 = 1.0;
  bool applicable = false;
};

/// Maps (P value, pre-data mass of [-eps, eps]) to P(mu <= eps | x).
using Calibration = std::function<double(double p0, double pre_data_mass)>;

/// Default calibration: posterior odds of {mu <= eps} equal the pre-data odds
/// times p0 / (1 - p0). Strictly increasing in both arguments and vanishing
/// with p0. This is an engine default, not a derived rule.
double odds_calibration(double p0, double pre_data_mass);

/// Returns p0 itself, i.e. the fiducial mass of {mu <= eps} under the
/// normal-mean model. Composing with it reproduces the fiducial density.
double identity_calibration(double p0, double pre_data_mass);

struct BispatialConfig {
  double epsilon = 0.0;
  double pre_data_mass = 0.5;
  Calibration calibration = odds_calibration;
  std::string calibration_name = "odds-default";
  double applicability_threshold = kApplicabilityThreshold;

  /// epsilon >= 0, pre_data_mass in (0,1), threshold in (0, 0.1], and the
  /// calibration increasing on a scan of (0, threshold). Throws DomainError.
  void validate() const;
};

/// Looks up a calibration by name ("odds-default" or "identity"); throws
/// ValidationError for unknown names.
Calibration calibration_by_name(const std::string& name);

/// p0 = 1 - Phi((mean - eps) / (sigma / sqrt(n))), the one-sided P value for
/// the null hypothesis mu <= eps. applicable = p0 < threshold.
PValueResult one_sided_p_value(const DataSummary& data, double epsilon,
                               double threshold = kApplicabilityThreshold);

/// Post-data probability of {mu <= eps}. Throws AnalogyRejected when the P
/// value is not small enough and DomainError for an invalid config.
double assess_region_probability(const PValueResult& pv,
                                 const BispatialConfig& cfg);

}  // namespace ioi
