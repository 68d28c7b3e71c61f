#include "ioi/bispatial.hpp"

#include <cmath>
#include <string>

#include "ioi/errors.hpp"
#include "ioi/normal.hpp"

namespace ioi {

double odds_calibration(double p0, double pre_data_mass) {
  const double a = pre_data_mass * p0;
  return a / (a + (1.0 - pre_data_mass) * (1.0 - p0));
}

double identity_calibration(double p0, double /*pre_data_mass*/) { return p0; }

Calibration calibration_by_name(const std::string& name) {
  if (name == "odds-default") return odds_calibration;
  if (name == "identity") return identity_calibration;
  throw ValidationError("unknown calibration '" + name +
                        "' (expected odds-default or identity)");
}

void BispatialConfig::validate() const {
  if (!(epsilon >= 0.0) || !std::isfinite(epsilon)) {
    throw DomainError("bispatial: epsilon must be finite and >= 0");
  }
  if (!(pre_data_mass > 0.0 && pre_data_mass < 1.0)) {
    throw DomainError("bispatial: pre_data_mass must lie in (0,1), got " +
                      std::to_string(pre_data_mass));
  }
  if (!(applicability_threshold > 0.0 &&
        applicability_threshold <= kApplicabilityThreshold)) {
    throw DomainError("bispatial: applicability threshold must lie in (0, 0.1]");
  }
  if (!calibration) throw DomainError("bispatial: no calibration map");
  constexpr int kScan = 16;
  double prev = -1.0;
  for (int i = 1; i <= kScan; ++i) {
    const double p0 = applicability_threshold * i / (kScan + 1);
    const double v = calibration(p0, pre_data_mass);
    if (!(v >= 0.0 && v <= 1.0) || !(v > prev)) {
      throw DomainError("bispatial: calibration '" + calibration_name +
                        "' is not a strictly increasing probability map");
    }
    prev = v;
  }
}

PValueResult one_sided_p_value(const DataSummary& data, double epsilon,
                               double threshold) {
  data.validate();
  const double z = (data.mean - epsilon) / data.standard_error();
  PValueResult r;
  r.p0 = std_normal_sf(z);
  r.applicable = r.p0 < threshold;
  return r;
}

double assess_region_probability(const PValueResult& pv,
                                 const BispatialConfig& cfg) {
  cfg.validate();
  if (!pv.applicable || !(pv.p0 < cfg.applicability_threshold)) {
    throw AnalogyRejected("bispatial analogy rejected: P value " +
                          std::to_string(pv.p0) + " is not below " +
                          std::to_string(cfg.applicability_threshold));
  }
  return cfg.calibration(pv.p0, cfg.pre_data_mass);
}

}  // namespace ioi
