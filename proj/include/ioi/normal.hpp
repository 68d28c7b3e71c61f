#pragma once

namespace ioi {

inline constexpr double kInvSqrt2Pi = 0.398942280401432677939946059934;

/// Standard normal density.
double std_normal_pdf(double z);

/// Standard normal distribution function Phi(z). Throws DomainError for
/// non-finite z.
double std_normal_cdf(double z);

/// Upper tail 1 - Phi(z), evaluated without cancellation.
double std_normal_sf(double z);

/// Inverse of Phi for p in (0,1) (Wichura's AS241, ~1e-16 relative).
double std_normal_quantile(double p);

}  // namespace ioi
