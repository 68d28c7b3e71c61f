#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ioi/bayes.hpp"
#include "ioi/density.hpp"
#include "ioi/fiducial.hpp"

namespace ioi {

/// Which inference method produced a full conditional.
enum class Method { bayes, fiducial, bispatial, other };

std::string to_string(Method m);
Method method_from_string(const std::string& s);

/// Full conditional p(theta_j | theta_-j, x). The argument holds the k - 1
/// other coordinates in index order.
using ConditionalKernel = std::function<Density1D(std::span<const double> others)>;

struct ConditionalSet {
  std::vector<ConditionalKernel> kernels;
  std::vector<Method> tags;

  std::size_t k() const { return kernels.size(); }
  /// k >= 2 and one tag per kernel. Throws StructuralError.
  void validate() const;
};

/// Order in which a Gibbs iteration visits the coordinates.
class ScanOrder {
 public:
  enum class Kind { fixed_sweep, random_scan };

  /// Deterministic sweep; `order` is a 0-based permutation of 0..k-1.
  static ScanOrder sweep(std::vector<std::size_t> order);
  /// Each iteration makes k updates at coordinates drawn uniformly from a
  /// stream seeded with `seed`.
  static ScanOrder random(std::uint64_t seed);

  Kind kind() const { return kind_; }
  const std::vector<std::size_t>& order() const { return order_; }
  std::uint64_t seed() const { return seed_; }
  /// "sweep(1,2)" / "random(seed=7)", with 1-based coordinates.
  std::string describe() const;
  void validate(std::size_t k) const;

 private:
  Kind kind_ = Kind::fixed_sweep;
  std::vector<std::size_t> order_;
  std::uint64_t seed_ = 0;
};

struct ChainResult {
  std::size_t k = 0;
  std::size_t iterations = 0;
  std::size_t burn_in = 0;
  std::uint64_t seed = 0;
  ScanOrder scan;
  /// Row-major iterations x k; row t is the state after iteration t.
  std::vector<double> draws;

  double at(std::size_t iteration, std::size_t j) const {
    return draws[iteration * k + j];
  }
  /// Coordinate j over the post-burn-in iterations.
  std::vector<double> column(std::size_t j) const;
};

/// 5% of the iterations, at least 1000.
std::size_t default_burn_in(std::size_t iterations);

/// Runs the sampler. Every update draws from the kernel by inverse CDF
/// using one uniform from a stream seeded with `seed`. Throws ChainAborted
/// (with the iteration index) when a kernel fails or yields a non-finite
/// draw, and DomainError for bad arguments.
ChainResult gibbs_run(const ConditionalSet& set, const ScanOrder& scan,
                      std::span<const double> init, std::size_t iterations,
                      std::size_t burn_in, std::uint64_t seed);

/// Working rectangle for k = 2: {lo1, hi1, lo2, hi2}.
struct Box {
  std::array<double, 2> lo{};
  std::array<double, 2> hi{};
};

enum class Compatibility { compatible, approximately_compatible, incompatible };

std::string to_string(Compatibility c);

/// Residual threshold for analytic kernels.
inline constexpr double kAnalyticCompatTolerance = 1e-6;
/// Residual threshold for numerically derived kernels.
inline constexpr double kNumericCompatTolerance = 1e-3;
/// Residuals below this (and above the tolerance) are "approximately
/// compatible".
inline constexpr double kApproxCompatTolerance = 0.05;

struct CompatibilityResult {
  Compatibility verdict = Compatibility::incompatible;
  /// Sup-norm of log r after removing the best additive row + column fit.
  double residual = 0.0;
  std::size_t grid_n = 0;
  Box box;
  /// Only for a compatible verdict: joint density on the grid, row-major
  /// with theta_1 along rows, normalised to unit trapezoid mass.
  std::vector<double> joint;
  /// Sup distance between the joint's grid conditionals and the inputs
  /// restricted to the box (compatible verdict only).
  double conditional_error = 0.0;
};

/// Decides whether two full conditionals admit a joint distribution by
/// testing whether log p(t1|t2) - log p(t2|t1) is a sum f(t1) + g(t2) on a
/// grid_n x grid_n lattice over `box`. A kernel that is zero on an entire
/// grid line raises UndefinedRatio; isolated zeros make the ratio
/// non-factorisable and yield an infinite residual.
CompatibilityResult check_compatibility(
    const ConditionalSet& set, const Box& box, std::size_t grid_n,
    double tolerance = kAnalyticCompatTolerance);

struct ScanSensitivity {
  std::vector<std::string> scans;
  /// Pairwise maxima over coordinates of the two-sample KS statistic
  /// between post-burn-in marginals; symmetric, zero diagonal.
  std::vector<double> marginal_ks;
  /// Pairwise maxima over coordinate pairs of the bivariate two-sample KS
  /// statistic between post-burn-in draws.
  std::vector<double> joint_ks;

  std::size_t size() const { return scans.size(); }
  double marginal(std::size_t a, std::size_t b) const {
    return marginal_ks[a * size() + b];
  }
  double joint(std::size_t a, std::size_t b) const {
    return joint_ks[a * size() + b];
  }
  double max_marginal() const;
  double max_joint() const;
  /// Largest entry of either matrix.
  double max_ks() const;
};

/// Runs one chain per scan order (in parallel, all with the same seed and
/// initial state) and compares the resulting empirical distributions.
ScanSensitivity scan_sensitivity(const ConditionalSet& set,
                                 std::span<const ScanOrder> scans,
                                 std::span<const double> init,
                                 std::size_t iterations, std::size_t burn_in,
                                 std::uint64_t seed);

/// How one coordinate of a two-parameter normal model is inferred.
///
/// Coordinate j has data whose mean is theta_j + coupling * theta_other, so
/// given the other coordinate it is a normal mean with known variance. A
/// fiducial assignment yields N(mean - coupling * other, sigma2 / n); a
/// Bayesian assignment updates `prior` with the shifted data.
struct ParameterAssignment {
  Method method = Method::fiducial;
  DataSummary data;
  double coupling = 0.0;
  std::optional<NormalPrior> prior;
  PriorKnowledge knowledge = PriorKnowledge::none_or_very_little;
};

/// Builds the two kernels, delegating to the fiducial and Bayes engines, and
/// probes each once at the origin. A blocked fiducial argument surfaces
/// here as AnalogyRejected; unsupported methods raise ValidationError.
ConditionalSet build_conditional_set(std::span<const ParameterAssignment> spec);

}  // namespace ioi
