#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <utility>
#include <variant>
#include <vector>

namespace ioi {

inline constexpr std::size_t kDefaultGridPoints = 2048;
/// Half-width, in standard deviations, of the grid used to discretise a
/// normal density. The mass beyond it is below 1e-15.
inline constexpr double kNormalGridHalfWidth = 8.0;
inline constexpr double kMassTolerance = 1e-9;

/// A one-dimensional post-data distribution.
///
/// Three forms share one interface:
///  - normal:  N(mean, variance), variance > 0;
///  - grid:    node values on a uniform grid over [lo, hi], read as a
///             piecewise-linear density and integrated by the trapezoid
///             rule. Weights need not be normalised; evaluation divides by
///             the trapezoid mass.
///  - mixture: sum_i w_i p_i(t) over normal/grid components with weights
///             summing to one. This is what composing region-wise densities
///             produces, and it keeps the jump at each region boundary exact.
///
/// Instances are immutable and cheap to copy; the heavy state is shared.
class Density1D {
 public:
  enum class Form { normal, grid, mixture };

  static Density1D normal(double mean, double variance);
  static Density1D grid(double lo, double hi, std::vector<double> weights);
  static Density1D mixture(std::vector<double> weights,
                           std::vector<Density1D> components);

  Form form() const noexcept { return static_cast<Form>(rep_.index()); }

  // normal form
  double mean() const;
  double variance() const;

  // grid form
  double lo() const;
  double hi() const;
  std::size_t n_points() const;
  double spacing() const;
  std::span<const double> weights() const;
  /// Trapezoid mass of the raw weights.
  double grid_mass() const;

  // mixture form
  std::span<const double> mixture_weights() const;
  std::span<const Density1D> components() const;

  double pdf(double t) const;
  double cdf(double t) const;
  /// P(a < X <= b).
  double mass(double a, double b) const { return cdf(b) - cdf(a); }
  /// Smallest t with cdf(t) >= p, for p in (0,1).
  double quantile(double p) const;
  /// Interval holding all but a negligible fraction of the mass; exact for
  /// grids, mean +/- 8 sd for normals.
  std::pair<double, double> support() const;

  /// Maps a single uniform variate u in (0,1) to a draw. For normal and grid
  /// forms this is the inverse CDF; for mixtures u first picks the component
  /// and is then rescaled within it.
  double draw(double u) const;

 private:
  struct Normal {
    double mean;
    double variance;
    double sd;
  };
  struct Grid {
    double lo;
    double hi;
    double h;
    double z;  // trapezoid mass of the raw weights
    std::vector<double> weights;
    std::vector<double> cumulative;  // normalised cdf at the nodes
  };
  struct Mixture {
    std::vector<double> weights;
    std::vector<double> cumulative;
    std::vector<Density1D> components;
    bool ordered_disjoint;
  };

  using Rep = std::variant<Normal, std::shared_ptr<const Grid>,
                           std::shared_ptr<const Mixture>>;

  explicit Density1D(Rep rep) : rep_(std::move(rep)) {}

  double grid_quantile(const Grid& g, double p) const;

  Rep rep_;
};

/// Values drawn from a density together with the seed that produced them.
struct SampleBatch {
  std::vector<double> values;
  std::uint64_t seed = 0;
};

inline double pdf(const Density1D& d, double t) { return d.pdf(t); }
inline double cdf(const Density1D& d, double t) { return d.cdf(t); }
inline double quantile(const Density1D& d, double p) { return d.quantile(p); }

/// Inverse-CDF sampling; identical (density, count, seed) give identical
/// batches.
SampleBatch sample(const Density1D& d, std::size_t count, std::uint64_t seed);

/// Grid form with weights rescaled to unit trapezoid mass. Other forms are
/// returned unchanged.
Density1D normalize(const Density1D& d);

/// Discretise any form onto `n` uniform nodes over its support.
Density1D to_grid(const Density1D& d, std::size_t n = kDefaultGridPoints);

/// Discretise onto `n` uniform nodes over [lo, hi].
Density1D to_grid(const Density1D& d, double lo, double hi,
                  std::size_t n = kDefaultGridPoints);

}  // namespace ioi
