#pragma once

// Reference computations used only by the tests. Nothing here calls into the
// engine code paths it is used to check.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <vector>

namespace oracle {

inline double normal_pdf(double z) {
  return std::exp(-0.5 * z * z) / std::sqrt(2.0 * std::numbers::pi);
}

namespace detail {
inline double simpson(const std::function<double(double)>& f, double a, double b,
                      double fa, double fm, double fb, double whole, double eps,
                      int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  if (depth <= 0 || std::abs(left + right - whole) <= 15.0 * eps) {
    return left + right + (left + right - whole) / 15.0;
  }
  return simpson(f, a, m, fa, flm, fm, left, eps / 2.0, depth - 1) +
         simpson(f, m, b, fm, frm, fb, right, eps / 2.0, depth - 1);
}
}  // namespace detail

/// Adaptive Simpson quadrature of f over [a, b].
inline double integrate(const std::function<double(double)>& f, double a, double b,
                        double eps = 1e-14) {
  const double fa = f(a);
  const double fb = f(b);
  const double fm = f(0.5 * (a + b));
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return detail::simpson(f, a, b, fa, fm, fb, whole, eps, 50);
}

/// Phi(z) by quadrature of the standard normal density.
inline double phi_quadrature(double z) {
  const double half = integrate(normal_pdf, 0.0, std::abs(z));
  return z >= 0 ? 0.5 + half : 0.5 - half;
}

/// Smallest x in [lo, hi] with f(x) >= target, for nondecreasing f.
inline double bisect(const std::function<double(double)>& f, double target,
                     double lo, double hi) {
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (f(mid) >= target ? hi : lo) = mid;
  }
  return 0.5 * (lo + hi);
}

/// Sup |F1 - F2| of two cdfs over a uniform scan.
inline double sup_cdf_gap(const std::function<double(double)>& f1,
                          const std::function<double(double)>& f2, double lo,
                          double hi, int points = 20001) {
  double d = 0.0;
  for (int i = 0; i < points; ++i) {
    const double t = lo + (hi - lo) * i / (points - 1);
    d = std::max(d, std::abs(f1(t) - f2(t)));
  }
  return d;
}

/// Plain one-sample KS statistic against a cdf.
inline double ks(std::vector<double> xs, const std::function<double(double)>& cdf) {
  std::sort(xs.begin(), xs.end());
  const double n = static_cast<double>(xs.size());
  double d = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double f = cdf(xs[i]);
    d = std::max({d, (i + 1) / n - f, f - i / n});
  }
  return d;
}

/// Bivariate normal density with unit variances and correlation rho.
inline double bvn_pdf(double x, double y, double rho) {
  const double q = (x * x - 2.0 * rho * x * y + y * y) / (1.0 - rho * rho);
  return std::exp(-0.5 * q) / (2.0 * std::numbers::pi * std::sqrt(1.0 - rho * rho));
}

/// Squared residual of the equations a zero-mean Gaussian joint
/// (variances v1, v2, correlation r) must satisfy to have the conditionals
/// t1 | t2 ~ N(s1 t2, c1) and t2 | t1 ~ N(s2 t1, c2).
inline double gaussian_consistency_residual(double v1, double v2, double r,
                                            double s1, double c1, double s2,
                                            double c2) {
  const double e1 = r * std::sqrt(v1 / v2) - s1;
  const double e2 = r * std::sqrt(v2 / v1) - s2;
  const double e3 = v1 * (1.0 - r * r) - c1;
  const double e4 = v2 * (1.0 - r * r) - c2;
  return e1 * e1 + e2 * e2 + e3 * e3 + e4 * e4;
}

/// Brute-force minimum of gaussian_consistency_residual over a grid of
/// variances in (0, vmax] and correlations in (-1, 1).
inline double min_gaussian_consistency_residual(double s1, double c1, double s2,
                                                double c2, double vmax = 10.0,
                                                int steps = 400) {
  double best = std::numeric_limits<double>::infinity();
  for (int a = 1; a <= steps; ++a) {
    const double v1 = vmax * a / steps;
    for (int b = 1; b <= steps; ++b) {
      const double v2 = vmax * b / steps;
      for (int c = -steps + 1; c < steps; ++c) {
        const double r = static_cast<double>(c) / steps;
        best = std::min(best, gaussian_consistency_residual(v1, v2, r, s1, c1, s2, c2));
      }
    }
  }
  return best;
}

/// Exact invariant joint of a two-coordinate deterministic-sweep Gibbs
/// sampler on an n x n lattice over [lo, hi]^2, found by power iteration of
/// the discretised transition kernel.
///
/// k1(x, y) = density of t1 = x given t2 = y, k2(y, x) = density of t2 = y
/// given t1 = x. `first` is 0 for the sweep (1,2) and 1 for (2,1). Returns
/// the row-major joint (t1 along rows) of the recorded states.
inline std::vector<double> sweep_invariant_joint(
    const std::function<double(double, double)>& k1,
    const std::function<double(double, double)>& k2, double lo, double hi,
    std::size_t n, int first, int iterations = 2000) {
  std::vector<double> g(n);
  for (std::size_t i = 0; i < n; ++i) g[i] = lo + (hi - lo) * i / (n - 1.0);
  // a[j][i] = P(t1 = g_i | t2 = g_j), b[i][j] = P(t2 = g_j | t1 = g_i)
  std::vector<double> a(n * n), b(n * n);
  for (std::size_t j = 0; j < n; ++j) {
    double z = 0.0;
    for (std::size_t i = 0; i < n; ++i) z += a[j * n + i] = k1(g[i], g[j]);
    for (std::size_t i = 0; i < n; ++i) a[j * n + i] /= z;
  }
  for (std::size_t i = 0; i < n; ++i) {
    double z = 0.0;
    for (std::size_t j = 0; j < n; ++j) z += b[i * n + j] = k2(g[j], g[i]);
    for (std::size_t j = 0; j < n; ++j) b[i * n + j] /= z;
  }
  std::vector<double> joint(n * n, 1.0 / (n * n)), next(n * n);
  const auto update1 = [&] {  // redraw t1 given t2
    for (std::size_t j = 0; j < n; ++j) {
      double m = 0.0;
      for (std::size_t i = 0; i < n; ++i) m += joint[i * n + j];
      for (std::size_t i = 0; i < n; ++i) next[i * n + j] = m * a[j * n + i];
    }
    joint.swap(next);
  };
  const auto update2 = [&] {  // redraw t2 given t1
    for (std::size_t i = 0; i < n; ++i) {
      double m = 0.0;
      for (std::size_t j = 0; j < n; ++j) m += joint[i * n + j];
      for (std::size_t j = 0; j < n; ++j) next[i * n + j] = m * b[i * n + j];
    }
    joint.swap(next);
  };
  for (int it = 0; it < iterations; ++it) {
    if (first == 0) {
      update1();
      update2();
    } else {
      update2();
      update1();
    }
  }
  return joint;
}

/// Sup over lattice corners and the four quadrant orientations of the
/// difference in quadrant probabilities between two lattice joints.
inline double joint_quadrant_gap(const std::vector<double>& p,
                                 const std::vector<double>& q, std::size_t n) {
  const auto cum = [n](const std::vector<double>& f) {
    std::vector<double> c(n * n);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        double v = f[i * n + j];
        if (i > 0) v += c[(i - 1) * n + j];
        if (j > 0) v += c[i * n + j - 1];
        if (i > 0 && j > 0) v -= c[(i - 1) * n + j - 1];
        c[i * n + j] = v;
      }
    }
    return c;
  };
  const auto cp = cum(p);
  const auto cq = cum(q);
  double d = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const double lp = cp[i * n + j], lq = cq[i * n + j];
      const double xp = cp[i * n + n - 1], xq = cq[i * n + n - 1];
      const double yp = cp[(n - 1) * n + j], yq = cq[(n - 1) * n + j];
      d = std::max({d, std::abs(lp - lq), std::abs((xp - lp) - (xq - lq)),
                    std::abs((yp - lp) - (yq - lq)),
                    std::abs((1 - xp - yp + lp) - (1 - xq - yq + lq))});
    }
  }
  return d;
}

/// Marginal of t1 (axis 0) or t2 (axis 1) of a lattice joint.
inline std::vector<double> lattice_marginal(const std::vector<double>& joint,
                                            std::size_t n, int axis) {
  std::vector<double> m(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) m[axis == 0 ? i : j] += joint[i * n + j];
  }
  return m;
}

/// Sup distance between the cumulative sums of two lattice marginals.
inline double lattice_ks(const std::vector<double>& a, const std::vector<double>& b) {
  double ca = 0.0, cb = 0.0, d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ca += a[i];
    cb += b[i];
    d = std::max(d, std::abs(ca - cb));
  }
  return d;
}

}  // namespace oracle
