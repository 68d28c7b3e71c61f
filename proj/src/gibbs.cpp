#include "ioi/gibbs.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <numeric>

#include "ioi/errors.hpp"
#include "ioi/ks.hpp"
#include "ioi/random.hpp"

namespace ioi {

std::string to_string(Method m) {
  switch (m) {
    case Method::bayes: return "bayes";
    case Method::fiducial: return "fiducial";
    case Method::bispatial: return "bispatial";
    case Method::other: return "other";
  }
  return "other";
}

Method method_from_string(const std::string& s) {
  if (s == "bayes") return Method::bayes;
  if (s == "fiducial") return Method::fiducial;
  if (s == "bispatial") return Method::bispatial;
  if (s == "other") return Method::other;
  throw ValidationError("unknown inference method '" + s + "'");
}

std::string to_string(Compatibility c) {
  switch (c) {
    case Compatibility::compatible: return "compatible";
    case Compatibility::approximately_compatible: return "approximately_compatible";
    case Compatibility::incompatible: return "incompatible";
  }
  return "incompatible";
}

void ConditionalSet::validate() const {
  if (kernels.size() < 2) {
    throw StructuralError("conditional set: need at least two parameters");
  }
  if (tags.size() != kernels.size()) {
    throw StructuralError("conditional set: one method tag per kernel required");
  }
  for (const auto& kfn : kernels) {
    if (!kfn) throw StructuralError("conditional set: empty kernel");
  }
}

ScanOrder ScanOrder::sweep(std::vector<std::size_t> order) {
  ScanOrder s;
  s.kind_ = Kind::fixed_sweep;
  s.order_ = std::move(order);
  return s;
}

ScanOrder ScanOrder::random(std::uint64_t seed) {
  ScanOrder s;
  s.kind_ = Kind::random_scan;
  s.seed_ = seed;
  return s;
}

std::string ScanOrder::describe() const {
  if (kind_ == Kind::random_scan) return "random(seed=" + std::to_string(seed_) + ")";
  std::string out = "sweep(";
  for (std::size_t i = 0; i < order_.size(); ++i) {
    if (i > 0) out += ",";
    out += std::to_string(order_[i] + 1);
  }
  return out + ")";
}

void ScanOrder::validate(std::size_t k) const {
  if (kind_ == Kind::random_scan) return;
  if (order_.size() != k) {
    throw DomainError("scan order: sweep must list each of the " +
                      std::to_string(k) + " coordinates once");
  }
  std::vector<bool> seen(k, false);
  for (auto j : order_) {
    if (j >= k || seen[j]) {
      throw DomainError("scan order: sweep is not a permutation");
    }
    seen[j] = true;
  }
}

std::vector<double> ChainResult::column(std::size_t j) const {
  std::vector<double> out;
  out.reserve(iterations - burn_in);
  for (std::size_t t = burn_in; t < iterations; ++t) out.push_back(at(t, j));
  return out;
}

std::size_t default_burn_in(std::size_t iterations) {
  return std::max<std::size_t>(1000, iterations / 20);
}

ChainResult gibbs_run(const ConditionalSet& set, const ScanOrder& scan,
                      std::span<const double> init, std::size_t iterations,
                      std::size_t burn_in, std::uint64_t seed) {
  set.validate();
  const std::size_t k = set.k();
  scan.validate(k);
  if (init.size() != k) {
    throw DomainError("gibbs_run: initial state must have " + std::to_string(k) +
                      " coordinates");
  }
  for (double v : init) {
    if (!std::isfinite(v)) throw DomainError("gibbs_run: initial state not finite");
  }
  if (!(iterations > burn_in)) {
    throw DomainError("gibbs_run: iterations must exceed burn_in");
  }

  ChainResult result;
  result.k = k;
  result.iterations = iterations;
  result.burn_in = burn_in;
  result.seed = seed;
  result.scan = scan;
  result.draws.reserve(iterations * k);

  std::vector<double> state(init.begin(), init.end());
  std::vector<double> others(k - 1);
  UniformStream uniforms(seed);
  UniformStream coordinates(scan.seed());

  for (std::size_t t = 0; t < iterations; ++t) {
    for (std::size_t step = 0; step < k; ++step) {
      const std::size_t j = scan.kind() == ScanOrder::Kind::fixed_sweep
                                ? scan.order()[step]
                                : coordinates.index(k);
      for (std::size_t i = 0, o = 0; i < k; ++i) {
        if (i != j) others[o++] = state[i];
      }
      double value;
      try {
        value = set.kernels[j](others).draw(uniforms.next());
      } catch (const std::exception& e) {
        throw ChainAborted("gibbs_run: kernel " + std::to_string(j + 1) +
                               " failed at iteration " + std::to_string(t) +
                               ": " + e.what(),
                           t);
      }
      if (!std::isfinite(value)) {
        throw ChainAborted("gibbs_run: non-finite draw for coordinate " +
                               std::to_string(j + 1) + " at iteration " +
                               std::to_string(t),
                           t);
      }
      state[j] = value;
    }
    result.draws.insert(result.draws.end(), state.begin(), state.end());
  }
  return result;
}

namespace {

// Trapezoid weights along one axis.
std::vector<double> trapezoid(std::size_t n, double h) {
  std::vector<double> w(n, h);
  w.front() = w.back() = 0.5 * h;
  return w;
}

}  // namespace

CompatibilityResult check_compatibility(const ConditionalSet& set,
                                        const Box& box, std::size_t grid_n,
                                        double tolerance) {
  set.validate();
  if (set.k() != 2) {
    throw StructuralError(
        "check_compatibility: only two-parameter sets can be decided; use "
        "scan_sensitivity for k > 2");
  }
  if (grid_n < 3) throw DomainError("check_compatibility: grid_n must be >= 3");
  for (int a = 0; a < 2; ++a) {
    if (!(box.lo[a] < box.hi[a])) {
      throw DomainError("check_compatibility: box must have lo < hi");
    }
  }

  const std::size_t n = grid_n;
  std::vector<double> x(n), y(n);
  const double hx = (box.hi[0] - box.lo[0]) / static_cast<double>(n - 1);
  const double hy = (box.hi[1] - box.lo[1]) / static_cast<double>(n - 1);
  for (std::size_t i = 0; i < n; ++i) {
    x[i] = box.lo[0] + hx * static_cast<double>(i);
    y[i] = box.lo[1] + hy * static_cast<double>(i);
  }

  // a(i,j) = p(t1 = x_i | t2 = y_j), b(i,j) = p(t2 = y_j | t1 = x_i)
  std::vector<double> a(n * n), b(n * n);
  for (std::size_t j = 0; j < n; ++j) {
    const double cond[1] = {y[j]};
    const auto d = set.kernels[0](cond);
    for (std::size_t i = 0; i < n; ++i) a[i * n + j] = d.pdf(x[i]);
  }
  for (std::size_t i = 0; i < n; ++i) {
    const double cond[1] = {x[i]};
    const auto d = set.kernels[1](cond);
    for (std::size_t j = 0; j < n; ++j) b[i * n + j] = d.pdf(y[j]);
  }

  for (const auto* m : {&a, &b}) {
    for (std::size_t line = 0; line < n; ++line) {
      bool row_zero = true;
      bool col_zero = true;
      for (std::size_t t = 0; t < n; ++t) {
        row_zero = row_zero && (*m)[line * n + t] == 0.0;
        col_zero = col_zero && (*m)[t * n + line] == 0.0;
      }
      if (row_zero || col_zero) {
        throw UndefinedRatio("check_compatibility: kernel " +
                             std::string(m == &a ? "1" : "2") +
                             " vanishes on an entire grid line");
      }
    }
  }

  CompatibilityResult result;
  result.grid_n = n;
  result.box = box;

  bool finite_ratio = true;
  std::vector<double> log_r(n * n);
  for (std::size_t c = 0; c < n * n; ++c) {
    if (a[c] <= 0.0 || b[c] <= 0.0) {
      finite_ratio = false;
      break;
    }
    log_r[c] = std::log(a[c]) - std::log(b[c]);
  }
  if (!finite_ratio) {
    result.residual = std::numeric_limits<double>::infinity();
    result.verdict = Compatibility::incompatible;
    return result;
  }

  std::vector<double> row(n, 0.0), col(n, 0.0);
  double grand = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const double v = log_r[i * n + j];
      row[i] += v;
      col[j] += v;
      grand += v;
    }
  }
  const auto dn = static_cast<double>(n);
  for (auto& v : row) v /= dn;
  for (auto& v : col) v /= dn;
  grand /= dn * dn;

  double residual = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      residual = std::max(residual,
                          std::abs(log_r[i * n + j] - row[i] - col[j] + grand));
    }
  }
  result.residual = residual;
  if (residual <= tolerance) {
    result.verdict = Compatibility::compatible;
  } else if (residual < kApproxCompatTolerance) {
    result.verdict = Compatibility::approximately_compatible;
    return result;
  } else {
    result.verdict = Compatibility::incompatible;
    return result;
  }

  // log r = f(t1) - log p2(t2) + const, so p(t1, t2) = a(t1|t2) p2(t2) with
  // log p2(y_j) = -col[j] up to a constant.
  const double shift = -*std::min_element(col.begin(), col.end());
  const auto wx = trapezoid(n, hx);
  const auto wy = trapezoid(n, hy);
  std::vector<double> joint(n * n);
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const double v = a[i * n + j] * std::exp(-col[j] - shift);
      joint[i * n + j] = v;
      total += wx[i] * wy[j] * v;
    }
  }
  for (auto& v : joint) v /= total;

  // Conditionals of the joint against the inputs, both renormalised on the
  // box.
  double err = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    double zj = 0.0, za = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      zj += wx[i] * joint[i * n + j];
      za += wx[i] * a[i * n + j];
    }
    for (std::size_t i = 0; i < n; ++i) {
      err = std::max(err, std::abs(joint[i * n + j] / zj - a[i * n + j] / za));
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    double zi = 0.0, zb = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      zi += wy[j] * joint[i * n + j];
      zb += wy[j] * b[i * n + j];
    }
    for (std::size_t j = 0; j < n; ++j) {
      err = std::max(err, std::abs(joint[i * n + j] / zi - b[i * n + j] / zb));
    }
  }
  result.conditional_error = err;
  result.joint = std::move(joint);
  return result;
}

double ScanSensitivity::max_marginal() const {
  return marginal_ks.empty() ? 0.0
                             : *std::max_element(marginal_ks.begin(), marginal_ks.end());
}

double ScanSensitivity::max_joint() const {
  return joint_ks.empty() ? 0.0
                          : *std::max_element(joint_ks.begin(), joint_ks.end());
}

double ScanSensitivity::max_ks() const { return std::max(max_marginal(), max_joint()); }

ScanSensitivity scan_sensitivity(const ConditionalSet& set,
                                 std::span<const ScanOrder> scans,
                                 std::span<const double> init,
                                 std::size_t iterations, std::size_t burn_in,
                                 std::uint64_t seed) {
  if (scans.empty()) throw DomainError("scan_sensitivity: no scan orders given");
  set.validate();
  const std::size_t k = set.k();

  std::vector<std::future<ChainResult>> pending;
  pending.reserve(scans.size());
  for (const auto& scan : scans) {
    pending.push_back(std::async(std::launch::async, [&, scan] {
      return gibbs_run(set, scan, init, iterations, burn_in, seed);
    }));
  }
  std::vector<std::vector<std::vector<double>>> columns;
  ScanSensitivity out;
  for (std::size_t s = 0; s < scans.size(); ++s) {
    const auto chain = pending[s].get();
    std::vector<std::vector<double>> cols;
    for (std::size_t j = 0; j < k; ++j) cols.push_back(chain.column(j));
    columns.push_back(std::move(cols));
    out.scans.push_back(scans[s].describe());
  }

  const std::size_t m = scans.size();
  out.marginal_ks.assign(m * m, 0.0);
  out.joint_ks.assign(m * m, 0.0);
  for (std::size_t a = 0; a < m; ++a) {
    for (std::size_t b = a + 1; b < m; ++b) {
      double marginal = 0.0;
      double joint = 0.0;
      for (std::size_t j = 0; j < k; ++j) {
        marginal = std::max(marginal, ks_two_sample(columns[a][j], columns[b][j]));
        for (std::size_t l = j + 1; l < k; ++l) {
          joint = std::max(joint, ks_two_sample_2d(columns[a][j], columns[a][l],
                                                   columns[b][j], columns[b][l]));
        }
      }
      out.marginal_ks[a * m + b] = out.marginal_ks[b * m + a] = marginal;
      out.joint_ks[a * m + b] = out.joint_ks[b * m + a] = joint;
    }
  }
  return out;
}

ConditionalSet build_conditional_set(std::span<const ParameterAssignment> spec) {
  if (spec.size() != 2) {
    throw ValidationError("build_conditional_set: the normal-model family has "
                          "exactly two parameters");
  }
  ConditionalSet set;
  for (const auto& assignment : spec) {
    assignment.data.validate();
    const ParameterAssignment a = assignment;
    switch (a.method) {
      case Method::fiducial: {
        const auto pivot = normal_mean_pivot();
        set.kernels.push_back([a, pivot](std::span<const double> others) {
          DataSummary shifted = a.data;
          shifted.mean = a.data.mean - a.coupling * others[0];
          return fiducial_density(pivot, shifted, a.knowledge);
        });
        break;
      }
      case Method::bayes: {
        if (!a.prior) {
          throw ValidationError("build_conditional_set: Bayesian assignment "
                                "needs a prior");
        }
        set.kernels.push_back([a](std::span<const double> others) {
          DataSummary shifted = a.data;
          shifted.mean = a.data.mean - a.coupling * others[0];
          return conjugate_normal_update(*a.prior, shifted);
        });
        break;
      }
      default:
        throw ValidationError("build_conditional_set: no conditional density "
                              "available for method '" + to_string(a.method) + "'");
    }
    set.tags.push_back(a.method);
  }
  const double origin[1] = {0.0};
  for (const auto& kernel : set.kernels) (void)kernel(origin);
  return set;
}

}  // namespace ioi
