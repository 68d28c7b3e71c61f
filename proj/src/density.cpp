#include "ioi/density.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "ioi/errors.hpp"
#include "ioi/normal.hpp"
#include "ioi/random.hpp"

namespace ioi {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

[[noreturn]] void wrong_form(const char* accessor) {
  throw StructuralError(std::string("Density1D::") + accessor +
                        ": not available for this form");
}

}  // namespace

Density1D Density1D::normal(double mean, double variance) {
  if (!std::isfinite(mean)) {
    throw StructuralError("normal density: mean must be finite");
  }
  if (!(variance > 0.0) || !std::isfinite(variance)) {
    throw StructuralError("normal density: variance must be positive, got " +
                          std::to_string(variance));
  }
  return Density1D(Normal{mean, variance, std::sqrt(variance)});
}

Density1D Density1D::grid(double lo, double hi, std::vector<double> weights) {
  if (!std::isfinite(lo) || !std::isfinite(hi) || !(lo < hi)) {
    throw StructuralError("grid density: need finite lo < hi");
  }
  if (weights.size() < 2) {
    throw StructuralError("grid density: need at least two points");
  }
  bool any_positive = false;
  for (double w : weights) {
    if (!std::isfinite(w) || w < 0.0) {
      throw StructuralError("grid density: weights must be finite and >= 0");
    }
    any_positive = any_positive || w > 0.0;
  }
  if (!any_positive) {
    throw StructuralError("grid density: at least one weight must be > 0");
  }

  auto g = std::make_shared<Grid>();
  g->lo = lo;
  g->hi = hi;
  g->h = (hi - lo) / static_cast<double>(weights.size() - 1);
  g->cumulative.resize(weights.size());
  g->cumulative[0] = 0.0;
  for (std::size_t i = 1; i < weights.size(); ++i) {
    g->cumulative[i] =
        g->cumulative[i - 1] + 0.5 * g->h * (weights[i - 1] + weights[i]);
  }
  g->z = g->cumulative.back();
  if (!(g->z > 0.0) || !std::isfinite(g->z)) {
    throw StructuralError("grid density: total mass is not positive");
  }
  for (double& c : g->cumulative) c /= g->z;
  g->cumulative.back() = 1.0;
  g->weights = std::move(weights);
  return Density1D(std::shared_ptr<const Grid>(std::move(g)));
}

Density1D Density1D::mixture(std::vector<double> weights,
                             std::vector<Density1D> components) {
  if (weights.size() != components.size() || weights.empty()) {
    throw StructuralError(
        "mixture density: need one weight per component and at least one "
        "component");
  }
  double total = 0.0;
  for (double w : weights) {
    if (!std::isfinite(w) || w < 0.0) {
      throw StructuralError("mixture density: weights must be finite and >= 0");
    }
    total += w;
  }
  if (std::abs(total - 1.0) > kMassTolerance) {
    throw StructuralError("mixture density: weights sum to " +
                          std::to_string(total) + ", expected 1");
  }

  auto m = std::make_shared<Mixture>();
  for (std::size_t i = 0; i < components.size(); ++i) {
    if (weights[i] == 0.0) continue;
    if (components[i].form() == Form::mixture) {
      const auto inner_w = components[i].mixture_weights();
      const auto inner_c = components[i].components();
      for (std::size_t j = 0; j < inner_c.size(); ++j) {
        m->weights.push_back(weights[i] * inner_w[j]);
        m->components.push_back(inner_c[j]);
      }
    } else {
      m->weights.push_back(weights[i]);
      m->components.push_back(std::move(components[i]));
    }
  }
  m->cumulative.resize(m->weights.size());
  std::partial_sum(m->weights.begin(), m->weights.end(), m->cumulative.begin());

  m->ordered_disjoint = true;
  for (std::size_t i = 1; i < m->components.size(); ++i) {
    const auto prev = m->components[i - 1];
    const auto cur = m->components[i];
    if (prev.form() != Form::grid || cur.form() != Form::grid ||
        prev.hi() > cur.lo()) {
      m->ordered_disjoint = false;
      break;
    }
  }
  if (m->components.size() == 1 && m->components[0].form() != Form::grid) {
    m->ordered_disjoint = false;
  }
  return Density1D(std::shared_ptr<const Mixture>(std::move(m)));
}

double Density1D::mean() const {
  if (const auto* n = std::get_if<Normal>(&rep_)) return n->mean;
  wrong_form("mean");
}

double Density1D::variance() const {
  if (const auto* n = std::get_if<Normal>(&rep_)) return n->variance;
  wrong_form("variance");
}

double Density1D::lo() const {
  if (const auto* g = std::get_if<std::shared_ptr<const Grid>>(&rep_)) {
    return (*g)->lo;
  }
  wrong_form("lo");
}

double Density1D::hi() const {
  if (const auto* g = std::get_if<std::shared_ptr<const Grid>>(&rep_)) {
    return (*g)->hi;
  }
  wrong_form("hi");
}

std::size_t Density1D::n_points() const {
  if (const auto* g = std::get_if<std::shared_ptr<const Grid>>(&rep_)) {
    return (*g)->weights.size();
  }
  wrong_form("n_points");
}

double Density1D::spacing() const {
  if (const auto* g = std::get_if<std::shared_ptr<const Grid>>(&rep_)) {
    return (*g)->h;
  }
  wrong_form("spacing");
}

std::span<const double> Density1D::weights() const {
  if (const auto* g = std::get_if<std::shared_ptr<const Grid>>(&rep_)) {
    return (*g)->weights;
  }
  wrong_form("weights");
}

double Density1D::grid_mass() const {
  if (const auto* g = std::get_if<std::shared_ptr<const Grid>>(&rep_)) {
    return (*g)->z;
  }
  wrong_form("grid_mass");
}

std::span<const double> Density1D::mixture_weights() const {
  if (const auto* m = std::get_if<std::shared_ptr<const Mixture>>(&rep_)) {
    return (*m)->weights;
  }
  wrong_form("mixture_weights");
}

std::span<const Density1D> Density1D::components() const {
  if (const auto* m = std::get_if<std::shared_ptr<const Mixture>>(&rep_)) {
    return (*m)->components;
  }
  wrong_form("components");
}

double Density1D::pdf(double t) const {
  return std::visit(
      overloaded{
          [t](const Normal& n) {
            return std_normal_pdf((t - n.mean) / n.sd) / n.sd;
          },
          [t](const std::shared_ptr<const Grid>& g) {
            if (!(t >= g->lo && t <= g->hi)) return 0.0;
            const std::size_t last = g->weights.size() - 1;
            const double u = (t - g->lo) / g->h;
            const auto i = std::min(static_cast<std::size_t>(u), last - 1);
            const double f = u - static_cast<double>(i);
            const double w =
                g->weights[i] + (g->weights[i + 1] - g->weights[i]) * f;
            return std::max(w, 0.0) / g->z;
          },
          [t](const std::shared_ptr<const Mixture>& m) {
            double s = 0.0;
            for (std::size_t i = 0; i < m->components.size(); ++i) {
              s += m->weights[i] * m->components[i].pdf(t);
            }
            return s;
          }},
      rep_);
}

double Density1D::cdf(double t) const {
  if (std::isnan(t)) throw DomainError("cdf: argument is NaN");
  return std::visit(
      overloaded{
          [t](const Normal& n) {
            if (std::isinf(t)) return t > 0 ? 1.0 : 0.0;
            return std_normal_cdf((t - n.mean) / n.sd);
          },
          [t](const std::shared_ptr<const Grid>& g) {
            if (t <= g->lo) return 0.0;
            if (t >= g->hi) return 1.0;
            const std::size_t last = g->weights.size() - 1;
            const double u = (t - g->lo) / g->h;
            const auto i = std::min(static_cast<std::size_t>(u), last - 1);
            const double f = u - static_cast<double>(i);
            const double w0 = g->weights[i];
            const double dw = g->weights[i + 1] - w0;
            const double partial = g->h * (w0 * f + 0.5 * dw * f * f) / g->z;
            return std::clamp(g->cumulative[i] + partial, 0.0, 1.0);
          },
          [t](const std::shared_ptr<const Mixture>& m) {
            double s = 0.0;
            for (std::size_t i = 0; i < m->components.size(); ++i) {
              s += m->weights[i] * m->components[i].cdf(t);
            }
            return std::clamp(s, 0.0, 1.0);
          }},
      rep_);
}

double Density1D::grid_quantile(const Grid& g, double p) const {
  if (p <= 0.0) {
    // first node carrying mass
    const auto it = std::upper_bound(g.cumulative.begin(), g.cumulative.end(),
                                     0.0);
    return g.lo + g.h * static_cast<double>(
                            std::max<std::ptrdiff_t>(
                                0, (it - g.cumulative.begin()) - 1));
  }
  if (p >= 1.0) {
    const auto it =
        std::lower_bound(g.cumulative.begin(), g.cumulative.end(), 1.0);
    return g.lo + g.h * static_cast<double>(it - g.cumulative.begin());
  }
  // cell i with cumulative[i] < p <= cumulative[i+1]
  const auto it =
      std::lower_bound(g.cumulative.begin(), g.cumulative.end(), p);
  const auto i = static_cast<std::size_t>(
      std::max<std::ptrdiff_t>(1, it - g.cumulative.begin()) - 1);
  const double c = p - g.cumulative[i];
  const double b = g.h * g.weights[i] / g.z;
  const double a = 0.5 * g.h * (g.weights[i + 1] - g.weights[i]) / g.z;
  double f;
  const double disc = b * b + 4.0 * a * c;
  if (disc <= 0.0) {
    f = 1.0;
  } else {
    const double denom = b + std::sqrt(disc);
    f = denom > 0.0 ? 2.0 * c / denom : 1.0;
  }
  f = std::clamp(f, 0.0, 1.0);
  return g.lo + g.h * (static_cast<double>(i) + f);
}

double Density1D::quantile(double p) const {
  if (!(p > 0.0 && p < 1.0)) {
    throw DomainError("quantile: p must lie in (0,1), got " +
                      std::to_string(p));
  }
  return std::visit(
      overloaded{
          [p](const Normal& n) {
            return n.mean + n.sd * std_normal_quantile(p);
          },
          [this, p](const std::shared_ptr<const Grid>& g) {
            return grid_quantile(*g, p);
          },
          [p](const std::shared_ptr<const Mixture>& m) {
            if (m->ordered_disjoint) {
              auto it = std::lower_bound(m->cumulative.begin(),
                                         m->cumulative.end(), p);
              if (it == m->cumulative.end()) --it;
              const auto i =
                  static_cast<std::size_t>(it - m->cumulative.begin());
              const double before = i == 0 ? 0.0 : m->cumulative[i - 1];
              const double inner =
                  std::clamp((p - before) / m->weights[i], 0.0, 1.0);
              const auto& part = m->components[i];
              if (inner > 0.0 && inner < 1.0) return part.quantile(inner);
              return inner <= 0.0 ? part.lo() : part.hi();
            }
            double a = std::numeric_limits<double>::infinity();
            double b = -a;
            for (const auto& part : m->components) {
              const double q = part.quantile(p);
              a = std::min(a, q);
              b = std::max(b, q);
            }
            // bisection for the leftmost t with F(t) >= p
            for (int it = 0; it < 200 && b - a > 0.0; ++it) {
              const double mid = 0.5 * (a + b);
              if (mid <= a || mid >= b) break;
              double s = 0.0;
              for (std::size_t i = 0; i < m->components.size(); ++i) {
                s += m->weights[i] * m->components[i].cdf(mid);
              }
              if (s >= p) {
                b = mid;
              } else {
                a = mid;
              }
            }
            return b;
          }},
      rep_);
}

std::pair<double, double> Density1D::support() const {
  return std::visit(
      overloaded{
          [](const Normal& n) {
            return std::pair{n.mean - kNormalGridHalfWidth * n.sd,
                             n.mean + kNormalGridHalfWidth * n.sd};
          },
          [](const std::shared_ptr<const Grid>& g) {
            return std::pair{g->lo, g->hi};
          },
          [](const std::shared_ptr<const Mixture>& m) {
            double a = std::numeric_limits<double>::infinity();
            double b = -a;
            for (const auto& part : m->components) {
              const auto [lo, hi] = part.support();
              a = std::min(a, lo);
              b = std::max(b, hi);
            }
            return std::pair{a, b};
          }},
      rep_);
}

double Density1D::draw(double u) const {
  return std::visit(
      overloaded{
          [u](const Normal& n) {
            return n.mean + n.sd * std_normal_quantile(u);
          },
          [this, u](const std::shared_ptr<const Grid>& g) {
            return grid_quantile(*g, u);
          },
          [u](const std::shared_ptr<const Mixture>& m) {
            auto it =
                std::lower_bound(m->cumulative.begin(), m->cumulative.end(), u);
            if (it == m->cumulative.end()) --it;
            const auto i = static_cast<std::size_t>(it - m->cumulative.begin());
            const double before = i == 0 ? 0.0 : m->cumulative[i - 1];
            double inner = (u - before) / m->weights[i];
            inner = std::clamp(inner, 0x1.0p-60, 1.0 - 0x1.0p-53);
            return m->components[i].draw(inner);
          }},
      rep_);
}

SampleBatch sample(const Density1D& d, std::size_t count, std::uint64_t seed) {
  if (count < 1) throw DomainError("sample: count must be >= 1");
  SampleBatch batch;
  batch.seed = seed;
  batch.values.reserve(count);
  UniformStream uniforms(seed);
  for (std::size_t i = 0; i < count; ++i) {
    batch.values.push_back(d.draw(uniforms.next()));
  }
  return batch;
}

Density1D normalize(const Density1D& d) {
  if (d.form() != Density1D::Form::grid) return d;
  const double z = d.grid_mass();
  std::vector<double> w(d.weights().begin(), d.weights().end());
  for (double& x : w) x /= z;
  return Density1D::grid(d.lo(), d.hi(), std::move(w));
}

Density1D to_grid(const Density1D& d, std::size_t n) {
  const auto [lo, hi] = d.support();
  return to_grid(d, lo, hi, n);
}

Density1D to_grid(const Density1D& d, double lo, double hi, std::size_t n) {
  if (n < 2) throw DomainError("to_grid: need at least two points");
  if (!(lo < hi)) throw DomainError("to_grid: need lo < hi");
  std::vector<double> w(n);
  const double h = (hi - lo) / static_cast<double>(n - 1);
  for (std::size_t i = 0; i < n; ++i) {
    const double t = i + 1 == n ? hi : lo + h * static_cast<double>(i);
    w[i] = d.pdf(t);
  }
  return Density1D::grid(lo, hi, std::move(w));
}

}  // namespace ioi
