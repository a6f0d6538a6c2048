#include "copsub/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "copsub/errors.hpp"
#include "copsub/special.hpp"

namespace copsub {

std::string_view to_string(Family family) {
  switch (family) {
    case Family::independence: return "independence";
    case Family::clayton: return "clayton";
    case Family::gumbel: return "gumbel";
  }
  return "unknown";
}

Family parse_family(std::string_view name) {
  if (name == "independence" || name == "indep") return Family::independence;
  if (name == "clayton") return Family::clayton;
  if (name == "gumbel" || name == "gumbel-hougaard") return Family::gumbel;
  throw UnsupportedFamily("unsupported copula family '" + std::string(name) + "'");
}

double tau_to_theta(Family family, double tau) {
  if (!(tau >= 0.0 && tau < 1.0)) throw InvalidArgument("Kendall's tau must lie in [0, 1)");
  switch (family) {
    case Family::independence: return 0.0;
    case Family::clayton: return 2.0 * tau / (1.0 - tau);
    case Family::gumbel: return 1.0 / (1.0 - tau);
  }
  throw UnsupportedFamily("unsupported copula family");
}

double theta_to_tau(Family family, double theta) {
  switch (family) {
    case Family::independence: return 0.0;
    case Family::clayton: return theta / (theta + 2.0);
    case Family::gumbel: return 1.0 - 1.0 / theta;
  }
  throw UnsupportedFamily("unsupported copula family");
}

CopulaSpec CopulaSpec::make(Family family, double tau, std::size_t d) {
  CopulaSpec spec{family, family == Family::independence ? 0.0 : tau, tau_to_theta(family, tau), d};
  spec.validate();
  return spec;
}

void CopulaSpec::validate() const {
  if (d < 2) throw InvalidArgument("copula dimension must be at least 2");
  switch (family) {
    case Family::independence: break;
    case Family::clayton:
      if (!(theta > 0.0)) throw InvalidArgument("Clayton parameter must be positive (tau > 0)");
      break;
    case Family::gumbel:
      if (!(theta >= 1.0)) throw InvalidArgument("Gumbel parameter must be at least 1");
      break;
  }
}

void SeriesSpec::validate() const {
  copula.validate();
  if (!(beta >= 0.0 && beta < 1.0)) throw InvalidArgument("AR coefficient must lie in [0, 1)");
}

Sample sample_copula(const CopulaSpec& spec, std::size_t n, RngStream& rng) {
  spec.validate();
  if (n < 1) throw InvalidArgument("sample size must be positive");
  const std::size_t d = spec.d;
  std::vector<double> values(n * d);
  for (std::size_t i = 0; i < n; ++i) {
    double* row = values.data() + i * d;
    switch (spec.family) {
      case Family::independence:
        for (std::size_t j = 0; j < d; ++j) row[j] = rng.uniform();
        break;
      case Family::clayton: {
        // psi(t) = (1 + t)^{-1/theta}, frailty Gamma(1/theta, 1)
        const double v = rng.gamma(1.0 / spec.theta);
        for (std::size_t j = 0; j < d; ++j) {
          row[j] = std::exp(-std::log1p(rng.exponential() / v) / spec.theta);
        }
        break;
      }
      case Family::gumbel: {
        // psi(t) = exp(-t^{1/theta}), frailty positive stable with index 1/theta
        const double alpha = 1.0 / spec.theta;
        const double v = rng.positive_stable(alpha);
        for (std::size_t j = 0; j < d; ++j) {
          row[j] = std::exp(-std::pow(rng.exponential() / v, alpha));
        }
        break;
      }
    }
  }
  return Sample(n, d, std::move(values));
}

double copula_cdf(const CopulaSpec& spec, std::span<const double> u) {
  if (u.size() != spec.d) throw InvalidArgument("point dimension differs from copula dimension");
  for (double x : u) {
    if (!(x >= 0.0 && x <= 1.0)) throw InvalidArgument("point coordinate outside [0,1]");
    if (x == 0.0) return 0.0;
  }
  switch (spec.family) {
    case Family::independence: {
      double p = 1.0;
      for (double x : u) p *= x;
      return p;
    }
    case Family::clayton: {
      double s = 0.0;
      for (double x : u) s += std::pow(x, -spec.theta) - 1.0;
      return std::pow(1.0 + s, -1.0 / spec.theta);
    }
    case Family::gumbel: {
      double s = 0.0;
      for (double x : u) s += std::pow(-std::log(x), spec.theta);
      return std::exp(-std::pow(s, 1.0 / spec.theta));
    }
  }
  throw UnsupportedFamily("unsupported copula family");
}

double pickands_function(const CopulaSpec& spec, std::span<const double> w) {
  if (w.size() != spec.d) throw InvalidArgument("simplex point dimension differs from copula");
  switch (spec.family) {
    case Family::independence: return 1.0;
    case Family::gumbel: {
      double s = 0.0;
      for (double x : w) s += std::pow(x, spec.theta);
      return std::pow(s, 1.0 / spec.theta);
    }
    case Family::clayton: break;
  }
  throw UnsupportedFamily("Pickands function requires an extreme-value family");
}

Sample generate_ar1(const SeriesSpec& spec, std::size_t n, RngStream& rng) {
  spec.validate();
  if (n < 1) throw InvalidArgument("series length must be positive");
  const std::size_t d = spec.copula.d;
  const std::size_t total = n + spec.burnin + 1;
  const Sample u = sample_copula(spec.copula, total, rng);
  constexpr double lo = std::numeric_limits<double>::min();
  const double hi = std::nextafter(1.0, 0.0);
  std::vector<double> x(d);
  std::vector<double> out;
  out.reserve(n * d);
  for (std::size_t t = 0; t < total; ++t) {
    for (std::size_t j = 0; j < d; ++j) {
      const double eps = normal_quantile(std::clamp(u(t, j), lo, hi));
      x[j] = t == 0 ? eps : spec.beta * x[j] + eps;
    }
    if (t >= spec.burnin + 1) out.insert(out.end(), x.begin(), x.end());
  }
  return Sample(n, d, std::move(out));
}

double kendall_tau(std::span<const double> x, std::span<const double> y) {
  const std::size_t n = x.size();
  if (n != y.size() || n < 2) throw InvalidArgument("kendall_tau needs two equal-length series");
  long long score = 0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = i + 1; k < n; ++k) {
      const double s = (x[i] - x[k]) * (y[i] - y[k]);
      score += s > 0 ? 1 : (s < 0 ? -1 : 0);
    }
  }
  return static_cast<double>(score) / (0.5 * static_cast<double>(n) * static_cast<double>(n - 1));
}

}  // namespace copsub
