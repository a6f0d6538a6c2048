#include "copsub/special.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "copsub/errors.hpp"

namespace copsub {

namespace {

double log_binomial_pmf(int k, int n, double log_t, double log_1mt) {
  return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0) +
         k * log_t + (n - k) * log_1mt;
}

}  // namespace

double beta_cdf(int r, int n, double t) {
  if (n < 1 || r < 1 || r > n) throw InvalidArgument("beta_cdf requires 1 <= r <= n");
  if (!(t >= 0.0 && t <= 1.0)) throw DomainError("beta_cdf argument outside [0,1]");
  if (t == 0.0) return 0.0;
  if (t == 1.0) return 1.0;
  const double log_t = std::log(t);
  const double log_1mt = std::log1p(-t);
  double sum = 0.0;
  for (int k = n; k >= r; --k) sum += std::exp(log_binomial_pmf(k, n, log_t, log_1mt));
  return std::min(sum, 1.0);
}

void binomial_upper_tails(int n, double t, std::vector<double>& out) {
  if (n < 1) throw InvalidArgument("binomial_upper_tails requires n >= 1");
  if (!(t >= 0.0 && t <= 1.0)) throw DomainError("binomial tail argument outside [0,1]");
  out.assign(static_cast<std::size_t>(n) + 1, 0.0);
  out[0] = 1.0;
  if (t == 0.0) return;
  if (t == 1.0) {
    std::fill(out.begin(), out.end(), 1.0);
    return;
  }
  // Unnormalized pmf in place (1 at the mode), normalized, then suffix sums.
  std::vector<double>& p = out;
  const int mode = std::clamp(static_cast<int>(std::floor((n + 1) * t)), 0, n);
  p[static_cast<std::size_t>(mode)] = 1.0;
  const double odds = t / (1.0 - t);
  for (int k = mode; k < n; ++k) {
    p[k + 1] = p[k] * (static_cast<double>(n - k) / (k + 1)) * odds;
  }
  for (int k = mode; k > 0; --k) {
    p[k - 1] = p[k] * (static_cast<double>(k) / (n - k + 1)) / odds;
  }
  double total = 0.0;
  for (int k = n; k > mode; --k) total += p[k];
  double below = 0.0;
  for (int k = 0; k < mode; ++k) below += p[k];
  total += below + 1.0;
  double acc = 0.0;
  for (int k = n; k >= 1; --k) {
    acc += p[k] / total;
    p[k] = std::min(acc, 1.0);
  }
  p[0] = 1.0;
}

std::vector<double> binomial_upper_tails(int n, double t) {
  std::vector<double> out;
  binomial_upper_tails(n, t, out);
  return out;
}

double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) throw DomainError("normal_quantile requires p in (0,1)");
  const double q = p - 0.5;
  if (std::abs(q) <= 0.425) {
    const double r = 0.180625 - q * q;
    return q *
           (((((((2.5090809287301226727e+3 * r + 3.3430575583588128105e+4) * r +
                 6.7265770927008700853e+4) * r + 4.5921953931549871457e+4) * r +
               1.3731693765509461125e+4) * r + 1.9715909503065514427e+3) * r +
             1.3314166789178437745e+2) * r + 3.3871328727963666080e+0) /
           (((((((5.2264952788528545610e+3 * r + 2.8729085735721942674e+4) * r +
                 3.9307895800092710610e+4) * r + 2.1213794301586595867e+4) * r +
               5.3941960214247511077e+3) * r + 6.8718700749205790830e+2) * r +
             4.2313330701600911252e+1) * r + 1.0);
  }
  double r = q < 0.0 ? p : 1.0 - p;
  r = std::sqrt(-std::log(r));
  double val;
  if (r <= 5.0) {
    r -= 1.6;
    val = (((((((7.74545014278341407640e-4 * r + 2.27238449892691845833e-2) * r +
                2.41780725177450611770e-1) * r + 1.27045825245236838258e+0) * r +
              3.64784832476320460504e+0) * r + 5.76949722146069140550e+0) * r +
            4.63033784615654529590e+0) * r + 1.42343711074968357734e+0) /
          (((((((1.05075007164441684324e-9 * r + 5.47593808499534494600e-4) * r +
                1.51986665636164571966e-2) * r + 1.48103976427480074590e-1) * r +
              6.89767334985100004550e-1) * r + 1.67638483018380384940e+0) * r +
            2.05319162663775882187e+0) * r + 1.0);
  } else {
    r -= 5.0;
    val = (((((((2.01033439929228813265e-7 * r + 2.71155556874348757815e-5) * r +
                1.24266094738807843860e-3) * r + 2.65321895265761230930e-2) * r +
              2.96560571828504891230e-1) * r + 1.78482653991729133580e+0) * r +
            5.46378491116411436990e+0) * r + 6.65790464350110377720e+0) /
          (((((((2.04426310338993978564e-15 * r + 1.42151175831644588870e-7) * r +
                1.84631831751005468180e-5) * r + 7.86869131145613259100e-4) * r +
              1.48753612908506148525e-2) * r + 1.36929880922735805310e-1) * r +
            5.99832206555887937690e-1) * r + 1.0);
  }
  return q < 0.0 ? -val : val;
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

double expint_e1(double x) {
  if (!(x > 0.0)) throw DomainError("expint_e1 requires x > 0");
  constexpr double eps = 1e-16;
  if (x <= 1.0) {
    // E1(x) = -gamma - ln x - sum_{k>=1} (-x)^k / (k k!)
    double term = 1.0;
    double sum = 0.0;
    for (int k = 1; k < 100; ++k) {
      term *= -x / k;
      const double add = term / k;
      sum += add;
      if (std::abs(add) < eps * std::abs(sum)) break;
    }
    return -kEulerGamma - std::log(x) - sum;
  }
  if (x > 745.0) return 0.0;
  // Modified Lentz continued fraction.
  constexpr double tiny = 1e-300;
  double b = x + 1.0;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < 1000; ++i) {
    const double an = -static_cast<double>(i) * i;
    b += 2.0;
    d = 1.0 / (an * d + b);
    c = b + an / c;
    const double del = c * d;
    h *= del;
    if (std::abs(del - 1.0) < eps) break;
  }
  return h * std::exp(-x);
}

double expint_ein(double x) {
  if (!(x >= 0.0)) throw DomainError("expint_ein requires x >= 0");
  if (x == 0.0) return 0.0;
  if (x <= 1.0) {
    double term = 1.0;
    double sum = 0.0;
    for (int k = 1; k < 100; ++k) {
      term *= -x / k;
      const double add = -term / k;
      sum += add;
      if (std::abs(add) < 1e-17 * std::abs(sum)) break;
    }
    return sum;
  }
  return expint_e1(x) + std::log(x) + kEulerGamma;
}

}  // namespace copsub
