#pragma once

#include <cstddef>
#include <vector>

namespace copsub {

inline constexpr double kEulerGamma = 0.57721566490153286060651209008240243;

/// Distribution function of Beta(r, n + 1 - r) at t, i.e. P(Binomial(n, t) >= r).
/// Exact binomial tail sum evaluated term by term in log space. Requires 1 <= r <= n.
double beta_cdf(int r, int n, double t);

/// All tails at once: out[r] = P(Binomial(n, t) >= r) for r = 0..n (out[0] = 1).
/// Uses a ratio recursion started from the modal probability; O(n).
std::vector<double> binomial_upper_tails(int n, double t);
void binomial_upper_tails(int n, double t, std::vector<double>& out);

/// Standard normal quantile (Wichura's AS241, PPND16). Throws DomainError outside (0,1).
double normal_quantile(double p);
double normal_cdf(double x);

/// Exponential integral E1(x) = int_x^inf e^{-t}/t dt, x > 0.
double expint_e1(double x);
/// Entire exponential integral Ein(x) = int_0^x (1 - e^{-t})/t dt, x >= 0.
double expint_ein(double x);

}  // namespace copsub
