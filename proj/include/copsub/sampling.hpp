#pragma once

#include <cstddef>
#include <span>
#include <string_view>

#include "copsub/rng.hpp"
#include "copsub/sample.hpp"

namespace copsub {

enum class Family { independence, clayton, gumbel };

std::string_view to_string(Family family);
Family parse_family(std::string_view name);

/// Clayton: theta = 2 tau / (1 - tau); Gumbel: theta = 1 / (1 - tau); independence: 0.
double tau_to_theta(Family family, double tau);
double theta_to_tau(Family family, double theta);

/// A d-dimensional Archimedean copula whose bivariate margins have Kendall's tau `tau`.
struct CopulaSpec {
  Family family = Family::independence;
  double tau = 0.0;
  double theta = 0.0;
  std::size_t d = 2;

  static CopulaSpec make(Family family, double tau, std::size_t d);
  void validate() const;
};

struct SeriesSpec {
  CopulaSpec copula;
  double beta = 0.0;  // AR coefficient in [0, 1)
  std::size_t burnin = 100;

  void validate() const;
};

/// n i.i.d. rows from the copula (Marshall-Olkin frailty construction).
Sample sample_copula(const CopulaSpec& spec, std::size_t n, RngStream& rng);

/// The copula distribution function C(u).
double copula_cdf(const CopulaSpec& spec, std::span<const double> u);

/// Pickands dependence function of an extreme-value copula (gumbel, independence)
/// at w = (w_1, ..., w_d) on the simplex.
double pickands_function(const CopulaSpec& spec, std::span<const double> w);

/// Componentwise AR(1) driven by normal innovations Phi^{-1}(U_i), U_i ~ C.
/// Draws n + burnin + 1 vectors, starts at the first innovation, returns the last n.
Sample generate_ar1(const SeriesSpec& spec, std::size_t n, RngStream& rng);

/// Sample Kendall's tau by O(n^2) pair counting.
double kendall_tau(std::span<const double> x, std::span<const double> y);

}  // namespace copsub
