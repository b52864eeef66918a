#pragma once

#include "clockaug/money.hpp"

#include <vector>

namespace clockaug {

/// H_n as an exact rational. n >= 1.
Money harmonic(std::size_t n);

/// H_n in double precision, summed smallest term first.
double harmonic_approx(std::size_t n);

/// Exact H_1..H_n with double mirrors; H_k - H_{k-1} = 1/k exactly.
class HarmonicTable
{
public:
  explicit HarmonicTable(std::size_t n);

  const Money &exact(std::size_t k) const { return exact_.at(k - 1); }
  double       approx(std::size_t k) const { return approx_.at(k - 1); }
  std::size_t  size() const { return exact_.size(); }

private:
  std::vector<Money>  exact_;
  std::vector<double> approx_;
};

/// ln Γ(x) for x > 0.
/// Lanczos approximation with g = 7 and nine coefficients for x >= 1/2,
/// reflection through Γ(x)Γ(1-x) = π / sin(πx) below.
double log_gamma(double x);

/// Asymptotic Stirling series for ln Γ(x), truncated after the x^-9 term.
/// Truncation error is below 1e-14 for x >= 20.
double log_gamma_stirling(double x);

/// Smallest robustness parameter that keeps the FTBB consistency∞ proof valid.
double beta_threshold(double alpha, std::size_t n);

struct IdentityCheck
{
  double lhs;
  double rhs;
  double rel_err;
};

/// Evaluates both sides of the chain-sum Gamma identity. n > 2.
IdentityCheck summation_identity_check(double alpha, std::size_t n);

struct CurvePoint
{
  std::size_t n;
  double      alpha;
  double      simple;     ///< n^{1/(α-1)} · H_n
  double      threshold;  ///< beta_threshold(α, n)
};

/// Rows ordered by n, then by α in grid order.
std::vector<CurvePoint> beta_curve(const std::vector<double> &alpha_grid, const std::vector<std::size_t> &n_list);

}  // namespace clockaug
