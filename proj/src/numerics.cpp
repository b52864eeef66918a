#include "clockaug/numerics.hpp"

#include <array>
#include <cmath>
#include <numbers>

namespace clockaug {

Money harmonic(std::size_t n)
{
  if (n == 0)
  {
    throw InvalidInput("harmonic number needs n >= 1");
  }
  Money h = 0;
  for (std::size_t i = 1; i <= n; ++i)
  {
    h += Money(1, static_cast<unsigned long>(i));
  }
  return h;
}

double harmonic_approx(std::size_t n)
{
  if (n == 0)
  {
    throw InvalidInput("harmonic number needs n >= 1");
  }
  double h = 0.0;
  for (std::size_t i = n; i >= 1; --i)
  {
    h += 1.0 / static_cast<double>(i);
  }
  return h;
}

HarmonicTable::HarmonicTable(std::size_t n)
{
  if (n == 0)
  {
    throw InvalidInput("harmonic table needs n >= 1");
  }
  exact_.reserve(n);
  approx_.reserve(n);
  Money h = 0;
  for (std::size_t i = 1; i <= n; ++i)
  {
    h += Money(1, static_cast<unsigned long>(i));
    exact_.push_back(h);
    approx_.push_back(h.get_d());
  }
}

namespace {

// Godfrey's coefficients for g = 7, n = 9.
constexpr double kLanczosG = 7.0;

constexpr std::array<double, 9> kLanczos = {
    0.99999999999980993,  676.5203681218851,     -1259.1392167224028,
    771.32342877765313,   -176.61502916214059,   12.507343278686905,
    -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7,
};

}  // namespace

double log_gamma(double x)
{
  if (!(x > 0.0) || !std::isfinite(x))
  {
    throw DomainError("log_gamma needs a finite x > 0");
  }
  if (x == 1.0 || x == 2.0)
  {
    return 0.0;
  }
  if (x < 0.5)
  {
    return std::log(std::numbers::pi / std::sin(std::numbers::pi * x)) - log_gamma(1.0 - x);
  }
  double z   = x - 1.0;
  double sum = kLanczos[0];
  for (std::size_t k = 1; k < kLanczos.size(); ++k)
  {
    sum += kLanczos[k] / (z + static_cast<double>(k));
  }
  double t = z + kLanczosG + 0.5;
  return 0.5 * std::log(2.0 * std::numbers::pi) + (z + 0.5) * std::log(t) - t + std::log(sum);
}

double log_gamma_stirling(double x)
{
  if (!(x > 0.0))
  {
    throw DomainError("stirling series needs x > 0");
  }
  // B_{2k} / (2k(2k-1)) for k = 1..5.
  constexpr std::array<double, 5> kTerms = {1.0 / 12.0, -1.0 / 360.0, 1.0 / 1260.0, -1.0 / 1680.0, 1.0 / 1188.0};
  double inv  = 1.0 / x;
  double inv2 = inv * inv;
  double tail = 0.0;
  double pow  = inv;
  for (double c : kTerms)
  {
    tail += c * pow;
    pow *= inv2;
  }
  return (x - 0.5) * std::log(x) - x + 0.5 * std::log(2.0 * std::numbers::pi) + tail;
}

double beta_threshold(double alpha, std::size_t n)
{
  if (!(alpha > 1.0))
  {
    throw DomainError("beta_threshold needs alpha > 1");
  }
  if (n == 0)
  {
    throw InvalidInput("beta_threshold needs n >= 1");
  }
  double a   = alpha / (alpha - 1.0);
  double hn  = harmonic_approx(n);
  double dn  = static_cast<double>(n);
  double rat = std::exp(log_gamma(dn + a) - log_gamma(1.0 + a) - log_gamma(dn + 1.0));
  return 8.0 * hn * rat - 4.0 * hn * (alpha - 1.0) / alpha;
}

IdentityCheck summation_identity_check(double alpha, std::size_t n)
{
  if (!(alpha > 1.0))
  {
    throw DomainError("summation_identity_check needs alpha > 1");
  }
  if (n <= 2)
  {
    throw InvalidInput("summation_identity_check needs n > 2");
  }
  double inv = 1.0 / (alpha - 1.0);
  double dn  = static_cast<double>(n);
  double lhs = 0.0;
  for (std::size_t i = 2; i <= n; ++i)
  {
    double di = static_cast<double>(i);
    lhs += std::exp(log_gamma(di - 1.0) + log_gamma(dn + 1.0 + inv) - log_gamma(inv + di) - log_gamma(dn));
  }
  double big = std::exp(log_gamma((dn * alpha + alpha - dn) / (alpha - 1.0)) -
                        log_gamma((2.0 * alpha - 1.0) / (alpha - 1.0)) - log_gamma(dn));
  double rhs = -alpha * dn + alpha * big + dn - 1.0;
  return IdentityCheck{lhs, rhs, std::fabs(lhs - rhs) / std::fabs(rhs)};
}

std::vector<CurvePoint> beta_curve(const std::vector<double> &alpha_grid, const std::vector<std::size_t> &n_list)
{
  for (double a : alpha_grid)
  {
    if (!(a > 1.0))
    {
      throw DomainError("curve alphas must exceed 1");
    }
  }
  std::vector<CurvePoint> out;
  out.reserve(alpha_grid.size() * n_list.size());
  for (std::size_t n : n_list)
  {
    double hn = harmonic_approx(n);
    for (double a : alpha_grid)
    {
      double simple = std::pow(static_cast<double>(n), 1.0 / (a - 1.0)) * hn;
      out.push_back(CurvePoint{n, a, simple, beta_threshold(a, n)});
    }
  }
  return out;
}

}  // namespace clockaug
