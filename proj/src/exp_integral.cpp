#include "scaledyn/exp_integral.hpp"

#include <cmath>
#include <limits>

#include "scaledyn/error.hpp"

namespace scaledyn {

namespace {
constexpr double kEulerGamma = 0.57721566490153286060651209008240243;
constexpr double kEps = std::numeric_limits<double>::epsilon();
}  // namespace

double exp_integral_series(double x) {
  if (x == 0.0) throw DomainError("Ei has a logarithmic singularity at x = 0");
  // gamma + ln|x| + sum_{n>=1} x^n / (n n!)
  double term = 1.0;
  double sum = 0.0;
  for (int n = 1; n < 1000; ++n) {
    term *= x / n;
    const double contribution = term / n;
    sum += contribution;
    if (n >= 30 && std::abs(contribution) <= kEps * std::abs(sum)) break;
  }
  return kEulerGamma + std::log(std::abs(x)) + sum;
}

double exp_integral_asymptotic(double x) {
  if (!(x > 0.0)) throw DomainError("asymptotic Ei expansion needs x > 0");
  // e^x / x * sum_k k! / x^k, truncated at the smallest term
  double term = 1.0;
  double sum = 1.0;
  for (int k = 1; k < 200; ++k) {
    const double next = term * k / x;
    if (next > term) break;
    term = next;
    sum += term;
    if (term <= kEps * sum) break;
  }
  return std::exp(x) / x * sum;
}

double exp_integral_continued_fraction(double x) {
  if (!(x < 0.0)) throw DomainError("continued-fraction branch needs x < 0");
  // Ei(x) = -E1(-x); modified Lentz evaluation of the E1 continued fraction.
  const double y = -x;
  constexpr double tiny = 1e-300;
  double b = y + 1.0;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < 1000; ++i) {
    const double an = -static_cast<double>(i) * i;
    b += 2.0;
    d = 1.0 / (an * d + b);
    c = b + an / c;
    const double delta = c * d;
    h *= delta;
    if (std::abs(delta - 1.0) <= kEps) break;
  }
  return -h * std::exp(-y);
}

double exp_integral(double x) {
  if (x == 0.0) throw DomainError("Ei has a logarithmic singularity at x = 0");
  if (std::isnan(x)) throw DomainError("Ei of NaN");
  if (x > kExpIntegralSeriesUpper) return exp_integral_asymptotic(x);
  if (x < kExpIntegralSeriesLower) return exp_integral_continued_fraction(x);
  return exp_integral_series(x);
}

}  // namespace scaledyn
