#pragma once

namespace scaledyn {

/// Exponential integral Ei(x) = PV int_{-inf}^{x} e^t / t dt, x != 0.
///
/// Power series on [-2, 40], asymptotic series above 40, and the continued
/// fraction of E1(-x) below -2. Throws DomainError at x = 0.
double exp_integral(double x);

/// The individual branches, exposed so their crossovers can be checked.
double exp_integral_series(double x);
double exp_integral_asymptotic(double x);
double exp_integral_continued_fraction(double x);

inline constexpr double kExpIntegralSeriesLower = -2.0;
inline constexpr double kExpIntegralSeriesUpper = 40.0;

}  // namespace scaledyn
