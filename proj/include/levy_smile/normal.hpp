#pragma once

namespace levy {

double norm_pdf(double x);

/// Standard normal CDF from erfc; relative accuracy holds deep into the left tail.
double norm_cdf(double x);

/// Mills ratio R(t) = Phi(-t) / phi(t), t >= 0.
double mills_ratio(double t);

/// 1 - t R(t) = -R'(t) without cancellation, t >= 0 (continued fraction for large t).
double mills_gap(double t);

/// R(a) - R(b) = int_a^b mills_gap, 0 <= a <= b, accurate when b - a << a.
double mills_difference(double a, double b);

}  // namespace levy
