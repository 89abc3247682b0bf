#include "rational.hpp"

#include <cmath>

namespace tvyw::cli {

std::optional<Fraction>
to_fraction(long double x, std::int64_t max_den, long double tol)
{
  if (!std::isfinite(x))
    return std::nullopt;
  const bool negative = x < 0;
  long double r = std::fabs(x);
  const long double target = r;

  // Convergents h/k of the continued fraction.
  std::int64_t h0 = 0, h1 = 1, k0 = 1, k1 = 0;
  for (int iter = 0; iter < 64; ++iter) {
    const long double a_ld = std::floor(r);
    if (a_ld > 9.0e15L)
      break;
    const auto a = static_cast<std::int64_t>(a_ld);
    const std::int64_t k2 = a * k1 + k0;
    if (k2 > max_den)
      break;
    const std::int64_t h2 = a * h1 + h0;
    h0 = h1;
    h1 = h2;
    k0 = k1;
    k1 = k2;
    const long double approx = static_cast<long double>(h1) / static_cast<long double>(k1);
    if (std::fabs(approx - target) <= tol * std::max(1.0L, target))
      return Fraction{ negative ? -h1 : h1, k1 };
    const long double frac = r - a_ld;
    if (frac <= 0)
      break;
    r = 1.0L / frac;
  }
  return std::nullopt;
}

std::string
format_fraction(const Fraction& f)
{
  if (f.den == 1)
    return std::to_string(f.num);
  return std::to_string(f.num) + "/" + std::to_string(f.den);
}

} // namespace tvyw::cli
