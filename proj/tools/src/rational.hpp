#pragma once

#include <cstdint>
#include <optional>
#include <string>

namespace tvyw::cli {

struct Fraction
{
  std::int64_t num = 0;
  std::int64_t den = 1;
};

//! Best rational approximation with den <= max_den from the continued
//! fraction of x; nullopt unless it reproduces x to `tol` (relative).
std::optional<Fraction> to_fraction(long double x, std::int64_t max_den, long double tol = 1e-12L);

//! "p/q", or "p" when q == 1.
std::string format_fraction(const Fraction& f);

} // namespace tvyw::cli
