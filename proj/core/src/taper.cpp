#include "tvyw/taper.hpp"

#include "tvyw/error.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace tvyw {

namespace {

constexpr double kSymmetryTol = 1e-12;
constexpr double kZeroTaperTol = 1e-14;

} // namespace

double
trapezoid(const std::function<double(double)>& f, std::size_t n_grid)
{
  if (n_grid < 2)
    throw Error(ErrorCode::InvalidArgument, "trapezoid needs at least 2 points");
  const double step = 1.0 / static_cast<double>(n_grid - 1);
  double sum = 0.5 * (f(0.0) + f(1.0));
  for (std::size_t i = 1; i + 1 < n_grid; ++i)
    sum += f(static_cast<double>(i) * step);
  return sum * step;
}

Taper
rectangular_taper()
{
  return Taper("rectangular", [](double) { return 1.0; }, 1.0, true);
}

Taper
normalize_taper(std::string name,
                std::function<double(double)> raw,
                std::size_t n_grid)
{
  if (n_grid < 2)
    throw Error(ErrorCode::InvalidArgument, "n_grid must be at least 2");

  const double energy = trapezoid(
    [&raw](double x) {
      const double v = raw(x);
      return v * v;
    },
    n_grid);
  if (!(energy >= kZeroTaperTol))
    throw Error(ErrorCode::ZeroTaper,
                "taper '" + name + "' is identically zero on the grid");

  const double scale = 1.0 / std::sqrt(energy);
  auto fn = [raw = std::move(raw), scale](double x) { return scale * raw(x); };

  const double step = 1.0 / static_cast<double>(n_grid - 1);
  double sup = 0.0;
  std::size_t argmax = 0;
  bool symmetric = true;
  for (std::size_t i = 0; i < n_grid; ++i) {
    const double x = static_cast<double>(i) * step;
    const double v = fn(x);
    if (std::abs(v) > sup) {
      sup = std::abs(v);
      argmax = i;
    }
    const double mirrored = fn(static_cast<double>(n_grid - 1 - i) * step);
    if (std::abs(v - mirrored) > kSymmetryTol)
      symmetric = false;
  }
  // The peak may fall between grid points; polish it by golden-section search
  // over the neighbouring cells.
  double a = std::max(0.0, (static_cast<double>(argmax) - 1.0) * step);
  double b = std::min(1.0, (static_cast<double>(argmax) + 1.0) * step);
  const double g = (std::sqrt(5.0) - 1.0) / 2.0;
  for (int iter = 0; iter < 80 && b - a > 1e-15; ++iter) {
    const double c = b - g * (b - a), d = a + g * (b - a);
    if (std::abs(fn(c)) >= std::abs(fn(d)))
      b = d;
    else
      a = c;
  }
  sup = std::max({ sup, std::abs(fn(a)), std::abs(fn(b)) });
  return Taper(std::move(name), std::move(fn), sup, symmetric);
}

Taper
sine_taper()
{
  return normalize_taper(
    "sine", [](double x) { return std::sin(std::numbers::pi * x); });
}

Taper
ramp_taper()
{
  return normalize_taper("ramp", [](double x) { return x; });
}

Taper
taper_by_name(std::string_view name)
{
  if (name == "rectangular")
    return rectangular_taper();
  if (name == "sine")
    return sine_taper();
  if (name == "ramp")
    return ramp_taper();
  throw Error(ErrorCode::InvalidArgument,
              "unknown taper '" + std::string(name) + "'");
}

std::vector<std::string>
taper_names()
{
  return { "rectangular", "sine", "ramp" };
}

double
taper_weight_sum(const Taper& h, int M)
{
  if (M < 2 || M % 2 != 0)
    throw Error(ErrorCode::OddBandwidth,
                "bandwidth must be even and >= 2, got " + std::to_string(M));
  double sum = 0.0;
  for (int k = 1; k <= M; ++k) {
    const double v = h(static_cast<double>(k) / M);
    sum += v * v;
  }
  return sum;
}

double
taper_moment(const Taper& h, int ell, std::size_t n_grid)
{
  if (ell < 0)
    throw Error(ErrorCode::InvalidArgument, "moment order must be >= 0");
  if (n_grid < 64)
    throw Error(ErrorCode::InvalidArgument, "moment grid needs >= 64 points");
  return trapezoid(
    [&h, ell](double u) {
      const double v = h(u);
      return v * v * std::pow(u - 0.5, ell);
    },
    n_grid);
}

} // namespace tvyw
