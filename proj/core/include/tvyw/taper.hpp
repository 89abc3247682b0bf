#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace tvyw {

//! Default number of grid points for taper quadrature.
inline constexpr std::size_t kTaperGrid = 4096;

//! A data taper h on [0,1], normalized so that the integral of h^2 is one.
//!
//! Tapers are immutable value types; copies share the underlying callable.
class Taper
{
public:
  double operator()(double x) const { return fn_(x); }
  double evaluate(double x) const { return fn_(x); }

  double sup_norm() const noexcept { return sup_norm_; }
  bool is_symmetric() const noexcept { return symmetric_; }
  const std::string& name() const noexcept { return name_; }

  //! Bound on |h'|; informational only.
  std::optional<double> derivative_bound() const noexcept
  {
    return derivative_bound_;
  }

private:
  friend Taper rectangular_taper();
  friend Taper normalize_taper(std::string name,
                               std::function<double(double)> raw,
                               std::size_t n_grid);

  Taper(std::string name,
        std::function<double(double)> fn,
        double sup_norm,
        bool symmetric)
    : name_(std::move(name))
    , fn_(std::move(fn))
    , sup_norm_(sup_norm)
    , symmetric_(symmetric)
  {}

  std::string name_;
  std::function<double(double)> fn_;
  double sup_norm_;
  bool symmetric_;
  std::optional<double> derivative_bound_;
};

//! h == 1.
Taper rectangular_taper();

//! Rescales `raw` so that the trapezoidal integral of h^2 over an `n_grid`
//! point grid equals one. Symmetry is detected on the same grid.
//! Throws Error(ZeroTaper) if raw^2 integrates to less than 1e-14.
Taper normalize_taper(std::string name,
                      std::function<double(double)> raw,
                      std::size_t n_grid = kTaperGrid);

//! sqrt(2) sin(pi x); symmetric.
Taper sine_taper();

//! sqrt(3) x; not symmetric. Useful to exhibit first-order bias.
Taper ramp_taper();

//! Registry lookup: "rectangular", "sine", "ramp".
//! Throws Error(InvalidArgument) for unknown names.
Taper taper_by_name(std::string_view name);
std::vector<std::string> taper_names();

//! H_M = sum_{k=1}^{M} h^2(k/M). M must be even and >= 2.
double taper_weight_sum(const Taper& h, int M);

//! c_{h,l} = int_0^1 h^2(u) (u - 1/2)^l du by the trapezoidal rule.
double taper_moment(const Taper& h, int ell, std::size_t n_grid = kTaperGrid);

//! Composite trapezoid of f over [0,1] with n_grid equispaced points.
double trapezoid(const std::function<double(double)>& f, std::size_t n_grid);

} // namespace tvyw
