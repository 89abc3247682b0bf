#pragma once

#include "tvyw/series.hpp"

#include <cstdint>
#include <initializer_list>
#include <span>

namespace tvyw {

//! Mixes a list of integers into one 64-bit seed through std::seed_seq.
//! Used to derive independent streams, e.g. {master, T, replicate}.
std::uint64_t derive_seed(std::initializer_list<std::uint64_t> parts);

//! Standard Gaussian innovations xi_t addressed by time index.
//!
//! Time is cut into fixed blocks; each block has its own engine seeded from
//! (seed, block). The value at t therefore does not depend on which range is
//! requested, so longer burn-in or wider windows reuse the same draws.
class GaussianInnovations
{
public:
  static constexpr std::int64_t kBlock = 1024;

  explicit GaussianInnovations(std::uint64_t seed)
    : seed_(seed)
  {}

  //! Writes xi_t for t = first .. first + out.size() - 1.
  void fill(TimeIndex first, std::span<double> out) const;

  std::uint64_t seed() const noexcept { return seed_; }

private:
  std::uint64_t seed_;
};

} // namespace tvyw
