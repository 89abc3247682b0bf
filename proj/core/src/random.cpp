#include "tvyw/random.hpp"

#include <array>
#include <random>
#include <vector>

namespace tvyw {

namespace {

std::int64_t
floor_div(std::int64_t a, std::int64_t b)
{
  std::int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0)))
    --q;
  return q;
}

void
fill_block(std::uint64_t seed, std::int64_t block, std::span<double, GaussianInnovations::kBlock> out)
{
  const auto b = static_cast<std::uint64_t>(block);
  std::seed_seq seq{ static_cast<std::uint32_t>(seed),
                     static_cast<std::uint32_t>(seed >> 32),
                     static_cast<std::uint32_t>(b),
                     static_cast<std::uint32_t>(b >> 32) };
  std::mt19937_64 engine(seq);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (double& v : out)
    v = normal(engine);
}

} // namespace

std::uint64_t
derive_seed(std::initializer_list<std::uint64_t> parts)
{
  std::vector<std::uint32_t> words;
  words.reserve(2 * parts.size());
  for (auto p : parts) {
    words.push_back(static_cast<std::uint32_t>(p));
    words.push_back(static_cast<std::uint32_t>(p >> 32));
  }
  std::seed_seq seq(words.begin(), words.end());
  std::array<std::uint32_t, 2> out{};
  seq.generate(out.begin(), out.end());
  return (static_cast<std::uint64_t>(out[1]) << 32) | out[0];
}

void
GaussianInnovations::fill(TimeIndex first, std::span<double> out) const
{
  if (out.empty())
    return;
  std::array<double, kBlock> buffer{};
  const TimeIndex last = first + static_cast<TimeIndex>(out.size()) - 1;
  const std::int64_t b0 = floor_div(first, kBlock);
  const std::int64_t b1 = floor_div(last, kBlock);
  for (std::int64_t b = b0; b <= b1; ++b) {
    fill_block(seed_, b, buffer);
    const TimeIndex block_first = b * kBlock;
    const TimeIndex lo = std::max(first, block_first);
    const TimeIndex hi = std::min(last, block_first + kBlock - 1);
    for (TimeIndex t = lo; t <= hi; ++t)
      out[static_cast<std::size_t>(t - first)] = buffer[static_cast<std::size_t>(t - block_first)];
  }
}

} // namespace tvyw
