#include "romberg_oracle.hpp"

#include "tvyw/estimator.hpp"

#include <gtest/gtest.h>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include <vector>

using namespace tvyw;
using namespace tvyw::check;
using boost::multiprecision::cpp_bin_float_50;

TEST(RombergOracle, MatchesExactRationalSolution)
{
  for (int k = 0; k <= 8; ++k)
    for (bool sym : { false, true }) {
      const auto exact = exact_weights(k, sym);
      const auto w = romberg_weights(k, sym);
      ASSERT_EQ(w.size(), exact.size()) << "k=" << k;
      for (std::size_t j = 0; j < w.size(); ++j) {
        const double ref = static_cast<double>(static_cast<cpp_bin_float_50>(exact[j]));
        EXPECT_NEAR(static_cast<double>(w[j]), ref, 1e-14 * std::max(1.0, std::abs(ref))) << "k=" << k << " j=" << j;
      }
    }
}

TEST(RombergOracle, ResidualBelowTolerance)
{
  for (int k = 0; k <= 8; ++k)
    for (bool sym : { false, true }) {
      const auto w = romberg_weights(k, sym);
      const auto rows = k == 0 ? std::vector<int>{ 0 } : kept_rows(k, sym);
      cpp_bin_float_50 norm2 = 0;
      for (std::size_t r = 0; r < rows.size(); ++r) {
        cpp_bin_float_50 s = r == 0 ? -1 : 0;
        for (std::size_t j = 0; j < w.size(); ++j)
          s += static_cast<cpp_bin_float_50>(entry(rows[r], static_cast<int>(j))) * cpp_bin_float_50(w[j]);
        norm2 += s * s;
      }
      EXPECT_LE(static_cast<double>(sqrt(norm2)), 1e-10) << "k=" << k << " sym=" << sym;
    }
}

TEST(RombergOracle, HandSolvedCases)
{
  EXPECT_EQ(exact_weights(1, false), (std::vector<cpp_rational>{ 2, -1 }));
  EXPECT_EQ(exact_weights(2, true), (std::vector<cpp_rational>{ cpp_rational(4, 3), cpp_rational(-1, 3) }));
  EXPECT_EQ(exact_weights(2, false), (std::vector<cpp_rational>{ cpp_rational(8, 3), -2, cpp_rational(1, 3) }));
}
