#pragma once

#include "tvyw/error.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace tvyw {

using TimeIndex = std::int64_t;

//! Closed integer interval [first, last].
struct TimeRange
{
  TimeIndex first = 0;
  TimeIndex last = -1;

  std::int64_t size() const noexcept { return last >= first ? last - first + 1 : 0; }
  bool contains(TimeIndex t) const noexcept { return t >= first && t <= last; }
  bool contains(const TimeRange& other) const noexcept
  {
    return other.size() == 0 || (contains(other.first) && contains(other.last));
  }
  friend bool operator==(const TimeRange&, const TimeRange&) = default;
};

//! Observations X_t for t in a contiguous range of integer time indices.
class Series
{
public:
  Series() = default;
  Series(TimeIndex first, std::vector<double> values)
    : first_(first)
    , values_(std::move(values))
  {}

  TimeIndex first() const noexcept { return first_; }
  TimeIndex last() const noexcept
  {
    return first_ + static_cast<TimeIndex>(values_.size()) - 1;
  }
  TimeRange range() const noexcept { return { first(), last() }; }
  std::size_t size() const noexcept { return values_.size(); }

  double operator[](TimeIndex t) const { return values_[static_cast<std::size_t>(t - first_)]; }

  double at(TimeIndex t) const
  {
    if (!range().contains(t))
      throw Error(ErrorCode::WindowOutOfRange,
                  "time index " + std::to_string(t) + " outside [" +
                    std::to_string(first()) + ", " + std::to_string(last()) + "]");
    return (*this)[t];
  }

  //! Contiguous view of X_t for t in `r`; throws WindowOutOfRange if not covered.
  std::span<const double> window(const TimeRange& r) const
  {
    if (!range().contains(r))
      throw Error(ErrorCode::WindowOutOfRange,
                  "window [" + std::to_string(r.first) + ", " + std::to_string(r.last) +
                    "] not covered by series [" + std::to_string(first()) + ", " +
                    std::to_string(last()) + "]");
    return std::span<const double>(values_).subspan(
      static_cast<std::size_t>(r.first - first_), static_cast<std::size_t>(r.size()));
  }

  std::span<const double> values() const noexcept { return values_; }
  std::vector<double>& mutable_values() noexcept { return values_; }

private:
  TimeIndex first_ = 0;
  std::vector<double> values_;
};

} // namespace tvyw
