#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "frocc/error.hpp"

namespace frocc {

// Absolute tolerance for membership when every training projection is equal.
inline constexpr double kZeroRangeTolerance = 1e-12;

template <typename Scalar>
struct Interval {
  Scalar lo;
  Scalar hi;
  friend bool operator==(const Interval&, const Interval&) = default;
};

inline void check_epsilon(double epsilon) {
  if (!(epsilon > 0.0 && epsilon <= 1.0))
    throw ArgumentError("epsilon must lie in (0, 1], got " + std::to_string(epsilon));
}

// Number of bins used for a given separation: ceil(1/epsilon). The small
// slack keeps 1/0.1 and friends from rounding up to an extra bin.
inline std::size_t bin_count(double epsilon) {
  check_epsilon(epsilon);
  const double b = std::ceil(1.0 / epsilon - 1e-9);
  return static_cast<std::size_t>(std::max(1.0, b));
}

namespace detail {

template <typename Scalar>
void check_projections(std::span<const Scalar> projections) {
  if (projections.empty()) throw DataError("projection list is empty");
  for (std::size_t i = 0; i < projections.size(); ++i) {
    if (!std::isfinite(projections[i])) throw DataError("projection list contains a non-finite value");
    if (i > 0 && projections[i] < projections[i - 1])
      throw DataError("projection list is not sorted ascending");
  }
}

}  // namespace detail

// Epsilon-separated inlier intervals along one classifying direction, in raw
// projection coordinates.
//
// Invariants: intervals sorted and disjoint, first lo == min_raw, last
// hi == max_raw, consecutive intervals separated by at least
// epsilon * (max_raw - min_raw).
template <typename Scalar>
class IntervalSet {
 public:
  using value_type = Interval<Scalar>;

  IntervalSet() = default;

  // Reassembles a set from stored parts (deserialization); validates the
  // structural invariants.
  static IntervalSet from_parts(std::vector<value_type> intervals, Scalar min_raw, Scalar max_raw,
                                double epsilon) {
    check_epsilon(epsilon);
    if (intervals.empty()) throw FormatError("interval set has no intervals");
    if (!(min_raw <= max_raw)) throw FormatError("interval set has min_raw > max_raw");
    for (std::size_t i = 0; i < intervals.size(); ++i) {
      if (!(intervals[i].lo <= intervals[i].hi)) throw FormatError("interval with lo > hi");
      if (i > 0 && !(intervals[i - 1].hi < intervals[i].lo))
        throw FormatError("intervals are not sorted and disjoint");
    }
    if (intervals.front().lo != min_raw || intervals.back().hi != max_raw)
      throw FormatError("interval endpoints disagree with min_raw/max_raw");
    IntervalSet s;
    s.intervals_ = std::move(intervals);
    s.min_raw_ = min_raw;
    s.max_raw_ = max_raw;
    s.epsilon_ = epsilon;
    return s;
  }

  const std::vector<value_type>& intervals() const { return intervals_; }
  std::size_t size() const { return intervals_.size(); }
  Scalar min_raw() const { return min_raw_; }
  Scalar max_raw() const { return max_raw_; }
  Scalar range() const { return max_raw_ - min_raw_; }
  double epsilon() const { return epsilon_; }

  // Closed-endpoint membership, O(log k).
  bool contains(Scalar value) const {
    if (min_raw_ == max_raw_) return std::abs(value - min_raw_) <= static_cast<Scalar>(kZeroRangeTolerance);
    if (value < min_raw_ || value > max_raw_) return false;
    auto it = std::upper_bound(intervals_.begin(), intervals_.end(), value,
                               [](Scalar v, const value_type& iv) { return v < iv.lo; });
    if (it == intervals_.begin()) return false;
    return value <= std::prev(it)->hi;
  }

  friend bool operator==(const IntervalSet&, const IntervalSet&) = default;

 private:
  template <typename S>
  friend IntervalSet<S> build_intervals_exact(std::span<const S>, double);

  std::vector<value_type> intervals_;
  Scalar min_raw_ = 0;
  Scalar max_raw_ = 0;
  double epsilon_ = 1.0;
};

// Walks the sorted projections once: a step smaller than
// margin = epsilon * range extends the current interval, anything else
// (including a step exactly equal to the margin) closes it and opens a new
// one. A trailing single-point interval is kept. With epsilon == 1 or a zero
// range the result is the single interval [min, max].
template <typename Scalar>
IntervalSet<Scalar> build_intervals_exact(std::span<const Scalar> projections, double epsilon) {
  check_epsilon(epsilon);
  detail::check_projections(projections);

  IntervalSet<Scalar> s;
  s.min_raw_ = projections.front();
  s.max_raw_ = projections.back();
  s.epsilon_ = epsilon;

  const Scalar range = s.max_raw_ - s.min_raw_;
  if (epsilon == 1.0 || range == 0) {
    s.intervals_.push_back({s.min_raw_, s.max_raw_});
    return s;
  }

  const Scalar margin = range * static_cast<Scalar>(epsilon);
  Scalar start = projections.front();
  Scalar end = projections.front();
  for (std::size_t i = 1; i < projections.size(); ++i) {
    const Scalar p = projections[i];
    if (p < end + margin) {
      end = p;
    } else {
      s.intervals_.push_back({start, end});
      start = end = p;
    }
  }
  s.intervals_.push_back({start, end});
  return s;
}

template <typename Scalar>
IntervalSet<Scalar> build_intervals_exact(const std::vector<Scalar>& projections, double epsilon) {
  return build_intervals_exact(std::span<const Scalar>(projections), epsilon);
}

template <typename Scalar>
bool query_intervals(const IntervalSet<Scalar>& s, Scalar value) {
  return s.contains(value);
}

// Occupancy bitmap over ceil(1/epsilon) equal-width bins spanning
// [min_raw, max_raw]. The last bin is closed on the right. A zero range
// collapses to one pseudo-bin.
template <typename Scalar>
class BinSet {
 public:
  BinSet() = default;

  static BinSet from_parts(std::vector<bool> occupied, Scalar min_raw, Scalar max_raw, double epsilon) {
    check_epsilon(epsilon);
    if (!(min_raw <= max_raw)) throw FormatError("bin set has min_raw > max_raw");
    const std::size_t expected = min_raw == max_raw ? 1 : bin_count(epsilon);
    if (occupied.size() != expected)
      throw FormatError("bin set has " + std::to_string(occupied.size()) + " bins, expected " +
                        std::to_string(expected));
    if (!occupied.front() || !occupied.back())
      throw FormatError("bin set does not occupy its end bins");
    BinSet b;
    b.occupied_ = std::move(occupied);
    b.min_raw_ = min_raw;
    b.max_raw_ = max_raw;
    b.epsilon_ = epsilon;
    return b;
  }

  const std::vector<bool>& occupied() const { return occupied_; }
  std::size_t bins() const { return occupied_.size(); }
  Scalar min_raw() const { return min_raw_; }
  Scalar max_raw() const { return max_raw_; }
  double epsilon() const { return epsilon_; }

  Scalar bin_width() const { return (max_raw_ - min_raw_) / static_cast<Scalar>(occupied_.size()); }

  // Bin holding `value`, for values inside [min_raw, max_raw].
  std::size_t bin_of(Scalar value) const {
    if (min_raw_ == max_raw_) return 0;
    const Scalar pos = (value - min_raw_) / bin_width();
    if (!(pos > 0)) return 0;
    const auto b = static_cast<std::size_t>(std::floor(pos));
    return std::min(b, occupied_.size() - 1);
  }

  // Inside the raw range and the value's bin or one of its neighbours is
  // occupied.
  bool contains(Scalar value) const {
    if (min_raw_ == max_raw_) return std::abs(value - min_raw_) <= static_cast<Scalar>(kZeroRangeTolerance);
    if (value < min_raw_ || value > max_raw_) return false;
    const std::size_t b = bin_of(value);
    if (occupied_[b]) return true;
    if (b > 0 && occupied_[b - 1]) return true;
    return b + 1 < occupied_.size() && occupied_[b + 1];
  }

  // Maximal runs of occupied bins; the bin-mode stand-in for an interval count.
  std::size_t occupied_runs() const {
    std::size_t runs = 0;
    for (std::size_t b = 0; b < occupied_.size(); ++b)
      if (occupied_[b] && (b == 0 || !occupied_[b - 1])) ++runs;
    return runs;
  }

  friend bool operator==(const BinSet&, const BinSet&) = default;

 private:
  template <typename S>
  friend BinSet<S> build_bins(std::span<const S>, double);

  std::vector<bool> occupied_;
  Scalar min_raw_ = 0;
  Scalar max_raw_ = 0;
  double epsilon_ = 1.0;
};

template <typename Scalar>
BinSet<Scalar> build_bins(std::span<const Scalar> projections, double epsilon) {
  check_epsilon(epsilon);
  detail::check_projections(projections);

  BinSet<Scalar> b;
  b.min_raw_ = projections.front();
  b.max_raw_ = projections.back();
  b.epsilon_ = epsilon;
  if (b.min_raw_ == b.max_raw_) {
    b.occupied_.assign(1, true);
    return b;
  }
  b.occupied_.assign(bin_count(epsilon), false);
  for (const Scalar p : projections) b.occupied_[b.bin_of(p)] = true;
  return b;
}

template <typename Scalar>
BinSet<Scalar> build_bins(const std::vector<Scalar>& projections, double epsilon) {
  return build_bins(std::span<const Scalar>(projections), epsilon);
}

template <typename Scalar>
bool query_bins(const BinSet<Scalar>& b, Scalar value) {
  return b.contains(value);
}

extern template class IntervalSet<double>;
extern template class BinSet<double>;
extern template IntervalSet<double> build_intervals_exact<double>(std::span<const double>, double);
extern template BinSet<double> build_bins<double>(std::span<const double>, double);

}  // namespace frocc
