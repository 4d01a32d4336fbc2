#include "frocc/intervals.hpp"

namespace frocc {

template class IntervalSet<double>;
template class BinSet<double>;
template IntervalSet<double> build_intervals_exact<double>(std::span<const double>, double);
template BinSet<double> build_bins<double>(std::span<const double>, double);

}  // namespace frocc
