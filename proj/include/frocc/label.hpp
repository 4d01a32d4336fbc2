#pragma once

#include <cstdint>

namespace frocc {

// Binary one-class label. Positives are the normal class.
enum class Label : std::uint8_t { Negative = 0, Positive = 1 };

}  // namespace frocc
