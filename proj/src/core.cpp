#include "frocc/core.hpp"

#include <algorithm>
#include <cctype>

namespace frocc {

void validate_kernel(const Kernel& k) {
  std::visit(
      [](const auto& kern) {
        using K = std::decay_t<decltype(kern)>;
        if constexpr (std::is_same_v<K, RbfKernel> || std::is_same_v<K, SigmoidKernel>) {
          if (!(kern.gamma > 0.0) || !std::isfinite(kern.gamma))
            throw ArgumentError("kernel gamma must be a positive finite number");
        }
        if constexpr (std::is_same_v<K, PolynomialKernel>) {
          if (kern.degree < 1) throw ArgumentError("polynomial kernel degree must be >= 1");
        }
        if constexpr (std::is_same_v<K, PolynomialKernel> || std::is_same_v<K, SigmoidKernel>) {
          if (!std::isfinite(kern.coef0)) throw ArgumentError("kernel coef0 must be finite");
        }
      },
      k);
}

std::string kernel_name(const Kernel& k) {
  switch (k.index()) {
    case 0: return "linear";
    case 1: return "rbf";
    case 2: return "poly";
    default: return "sigmoid";
  }
}

Kernel make_kernel(const std::string& name, Eigen::Index d, const KernelParams& params) {
  if (d < 1) throw ArgumentError("make_kernel: d must be >= 1");
  std::string lower = name;
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  const double default_gamma = 1.0 / static_cast<double>(d);

  Kernel k;
  if (lower == "linear") {
    k = LinearKernel{};
  } else if (lower == "rbf") {
    k = RbfKernel{params.gamma.value_or(default_gamma)};
  } else if (lower == "poly" || lower == "polynomial") {
    k = PolynomialKernel{params.degree.value_or(3), params.coef0.value_or(0.0)};
  } else if (lower == "sigmoid") {
    k = SigmoidKernel{params.gamma.value_or(default_gamma), params.coef0.value_or(0.0)};
  } else {
    throw ArgumentError("unknown kernel '" + name + "' (expected linear, rbf, poly or sigmoid)");
  }
  validate_kernel(k);
  return k;
}

}  // namespace frocc
