#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <type_traits>
#include <variant>

#include <Eigen/Dense>

#include "frocc/error.hpp"

namespace frocc {

template <typename Scalar>
using RowMatrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

// m unit vectors in R^d, one per row.
template <typename Scalar>
using ProjectionMatrix = RowMatrix<Scalar>;

struct Seed {
  std::uint64_t value = 0;
  friend bool operator==(Seed, Seed) = default;
};

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

// Dot product with a fixed summation order. Fit and scoring must produce
// bit-identical projections for the same (w, x) regardless of where the
// operands live in memory, which Eigen's alignment-dependent reductions do
// not promise.
template <typename A, typename B>
typename A::Scalar ordered_dot(const Eigen::DenseBase<A>& a, const Eigen::DenseBase<B>& b) {
  using S = typename A::Scalar;
  const Eigen::Index d = a.size();
  S acc0 = 0, acc1 = 0, acc2 = 0, acc3 = 0;
  Eigen::Index k = 0;
  for (; k + 4 <= d; k += 4) {
    acc0 += a.coeff(k) * b.coeff(k);
    acc1 += a.coeff(k + 1) * b.coeff(k + 1);
    acc2 += a.coeff(k + 2) * b.coeff(k + 2);
    acc3 += a.coeff(k + 3) * b.coeff(k + 3);
  }
  for (; k < d; ++k) acc0 += a.coeff(k) * b.coeff(k);
  return (acc0 + acc1) + (acc2 + acc3);
}

template <typename A, typename B>
typename A::Scalar ordered_squared_distance(const Eigen::DenseBase<A>& a,
                                            const Eigen::DenseBase<B>& b) {
  using S = typename A::Scalar;
  const Eigen::Index d = a.size();
  S acc0 = 0, acc1 = 0;
  Eigen::Index k = 0;
  for (; k + 2 <= d; k += 2) {
    const S e0 = a.coeff(k) - b.coeff(k);
    const S e1 = a.coeff(k + 1) - b.coeff(k + 1);
    acc0 += e0 * e0;
    acc1 += e1 * e1;
  }
  for (; k < d; ++k) {
    const S e = a.coeff(k) - b.coeff(k);
    acc0 += e * e;
  }
  return acc0 + acc1;
}

}  // namespace detail

// Generator seed for row `row` of a projection matrix. Rows depend only on
// (master seed, row index), so any prefix of a longer matrix equals the
// shorter matrix, and rows can be drawn in any order or in parallel.
inline std::uint64_t row_seed(Seed master, std::uint64_t row) {
  return detail::splitmix64(detail::splitmix64(master.value) ^ detail::splitmix64(row + 1));
}

// Writes one uniformly distributed unit vector into `out` (Gaussian draw,
// then normalization).
template <typename Derived>
void sample_unit_vector_into(Eigen::DenseBase<Derived>& out, Seed master, std::uint64_t row) {
  using S = typename Derived::Scalar;
  std::mt19937_64 gen(row_seed(master, row));
  std::normal_distribution<double> normal(0.0, 1.0);
  const Eigen::Index d = out.size();
  Eigen::VectorXd draw(d);
  double norm = 0.0;
  do {
    for (Eigen::Index k = 0; k < d; ++k) draw(k) = normal(gen);
    norm = draw.norm();
  } while (!(norm > 0.0) || !std::isfinite(norm));
  for (Eigen::Index k = 0; k < d; ++k) out.coeffRef(k) = static_cast<S>(draw(k) / norm);
}

template <typename Scalar = double>
ProjectionMatrix<Scalar> sample_unit_vectors(Eigen::Index m, Eigen::Index d, Seed seed) {
  if (m < 1) throw ArgumentError("sample_unit_vectors: m must be >= 1");
  if (d < 1) throw ArgumentError("sample_unit_vectors: d must be >= 1");
  ProjectionMatrix<Scalar> w(m, d);
  for (Eigen::Index i = 0; i < m; ++i) {
    auto row = w.row(i);
    sample_unit_vector_into(row, seed, static_cast<std::uint64_t>(i));
  }
  return w;
}

// ---------------------------------------------------------------------------
// Kernels

struct LinearKernel {
  friend bool operator==(const LinearKernel&, const LinearKernel&) = default;
};

struct RbfKernel {
  double gamma = 1.0;
  friend bool operator==(const RbfKernel&, const RbfKernel&) = default;
};

struct PolynomialKernel {
  int degree = 3;
  double coef0 = 0.0;
  friend bool operator==(const PolynomialKernel&, const PolynomialKernel&) = default;
};

struct SigmoidKernel {
  double gamma = 1.0;
  double coef0 = 0.0;
  friend bool operator==(const SigmoidKernel&, const SigmoidKernel&) = default;
};

using Kernel = std::variant<LinearKernel, RbfKernel, PolynomialKernel, SigmoidKernel>;

// Throws ArgumentError when gamma <= 0 or degree < 1.
void validate_kernel(const Kernel& k);

std::string kernel_name(const Kernel& k);

// Builds a kernel by name ("linear", "rbf", "poly"/"polynomial", "sigmoid")
// with the usual one-class defaults for dimension d: gamma = 1/d, degree 3,
// coef0 = 0. Any engaged override replaces the default.
struct KernelParams {
  std::optional<double> gamma;
  std::optional<int> degree;
  std::optional<double> coef0;
};
Kernel make_kernel(const std::string& name, Eigen::Index d, const KernelParams& params = {});

namespace detail {

template <typename Scalar, typename W, typename X>
Scalar apply_kernel(const LinearKernel&, const Eigen::DenseBase<W>& w, const Eigen::DenseBase<X>& x) {
  return ordered_dot(w, x);
}

template <typename Scalar, typename W, typename X>
Scalar apply_kernel(const RbfKernel& k, const Eigen::DenseBase<W>& w, const Eigen::DenseBase<X>& x) {
  return std::exp(-static_cast<Scalar>(k.gamma) * ordered_squared_distance(w, x));
}

template <typename Scalar, typename W, typename X>
Scalar apply_kernel(const PolynomialKernel& k, const Eigen::DenseBase<W>& w,
                    const Eigen::DenseBase<X>& x) {
  const Scalar base = ordered_dot(w, x) + static_cast<Scalar>(k.coef0);
  Scalar result = 1;
  for (int p = 0; p < k.degree; ++p) result *= base;
  return result;
}

template <typename Scalar, typename W, typename X>
Scalar apply_kernel(const SigmoidKernel& k, const Eigen::DenseBase<W>& w,
                    const Eigen::DenseBase<X>& x) {
  return std::tanh(static_cast<Scalar>(k.gamma) * ordered_dot(w, x) + static_cast<Scalar>(k.coef0));
}

}  // namespace detail

// K(w, x). The RBF variant is evaluated against the raw coordinates of x, so
// features far outside the unit ball give vanishing projections; standardize
// such data first.
template <typename W, typename X>
typename W::Scalar kernel_eval(const Kernel& k, const Eigen::DenseBase<W>& w,
                               const Eigen::DenseBase<X>& x) {
  using S = typename W::Scalar;
  static_assert(std::is_same_v<S, typename X::Scalar>, "kernel_eval: scalar types differ");
  if (w.size() != x.size()) throw DataError("kernel_eval: dimension mismatch");
  return std::visit([&](const auto& kern) { return detail::apply_kernel<S>(kern, w, x); }, k);
}

// Projects every row of `points` onto `w`: out(j) = K(w, points.row(j)).
// Produces exactly the values kernel_eval would for each row.
template <typename W, typename P, typename Out>
void project_rows(const Kernel& k, const Eigen::DenseBase<W>& w, const Eigen::DenseBase<P>& points,
                  Eigen::DenseBase<Out>& out) {
  using S = typename W::Scalar;
  if (w.size() != points.cols()) throw DataError("project_rows: dimension mismatch");
  std::visit(
      [&](const auto& kern) {
        for (Eigen::Index j = 0; j < points.rows(); ++j)
          out.coeffRef(j) = detail::apply_kernel<S>(kern, w, points.row(j));
      },
      k);
}

}  // namespace frocc
