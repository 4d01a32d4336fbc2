#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "frocc/core.hpp"
#include "frocc/intervals.hpp"
#include "frocc/standardize.hpp"

namespace frocc {

enum class Mode { Exact, Binned };

std::string mode_name(Mode mode);
Mode parse_mode(const std::string& name);

inline constexpr int kFormatVersion = 1;

struct FitOptions {
  Eigen::Index m = 100;
  double epsilon = 0.1;
  Kernel kernel = LinearKernel{};
  Seed seed{0};
  Mode mode = Mode::Exact;
  // 0 picks std::thread::hardware_concurrency(). The fitted model does not
  // depend on this value.
  unsigned threads = 1;
  bool standardize = false;
};

// A trained epsilon-separated random-projection one-class classifier.
//
// Holds m unit directions and, per direction, the inlier intervals (exact
// mode) or occupancy bins (binned mode) of the training projections.
// Immutable after construction; concurrent scoring on a shared model is safe.
class FroccModel {
 public:
  using IntervalSets = std::vector<IntervalSet<double>>;
  using BinSets = std::vector<BinSet<double>>;
  using PerDirection = std::variant<IntervalSets, BinSets>;

  FroccModel(ProjectionMatrix<double> directions, Kernel kernel, double epsilon, Seed seed,
             PerDirection per_direction, std::optional<Standardizer> standardizer,
             std::size_t n_train);

  Eigen::Index m() const { return directions_.rows(); }
  Eigen::Index dim() const { return directions_.cols(); }
  double epsilon() const { return epsilon_; }
  const Kernel& kernel() const { return kernel_; }
  Seed seed() const { return seed_; }
  Mode mode() const { return per_direction_.index() == 0 ? Mode::Exact : Mode::Binned; }
  const ProjectionMatrix<double>& directions() const { return directions_; }
  const PerDirection& per_direction() const { return per_direction_; }
  const std::optional<Standardizer>& standardizer() const { return standardizer_; }
  std::size_t n_train() const { return n_train_; }
  int format_version() const { return kFormatVersion; }

  // Membership of a projection value along direction i.
  bool direction_contains(Eigen::Index i, double value) const {
    return std::visit([&](const auto& sets) { return sets[static_cast<std::size_t>(i)].contains(value); },
                      per_direction_);
  }

  friend bool operator==(const FroccModel& a, const FroccModel& b);

 private:
  ProjectionMatrix<double> directions_;
  Kernel kernel_;
  double epsilon_;
  Seed seed_;
  PerDirection per_direction_;
  std::optional<Standardizer> standardizer_;
  std::size_t n_train_;
};

// Trains on the rows of `points` (n x d). Directions are processed
// independently; each one projects every point, sorts the projections and
// builds its interval or bin set. With epsilon == 1 only the projection
// extremes are needed and the sort is skipped.
FroccModel fit(const Eigen::Ref<const RowMatrix<double>>& points, const FitOptions& options);

// Fraction of directions whose set contains K(w_i, x).
double decision_score(const FroccModel& model, const Eigen::Ref<const Eigen::VectorXd>& x);

// Scores every row of `points`.
Eigen::VectorXd decision_scores(const FroccModel& model, const Eigen::Ref<const RowMatrix<double>>& points,
                                unsigned threads = 1);

// YES iff every direction contains the projection.
bool predict(const FroccModel& model, const Eigen::Ref<const Eigen::VectorXd>& x);

struct ModelSize {
  // Sum over directions of 2 * k_i.
  std::size_t total = 0;
  std::vector<std::size_t> per_direction;
  // Binned models report occupied-bin runs in place of interval counts.
  bool approximate = false;
};

ModelSize model_size(const FroccModel& model);

// The model restricted to its first m directions. Because directions are
// prefix-stable this equals fitting with m directly.
FroccModel truncate(const FroccModel& model, Eigen::Index m);

// ---------------------------------------------------------------------------
// Lower-level entry points for sharing projections across several epsilons
// or direction counts. Points must already be standardized if the caller
// wants standardization.

// P(i, j) = K(w_i, points.row(j)), an m x n matrix.
RowMatrix<double> project(const ProjectionMatrix<double>& directions, const Kernel& kernel,
                          const Eigen::Ref<const RowMatrix<double>>& points, unsigned threads = 1);

// Builds a model from training projections produced by project().
FroccModel fit_from_projections(const ProjectionMatrix<double>& directions,
                                const Eigen::Ref<const RowMatrix<double>>& projections,
                                const FitOptions& options);

// Scores columns of `projections` (m' x n with m' >= model.m()) against the
// model's first m directions.
Eigen::VectorXd scores_from_projections(const FroccModel& model,
                                        const Eigen::Ref<const RowMatrix<double>>& projections);

}  // namespace frocc
