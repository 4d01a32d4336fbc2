#include "frocc/model.hpp"

#include <algorithm>
#include <cmath>

#include "parallel.hpp"

namespace frocc {

std::string mode_name(Mode mode) { return mode == Mode::Exact ? "exact" : "bin"; }

Mode parse_mode(const std::string& name) {
  if (name == "exact") return Mode::Exact;
  if (name == "bin" || name == "binned") return Mode::Binned;
  throw ArgumentError("unknown mode '" + name + "' (expected exact or bin)");
}

FroccModel::FroccModel(ProjectionMatrix<double> directions, Kernel kernel, double epsilon, Seed seed,
                       PerDirection per_direction, std::optional<Standardizer> standardizer,
                       std::size_t n_train)
    : directions_(std::move(directions)),
      kernel_(kernel),
      epsilon_(epsilon),
      seed_(seed),
      per_direction_(std::move(per_direction)),
      standardizer_(std::move(standardizer)),
      n_train_(n_train) {
  check_epsilon(epsilon_);
  validate_kernel(kernel_);
  if (directions_.rows() < 1 || directions_.cols() < 1)
    throw ArgumentError("model needs at least one direction of dimension >= 1");
  const auto count = std::visit([](const auto& sets) { return sets.size(); }, per_direction_);
  if (count != static_cast<std::size_t>(directions_.rows()))
    throw FormatError("per-direction set count does not match the number of directions");
  if (standardizer_ && (standardizer_->mean.size() != directions_.cols() ||
                        standardizer_->scale.size() != directions_.cols()))
    throw FormatError("standardizer dimension does not match the model dimension");
}

bool operator==(const FroccModel& a, const FroccModel& b) {
  return a.directions_.rows() == b.directions_.rows() && a.directions_.cols() == b.directions_.cols() &&
         a.directions_ == b.directions_ && a.kernel_ == b.kernel_ && a.epsilon_ == b.epsilon_ &&
         a.seed_ == b.seed_ && a.per_direction_ == b.per_direction_ &&
         a.standardizer_ == b.standardizer_ && a.n_train_ == b.n_train_;
}

namespace {

void check_points(const Eigen::Ref<const RowMatrix<double>>& points) {
  if (points.rows() < 1) throw DataError("training set is empty");
  if (points.cols() < 1) throw DataError("training points have dimension 0");
  if (!points.allFinite()) throw DataError("training set contains non-finite values");
}

}  // namespace

RowMatrix<double> project(const ProjectionMatrix<double>& directions, const Kernel& kernel,
                          const Eigen::Ref<const RowMatrix<double>>& points, unsigned threads) {
  if (directions.cols() != points.cols())
    throw DataError("dimension mismatch: directions have d=" + std::to_string(directions.cols()) +
                    ", points have d=" + std::to_string(points.cols()));
  RowMatrix<double> out(directions.rows(), points.rows());
  detail::parallel_for(static_cast<std::size_t>(directions.rows()), threads,
                       [&](std::size_t begin, std::size_t end) {
                         for (std::size_t i = begin; i < end; ++i) {
                           auto row = out.row(static_cast<Eigen::Index>(i));
                           project_rows(kernel, directions.row(static_cast<Eigen::Index>(i)), points, row);
                         }
                       });
  return out;
}

namespace {

// Builds direction i's set from its (unsorted) projections; `scratch` is
// reordered in place.
template <typename Set>
Set build_direction(std::vector<double>& scratch, double epsilon) {
  if (epsilon == 1.0) {
    const auto [lo, hi] = std::minmax_element(scratch.begin(), scratch.end());
    const std::vector<double> extremes{*lo, *hi};
    if constexpr (std::is_same_v<Set, IntervalSet<double>>) {
      return build_intervals_exact(extremes, epsilon);
    } else {
      return build_bins(extremes, epsilon);
    }
  }
  std::sort(scratch.begin(), scratch.end());
  if constexpr (std::is_same_v<Set, IntervalSet<double>>) {
    return build_intervals_exact(scratch, epsilon);
  } else {
    return build_bins(scratch, epsilon);
  }
}

template <typename Set>
std::vector<Set> build_all(const ProjectionMatrix<double>& directions, const Kernel& kernel,
                           const Eigen::Ref<const RowMatrix<double>>* points,
                           const Eigen::Ref<const RowMatrix<double>>* projections, double epsilon,
                           unsigned threads) {
  const auto m = static_cast<std::size_t>(directions.rows());
  std::vector<Set> sets(m);
  detail::parallel_for(m, threads, [&](std::size_t begin, std::size_t end) {
    std::vector<double> scratch;
    for (std::size_t i = begin; i < end; ++i) {
      const auto row = static_cast<Eigen::Index>(i);
      if (projections) {
        const auto p = projections->row(row);
        scratch.assign(p.data(), p.data() + p.size());
      } else {
        scratch.resize(static_cast<std::size_t>(points->rows()));
        Eigen::Map<Eigen::VectorXd> out(scratch.data(), points->rows());
        project_rows(kernel, directions.row(row), *points, out);
      }
      sets[i] = build_direction<Set>(scratch, epsilon);
    }
  });
  return sets;
}

FroccModel assemble(ProjectionMatrix<double> directions, const Eigen::Ref<const RowMatrix<double>>* points,
                    const Eigen::Ref<const RowMatrix<double>>* projections, const FitOptions& options,
                    std::optional<Standardizer> standardizer, std::size_t n_train) {
  FroccModel::PerDirection per_direction;
  if (options.mode == Mode::Exact) {
    per_direction = build_all<IntervalSet<double>>(directions, options.kernel, points, projections,
                                                   options.epsilon, options.threads);
  } else {
    per_direction = build_all<BinSet<double>>(directions, options.kernel, points, projections,
                                              options.epsilon, options.threads);
  }
  return FroccModel(std::move(directions), options.kernel, options.epsilon, options.seed,
                    std::move(per_direction), std::move(standardizer), n_train);
}

void check_options(const FitOptions& options) {
  if (options.m < 1) throw ArgumentError("m must be >= 1");
  check_epsilon(options.epsilon);
  validate_kernel(options.kernel);
}

}  // namespace

FroccModel fit(const Eigen::Ref<const RowMatrix<double>>& points, const FitOptions& options) {
  check_options(options);
  check_points(points);

  ProjectionMatrix<double> directions(options.m, points.cols());
  detail::parallel_for(static_cast<std::size_t>(options.m), options.threads,
                       [&](std::size_t begin, std::size_t end) {
                         for (std::size_t i = begin; i < end; ++i) {
                           auto row = directions.row(static_cast<Eigen::Index>(i));
                           sample_unit_vector_into(row, options.seed, i);
                         }
                       });

  const auto n = static_cast<std::size_t>(points.rows());
  if (options.standardize) {
    Standardizer standardizer = Standardizer::fit(points);
    const RowMatrix<double> scaled = standardizer.transform(points);
    const Eigen::Ref<const RowMatrix<double>> ref(scaled);
    return assemble(std::move(directions), &ref, nullptr, options, std::move(standardizer), n);
  }
  return assemble(std::move(directions), &points, nullptr, options, std::nullopt, n);
}

FroccModel fit_from_projections(const ProjectionMatrix<double>& directions,
                                const Eigen::Ref<const RowMatrix<double>>& projections,
                                const FitOptions& options) {
  check_options(options);
  if (projections.rows() < directions.rows())
    throw ArgumentError("fewer projection rows than directions");
  if (projections.cols() < 1) throw DataError("training set is empty");
  if (!projections.allFinite()) throw DataError("projections contain non-finite values");
  const Eigen::Ref<const RowMatrix<double>> used(projections.topRows(directions.rows()));
  return assemble(directions, nullptr, &used, options, std::nullopt,
                  static_cast<std::size_t>(projections.cols()));
}

namespace {

template <typename Derived>
std::size_t count_contained(const FroccModel& model, const Eigen::MatrixBase<Derived>& x) {
  const auto& w = model.directions();
  std::size_t hits = 0;
  for (Eigen::Index i = 0; i < model.m(); ++i)
    if (model.direction_contains(i, kernel_eval(model.kernel(), w.row(i), x))) ++hits;
  return hits;
}

std::size_t contained_directions(const FroccModel& model, const Eigen::Ref<const Eigen::VectorXd>& x) {
  if (x.size() != model.dim())
    throw DataError("dimension mismatch: model has d=" + std::to_string(model.dim()) +
                    ", point has d=" + std::to_string(x.size()));
  if (model.standardizer()) return count_contained(model, model.standardizer()->transform_point(x));
  return count_contained(model, x);
}

}  // namespace

double decision_score(const FroccModel& model, const Eigen::Ref<const Eigen::VectorXd>& x) {
  return static_cast<double>(contained_directions(model, x)) / static_cast<double>(model.m());
}

bool predict(const FroccModel& model, const Eigen::Ref<const Eigen::VectorXd>& x) {
  return contained_directions(model, x) == static_cast<std::size_t>(model.m());
}

Eigen::VectorXd decision_scores(const FroccModel& model, const Eigen::Ref<const RowMatrix<double>>& points,
                                unsigned threads) {
  if (points.cols() != model.dim())
    throw DataError("dimension mismatch: model has d=" + std::to_string(model.dim()) +
                    ", points have d=" + std::to_string(points.cols()));
  const auto n = points.rows();
  Eigen::VectorXd scores(n);
  auto score_rows = [&](const auto& data) {
    detail::parallel_for(static_cast<std::size_t>(n), threads, [&](std::size_t begin, std::size_t end) {
      for (std::size_t j = begin; j < end; ++j) {
        const auto row = static_cast<Eigen::Index>(j);
        scores(row) = static_cast<double>(count_contained(model, data.row(row).transpose())) /
                      static_cast<double>(model.m());
      }
    });
  };
  if (model.standardizer()) {
    score_rows(model.standardizer()->transform(points));
  } else {
    score_rows(points);
  }
  return scores;
}

Eigen::VectorXd scores_from_projections(const FroccModel& model,
                                        const Eigen::Ref<const RowMatrix<double>>& projections) {
  if (projections.rows() < model.m()) throw ArgumentError("fewer projection rows than model directions");
  const auto n = projections.cols();
  Eigen::VectorXi hits = Eigen::VectorXi::Zero(n);
  for (Eigen::Index i = 0; i < model.m(); ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      if (model.direction_contains(i, projections(i, j))) ++hits(j);
  return hits.cast<double>() / static_cast<double>(model.m());
}

ModelSize model_size(const FroccModel& model) {
  ModelSize size;
  std::visit(
      [&](const auto& sets) {
        using Sets = std::decay_t<decltype(sets)>;
        for (const auto& s : sets) {
          std::size_t k = 0;
          if constexpr (std::is_same_v<Sets, FroccModel::IntervalSets>) {
            k = s.size();
          } else {
            k = s.occupied_runs();
            size.approximate = true;
          }
          size.per_direction.push_back(k);
          size.total += 2 * k;
        }
      },
      model.per_direction());
  return size;
}

FroccModel truncate(const FroccModel& model, Eigen::Index m) {
  if (m < 1 || m > model.m()) throw ArgumentError("truncate: m out of range");
  ProjectionMatrix<double> directions = model.directions().topRows(m);
  FroccModel::PerDirection per_direction = std::visit(
      [&](const auto& sets) -> FroccModel::PerDirection {
        using Sets = std::decay_t<decltype(sets)>;
        return Sets(sets.begin(), sets.begin() + m);
      },
      model.per_direction());
  return FroccModel(std::move(directions), model.kernel(), model.epsilon(), model.seed(),
                    std::move(per_direction), model.standardizer(), model.n_train());
}

}  // namespace frocc
