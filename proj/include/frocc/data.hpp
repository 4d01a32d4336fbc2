#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "frocc/core.hpp"
#include "frocc/label.hpp"

namespace frocc {

struct Dataset {
  RowMatrix<double> points;
  std::optional<std::vector<Label>> labels;
  std::string name;

  Eigen::Index size() const { return points.rows(); }
  Eigen::Index dim() const { return points.cols(); }
  std::size_t count(Label l) const;

  // Rows whose label equals `l`, unlabeled.
  Dataset select(Label l) const;
};

// Throws DataError on empty or non-finite data and on a label vector of the
// wrong length.
void validate(const Dataset& ds);

struct CsvOptions {
  bool has_header = false;
  // Column name (needs a header) or zero-based index; empty means no label.
  std::string label_column;
  // Cells of the label column equal to this value are positives.
  std::string positive_label = "1";
};

Dataset load_csv(const std::filesystem::path& path, const CsvOptions& options = {});

// Writes features (and labels as 1/0 in a trailing "label" column when
// present) with a header row and round-trip precision.
void write_csv(const Dataset& ds, const std::filesystem::path& path);

struct SplitSpec {
  Label positive_class = Label::Positive;
  double train_fraction = 0.5;
  Seed seed{0};
};

struct Split {
  Dataset train;  // positives only, no labels
  Dataset test;   // remaining positives plus as many negatives, labeled
  std::optional<std::string> warning;
};

// One-class protocol: a fraction of the positive class trains the model, the
// rest of the positives plus an equal number of sampled negatives form the
// test set. Falls back to every negative (with a warning) when there are too
// few to balance.
Split occ_split(const Dataset& ds, const SplitSpec& spec);

// k equal-weight spherical Gaussians, centers uniform in [-5, 5]^d, standard
// deviation `spread`. Every point is labeled positive.
Dataset gen_gaussian_mixture(std::size_t k, std::size_t d, std::size_t n, double spread, Seed seed);

// Interleaved half circles of radius 1: the upper moon centered at (0, 0) is
// positive, the lower moon centered at (1, 0.5) negative. floor(n/2) points
// on the upper moon. Gaussian noise with the given standard deviation.
Dataset gen_two_moons(std::size_t n, double noise, Seed seed);

// Points uniform in the axis-aligned box [lo, hi], labeled negative.
Dataset gen_uniform_box(std::size_t n, const Eigen::VectorXd& lo, const Eigen::VectorXd& hi, Seed seed);

// Stacks rows (and labels, which must be present in both or neither).
Dataset concat(const Dataset& a, const Dataset& b);

}  // namespace frocc
