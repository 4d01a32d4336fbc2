#include "frocc/data.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <numeric>
#include <random>
#include <sstream>

#include "frocc/error.hpp"
#include "frocc/standardize.hpp"

namespace frocc {

std::size_t Dataset::count(Label l) const {
  if (!labels) return 0;
  return static_cast<std::size_t>(std::count(labels->begin(), labels->end(), l));
}

Dataset Dataset::select(Label l) const {
  if (!labels) throw DataError("dataset '" + name + "' has no labels");
  std::vector<Eigen::Index> rows;
  for (std::size_t j = 0; j < labels->size(); ++j)
    if ((*labels)[j] == l) rows.push_back(static_cast<Eigen::Index>(j));
  Dataset out;
  out.points = points(rows, Eigen::all);
  out.name = name;
  return out;
}

void validate(const Dataset& ds) {
  if (ds.points.rows() < 1) throw DataError("dataset '" + ds.name + "' is empty");
  if (ds.points.cols() < 1) throw DataError("dataset '" + ds.name + "' has no feature columns");
  if (!ds.points.allFinite()) throw DataError("dataset '" + ds.name + "' contains non-finite values");
  if (ds.labels && static_cast<Eigen::Index>(ds.labels->size()) != ds.points.rows())
    throw DataError("dataset '" + ds.name + "' has a label vector of the wrong length");
}

// ---------------------------------------------------------------------------
// CSV

namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

// Comma-separated cells; double quotes enclose cells, "" is a literal quote.
std::vector<std::string> split_csv_line(const std::string& line, std::size_t line_no) {
  std::vector<std::string> cells;
  std::string cell;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cell.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cell.push_back(c);
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      cells.push_back(trim(cell));
      cell.clear();
    } else {
      cell.push_back(c);
    }
  }
  if (quoted) throw DataError("line " + std::to_string(line_no) + ": unterminated quoted cell");
  cells.push_back(trim(cell));
  return cells;
}

bool all_digits(const std::string& s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isdigit(c); });
}

double parse_number(const std::string& cell, std::size_t line_no, std::size_t col) {
  double value = 0.0;
  const char* begin = cell.data();
  const char* end = cell.data() + cell.size();
  if (!cell.empty() && *begin == '+') ++begin;
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end || cell.empty())
    throw DataError("line " + std::to_string(line_no) + ", column " + std::to_string(col + 1) +
                    ": non-numeric feature '" + cell + "'");
  if (!std::isfinite(value))
    throw DataError("line " + std::to_string(line_no) + ", column " + std::to_string(col + 1) +
                    ": non-finite feature '" + cell + "'");
  return value;
}

}  // namespace

Dataset load_csv(const std::filesystem::path& path, const CsvOptions& options) {
  std::error_code ec;
  if (std::filesystem::is_directory(path, ec)) throw IoError("'" + path.string() + "' is a directory");
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");

  std::optional<std::size_t> label_index;
  std::optional<std::size_t> width;
  std::vector<double> values;
  std::vector<Label> labels;
  std::size_t rows = 0;

  std::string line;
  std::size_t line_no = 0;
  bool header_pending = options.has_header;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    auto cells = split_csv_line(line, line_no);

    if (header_pending) {
      header_pending = false;
      width = cells.size();
      if (!options.label_column.empty()) {
        if (all_digits(options.label_column)) {
          label_index = std::stoul(options.label_column);
        } else {
          const auto it = std::find(cells.begin(), cells.end(), options.label_column);
          if (it == cells.end()) throw DataError("label column '" + options.label_column + "' not found in header");
          label_index = static_cast<std::size_t>(it - cells.begin());
        }
        if (*label_index >= cells.size())
          throw DataError("label column index " + options.label_column + " is out of range");
      }
      continue;
    }

    if (!width) {
      width = cells.size();
      if (!options.label_column.empty()) {
        if (!all_digits(options.label_column))
          throw DataError("label column '" + options.label_column + "' given by name but the file has no header");
        label_index = std::stoul(options.label_column);
        if (*label_index >= cells.size())
          throw DataError("label column index " + options.label_column + " is out of range");
      }
    }
    if (cells.size() != *width)
      throw DataError("line " + std::to_string(line_no) + ": expected " + std::to_string(*width) +
                      " cells, found " + std::to_string(cells.size()));

    for (std::size_t c = 0; c < cells.size(); ++c) {
      if (label_index && c == *label_index) {
        labels.push_back(cells[c] == options.positive_label ? Label::Positive : Label::Negative);
      } else {
        values.push_back(parse_number(cells[c], line_no, c));
      }
    }
    ++rows;
  }

  if (rows == 0) throw DataError("'" + path.string() + "' contains no data rows");
  const std::size_t d = *width - (label_index ? 1 : 0);
  if (d == 0) throw DataError("'" + path.string() + "' has no feature columns");

  Dataset ds;
  ds.name = path.filename().string();
  ds.points = Eigen::Map<const RowMatrix<double>>(values.data(), static_cast<Eigen::Index>(rows),
                                                   static_cast<Eigen::Index>(d));
  if (label_index) ds.labels = std::move(labels);
  return ds;
}

void write_csv(const Dataset& ds, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out.precision(17);
  for (Eigen::Index k = 0; k < ds.dim(); ++k) out << (k ? "," : "") << 'x' << k;
  if (ds.labels) out << ",label";
  out << '\n';
  for (Eigen::Index j = 0; j < ds.size(); ++j) {
    for (Eigen::Index k = 0; k < ds.dim(); ++k) out << (k ? "," : "") << ds.points(j, k);
    if (ds.labels) out << ',' << ((*ds.labels)[static_cast<std::size_t>(j)] == Label::Positive ? 1 : 0);
    out << '\n';
  }
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

// ---------------------------------------------------------------------------
// Split

Split occ_split(const Dataset& ds, const SplitSpec& spec) {
  validate(ds);
  if (!ds.labels) throw DataError("occ_split needs a labeled dataset");
  if (!(spec.train_fraction > 0.0 && spec.train_fraction < 1.0))
    throw ArgumentError("train_fraction must lie in (0, 1)");

  const Label pos = spec.positive_class;
  std::vector<Eigen::Index> positives, negatives;
  for (std::size_t j = 0; j < ds.labels->size(); ++j)
    ((*ds.labels)[j] == pos ? positives : negatives).push_back(static_cast<Eigen::Index>(j));
  if (positives.empty()) throw DataError("dataset '" + ds.name + "' has no positive examples");

  std::mt19937_64 gen(row_seed(spec.seed, 0));
  std::shuffle(positives.begin(), positives.end(), gen);
  std::shuffle(negatives.begin(), negatives.end(), gen);

  auto n_train = static_cast<std::size_t>(std::floor(spec.train_fraction * static_cast<double>(positives.size())));
  n_train = std::clamp<std::size_t>(n_train, 1, positives.size());
  const std::size_t n_test_pos = positives.size() - n_train;

  Split split;
  std::vector<Eigen::Index> train_rows(positives.begin(), positives.begin() + static_cast<std::ptrdiff_t>(n_train));
  split.train.points = ds.points(train_rows, Eigen::all);
  split.train.name = ds.name + ":train";

  std::size_t n_test_neg = n_test_pos;
  if (negatives.size() < n_test_pos) {
    n_test_neg = negatives.size();
    split.warning = "only " + std::to_string(negatives.size()) + " negatives available for " +
                    std::to_string(n_test_pos) + " test positives; using all negatives";
  }
  std::vector<Eigen::Index> test_rows(positives.begin() + static_cast<std::ptrdiff_t>(n_train), positives.end());
  test_rows.insert(test_rows.end(), negatives.begin(), negatives.begin() + static_cast<std::ptrdiff_t>(n_test_neg));
  split.test.points = ds.points(test_rows, Eigen::all);
  std::vector<Label> test_labels(n_test_pos, Label::Positive);
  test_labels.insert(test_labels.end(), n_test_neg, Label::Negative);
  split.test.labels = std::move(test_labels);
  split.test.name = ds.name + ":test";
  return split;
}

// ---------------------------------------------------------------------------
// Generators

Dataset gen_gaussian_mixture(std::size_t k, std::size_t d, std::size_t n, double spread, Seed seed) {
  if (k < 1 || d < 1 || n < 1) throw ArgumentError("gen_gaussian_mixture: k, d and n must be >= 1");
  if (!(spread > 0.0) || !std::isfinite(spread)) throw ArgumentError("gen_gaussian_mixture: spread must be positive");

  std::mt19937_64 gen(row_seed(seed, 0));
  std::uniform_real_distribution<double> center_dist(-5.0, 5.0);
  std::uniform_int_distribution<std::size_t> component(0, k - 1);
  std::normal_distribution<double> normal(0.0, spread);

  RowMatrix<double> centers(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(d));
  for (Eigen::Index c = 0; c < centers.rows(); ++c)
    for (Eigen::Index j = 0; j < centers.cols(); ++j) centers(c, j) = center_dist(gen);

  Dataset ds;
  ds.points.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(d));
  for (Eigen::Index i = 0; i < ds.points.rows(); ++i) {
    const auto c = static_cast<Eigen::Index>(component(gen));
    for (Eigen::Index j = 0; j < ds.points.cols(); ++j) ds.points(i, j) = centers(c, j) + normal(gen);
  }
  ds.labels = std::vector<Label>(n, Label::Positive);
  std::ostringstream name;
  name << "gaussians(k=" << k << ",d=" << d << ",n=" << n << ",spread=" << spread << ",seed=" << seed.value
       << ")";
  ds.name = name.str();
  return ds;
}

Dataset gen_two_moons(std::size_t n, double noise, Seed seed) {
  if (n < 2) throw ArgumentError("gen_two_moons: n must be >= 2");
  if (!(noise >= 0.0) || !std::isfinite(noise)) throw ArgumentError("gen_two_moons: noise must be >= 0");

  const std::size_t n_upper = n / 2;
  const std::size_t n_lower = n - n_upper;
  auto angle = [](std::size_t i, std::size_t count) {
    return count == 1 ? 0.0 : std::numbers::pi * static_cast<double>(i) / static_cast<double>(count - 1);
  };

  Dataset ds;
  ds.points.resize(static_cast<Eigen::Index>(n), 2);
  std::vector<Label> labels;
  labels.reserve(n);
  for (std::size_t i = 0; i < n_upper; ++i) {
    const double t = angle(i, n_upper);
    ds.points.row(static_cast<Eigen::Index>(i)) << std::cos(t), std::sin(t);
    labels.push_back(Label::Positive);
  }
  for (std::size_t i = 0; i < n_lower; ++i) {
    const double t = angle(i, n_lower);
    ds.points.row(static_cast<Eigen::Index>(n_upper + i)) << 1.0 - std::cos(t), 0.5 - std::sin(t);
    labels.push_back(Label::Negative);
  }
  if (noise > 0.0) {
    std::mt19937_64 gen(row_seed(seed, 0));
    std::normal_distribution<double> normal(0.0, noise);
    for (Eigen::Index i = 0; i < ds.points.rows(); ++i)
      for (Eigen::Index j = 0; j < 2; ++j) ds.points(i, j) += normal(gen);
  }
  ds.labels = std::move(labels);
  std::ostringstream name;
  name << "moons(n=" << n << ",noise=" << noise << ",seed=" << seed.value << ")";
  ds.name = name.str();
  return ds;
}

Dataset gen_uniform_box(std::size_t n, const Eigen::VectorXd& lo, const Eigen::VectorXd& hi, Seed seed) {
  if (n < 1 || lo.size() < 1 || lo.size() != hi.size())
    throw ArgumentError("gen_uniform_box: need n >= 1 and matching non-empty bounds");
  if (!(lo.array() <= hi.array()).all()) throw ArgumentError("gen_uniform_box: lo must not exceed hi");
  std::mt19937_64 gen(row_seed(seed, 0));
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  Dataset ds;
  ds.points.resize(static_cast<Eigen::Index>(n), lo.size());
  for (Eigen::Index i = 0; i < ds.points.rows(); ++i)
    for (Eigen::Index j = 0; j < lo.size(); ++j) ds.points(i, j) = lo(j) + (hi(j) - lo(j)) * unit(gen);
  ds.labels = std::vector<Label>(n, Label::Negative);
  ds.name = "uniform_box(n=" + std::to_string(n) + ")";
  return ds;
}

Dataset concat(const Dataset& a, const Dataset& b) {
  if (a.dim() != b.dim()) throw DataError("concat: dimension mismatch");
  if (a.labels.has_value() != b.labels.has_value()) throw DataError("concat: label presence differs");
  Dataset out;
  out.points.resize(a.size() + b.size(), a.dim());
  out.points << a.points, b.points;
  if (a.labels) {
    std::vector<Label> labels = *a.labels;
    labels.insert(labels.end(), b.labels->begin(), b.labels->end());
    out.labels = std::move(labels);
  }
  out.name = a.name + "+" + b.name;
  return out;
}

// ---------------------------------------------------------------------------
// Standardizer

Standardizer Standardizer::fit(const Eigen::Ref<const RowMatrix<double>>& points) {
  if (points.rows() < 1 || points.cols() < 1) throw DataError("cannot standardize an empty dataset");
  Standardizer s;
  s.mean = points.colwise().mean().transpose();
  s.scale.resize(points.cols());
  for (Eigen::Index k = 0; k < points.cols(); ++k) {
    const double var = (points.col(k).array() - s.mean(k)).square().mean();
    const double sd = std::sqrt(var);
    s.scale(k) = sd > 0.0 && std::isfinite(sd) ? sd : 1.0;
  }
  return s;
}

RowMatrix<double> Standardizer::transform(const Eigen::Ref<const RowMatrix<double>>& points) const {
  if (points.cols() != dim()) throw DataError("standardizer dimension mismatch");
  RowMatrix<double> out(points.rows(), points.cols());
  for (Eigen::Index j = 0; j < points.rows(); ++j)
    for (Eigen::Index k = 0; k < points.cols(); ++k) out(j, k) = (points(j, k) - mean(k)) / scale(k);
  return out;
}

}  // namespace frocc
