// Command-line front end for random-projection one-class classifiers. JSON
// goes to stdout and diagnostics to stderr.
//
// Exit codes: 0 ok, 2 bad arguments, 3 data errors, 4 I/O errors.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "frocc/data.hpp"
#include "frocc/metrics.hpp"
#include "frocc/model.hpp"
#include "frocc/serialize.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

enum ExitCode : int { kOk = 0, kArgs = 2, kData = 3, kIo = 4 };

struct RunConfig {
  std::string train_path;
  std::string test_path;
  std::string model_path;
  std::string out_path;

  long m = 100;
  double epsilon = 0.1;
  std::string kernel = "linear";
  std::optional<double> gamma;
  std::optional<double> coef0;
  std::optional<int> degree;
  std::uint64_t seed = 0;
  std::string mode = "exact";
  std::string threads = "1";
  bool standardize = false;

  bool header = false;
  std::string label_column;
  std::string positive_label = "1";

  // bench / synth
  std::string gen;
  std::size_t n = 1000;
  std::size_t k = 4;
  std::size_t d = 2;
  double spread = 1.0;
  double noise = 0.1;
  int reps = 5;
  bool scaling = false;
};

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

unsigned parse_threads(const std::string& s) {
  if (s == "auto") return 0;
  try {
    std::size_t used = 0;
    const long v = std::stol(s, &used);
    if (used == s.size() && v >= 1) return static_cast<unsigned>(v);
  } catch (const std::exception&) {
  }
  throw frocc::ArgumentError("--threads must be a positive integer or 'auto', got '" + s + "'");
}

void require_readable(const std::string& path, const char* flag) {
  if (path.empty()) throw frocc::ArgumentError(std::string(flag) + " is required");
  std::ifstream probe(path);
  if (!probe || fs::is_directory(path)) throw frocc::IoError("cannot read " + std::string(flag) + " '" + path + "'");
}

void require_writable_parent(const std::string& path, const char* flag) {
  if (path.empty()) throw frocc::ArgumentError(std::string(flag) + " is required");
  const fs::path parent = fs::absolute(fs::path(path)).parent_path();
  if (!fs::is_directory(parent))
    throw frocc::IoError("directory for " + std::string(flag) + " '" + path + "' does not exist");
}

frocc::CsvOptions csv_options(const RunConfig& cfg) {
  return {cfg.header, cfg.label_column, cfg.positive_label};
}

frocc::FitOptions fit_options(const RunConfig& cfg, Eigen::Index d) {
  if (cfg.m < 1) throw frocc::ArgumentError("-m must be >= 1");
  frocc::check_epsilon(cfg.epsilon);
  frocc::FitOptions opts;
  opts.m = cfg.m;
  opts.epsilon = cfg.epsilon;
  opts.kernel = frocc::make_kernel(cfg.kernel, d, {cfg.gamma, cfg.degree, cfg.coef0});
  opts.seed = frocc::Seed{cfg.seed};
  opts.mode = frocc::parse_mode(cfg.mode);
  opts.threads = parse_threads(cfg.threads);
  opts.standardize = cfg.standardize;
  return opts;
}

// Validates the numeric knobs before any file is touched.
void check_fit_args(const RunConfig& cfg) {
  if (cfg.m < 1) throw frocc::ArgumentError("-m must be >= 1");
  frocc::check_epsilon(cfg.epsilon);
  frocc::parse_mode(cfg.mode);
  parse_threads(cfg.threads);
  frocc::make_kernel(cfg.kernel, 1, {cfg.gamma, cfg.degree, cfg.coef0});
}

// Training rows: positives only when the file carries labels.
frocc::Dataset load_training(const RunConfig& cfg) {
  frocc::Dataset ds = frocc::load_csv(cfg.train_path, csv_options(cfg));
  if (ds.labels) {
    ds = ds.select(frocc::Label::Positive);
    if (ds.size() == 0) throw frocc::DataError("training file has no rows with label '" + cfg.positive_label + "'");
  }
  frocc::validate(ds);
  return ds;
}

void emit(const json& j, const std::string& out_path) {
  const std::string text = j.dump(2) + "\n";
  std::cout << text;
  if (!out_path.empty()) {
    std::ofstream out(out_path, std::ios::binary | std::ios::trunc);
    if (!out) throw frocc::IoError("cannot open '" + out_path + "' for writing");
    out << text;
  }
}

json size_json(const frocc::FroccModel& model) {
  const auto size = frocc::model_size(model);
  return {{"total", size.total}, {"approximate", size.approximate}};
}

int cmd_train(const RunConfig& cfg) {
  check_fit_args(cfg);
  require_readable(cfg.train_path, "--train");
  require_writable_parent(cfg.model_path, "--model");

  const frocc::Dataset train = load_training(cfg);
  const auto start = std::chrono::steady_clock::now();
  const frocc::FroccModel model = frocc::fit(train.points, fit_options(cfg, train.dim()));
  const double train_seconds = seconds_since(start);
  frocc::save(model, cfg.model_path);

  emit({{"train_seconds", train_seconds},
        {"model_size", size_json(model)},
        {"m", model.m()},
        {"d", model.dim()},
        {"n_train", model.n_train()},
        {"model_hash", frocc::model_hash(model)}},
       cfg.out_path);
  return kOk;
}

int cmd_predict(const RunConfig& cfg) {
  require_readable(cfg.test_path, "--test");
  require_readable(cfg.model_path, "--model");
  const unsigned threads = parse_threads(cfg.threads);

  const frocc::FroccModel model = frocc::load(cfg.model_path);
  const frocc::Dataset test = frocc::load_csv(cfg.test_path, csv_options(cfg));
  frocc::validate(test);
  const auto start = std::chrono::steady_clock::now();
  const Eigen::VectorXd scores = frocc::decision_scores(model, test.points, threads);
  const double test_seconds = seconds_since(start);

  json j;
  j["scores"] = std::vector<double>(scores.data(), scores.data() + scores.size());
  std::vector<bool> yes(static_cast<std::size_t>(scores.size()));
  for (Eigen::Index i = 0; i < scores.size(); ++i) yes[static_cast<std::size_t>(i)] = scores(i) == 1.0;
  j["predictions"] = yes;
  j["test_seconds"] = test_seconds;
  emit(j, cfg.out_path);
  return kOk;
}

int cmd_eval(const RunConfig& cfg) {
  const bool train_here = !cfg.train_path.empty();
  if (!train_here && cfg.model_path.empty()) throw frocc::ArgumentError("eval needs --model or --train");
  if (cfg.label_column.empty()) throw frocc::ArgumentError("eval needs --label-column for the test file");
  if (train_here) check_fit_args(cfg);
  const unsigned threads = parse_threads(cfg.threads);
  require_readable(cfg.test_path, "--test");
  if (train_here) {
    require_readable(cfg.train_path, "--train");
  } else {
    require_readable(cfg.model_path, "--model");
  }

  frocc::EvalReport report;
  std::optional<frocc::FroccModel> model;
  if (train_here) {
    const frocc::Dataset train = load_training(cfg);
    const auto start = std::chrono::steady_clock::now();
    model = frocc::fit(train.points, fit_options(cfg, train.dim()));
    report.train_seconds = seconds_since(start);
    if (!cfg.model_path.empty()) {
      require_writable_parent(cfg.model_path, "--model");
      frocc::save(*model, cfg.model_path);
    }
  } else {
    model = frocc::load(cfg.model_path);
  }

  const frocc::Dataset test = frocc::load_csv(cfg.test_path, csv_options(cfg));
  frocc::validate(test);
  if (!test.labels) throw frocc::DataError("test file has no labels");
  if (test.count(frocc::Label::Positive) == 0 || test.count(frocc::Label::Negative) == 0)
    throw frocc::DataError("test labels contain a single class; ROC-AUC is undefined");

  const auto start = std::chrono::steady_clock::now();
  const Eigen::VectorXd scores = frocc::decision_scores(*model, test.points, threads);
  const double test_seconds = seconds_since(start);

  const frocc::EvalReport ranking =
      frocc::evaluate(std::span<const double>(scores.data(), static_cast<std::size_t>(scores.size())), *test.labels);
  const double train_seconds = report.train_seconds;
  report = ranking;
  report.train_seconds = train_seconds;
  report.test_seconds = test_seconds;
  report.n_train = model->n_train();
  emit(json(report), cfg.out_path);
  return kOk;
}

frocc::Dataset generate(const RunConfig& cfg, std::size_t n, std::uint64_t seed) {
  if (cfg.gen == "gaussians") return frocc::gen_gaussian_mixture(cfg.k, cfg.d, n, cfg.spread, frocc::Seed{seed});
  if (cfg.gen == "moons") return frocc::gen_two_moons(n, cfg.noise, frocc::Seed{seed});
  throw frocc::ArgumentError("--gen must be 'gaussians' or 'moons', got '" + cfg.gen + "'");
}

struct Timing {
  std::vector<double> train;
  std::vector<double> test;
  std::string hash;
};

json summary(const std::vector<double>& xs) {
  const double mean = std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
  double ss = 0.0;
  for (const double x : xs) ss += (x - mean) * (x - mean);
  const double stdev = xs.size() > 1 ? std::sqrt(ss / static_cast<double>(xs.size() - 1)) : 0.0;
  std::vector<double> sorted = xs;
  std::sort(sorted.begin(), sorted.end());
  const std::size_t h = sorted.size() / 2;
  const double median = sorted.size() % 2 ? sorted[h] : 0.5 * (sorted[h - 1] + sorted[h]);
  return {{"runs", xs}, {"mean", mean}, {"median", median}, {"stdev", stdev}};
}

Timing time_runs(const frocc::Dataset& train, const frocc::Dataset& test, const frocc::FitOptions& opts, int reps) {
  Timing t;
  for (int r = 0; r < reps; ++r) {
    auto start = std::chrono::steady_clock::now();
    const frocc::FroccModel model = frocc::fit(train.points, opts);
    t.train.push_back(seconds_since(start));
    start = std::chrono::steady_clock::now();
    const Eigen::VectorXd scores = frocc::decision_scores(model, test.points, opts.threads);
    t.test.push_back(seconds_since(start));
    if (r == 0) t.hash = frocc::model_hash(model);
    if (scores.size() != test.size()) throw std::logic_error("score count mismatch");
  }
  return t;
}

int cmd_bench(const RunConfig& cfg) {
  check_fit_args(cfg);
  if (cfg.reps < 1) throw frocc::ArgumentError("--reps must be >= 1");
  if (cfg.train_path.empty() && cfg.gen.empty()) throw frocc::ArgumentError("bench needs --train or --gen");
  if (!cfg.train_path.empty()) require_readable(cfg.train_path, "--train");
  if (!cfg.test_path.empty()) require_readable(cfg.test_path, "--test");

  auto datasets = [&](std::size_t n) -> std::pair<frocc::Dataset, frocc::Dataset> {
    if (!cfg.gen.empty()) {
      frocc::Dataset train = generate(cfg, n, cfg.seed);
      train.labels.reset();
      frocc::Dataset test = generate(cfg, n, cfg.seed + 1);
      return {std::move(train), std::move(test)};
    }
    frocc::Dataset train = load_training(cfg);
    frocc::Dataset test = cfg.test_path.empty() ? train : frocc::load_csv(cfg.test_path, csv_options(cfg));
    return {std::move(train), std::move(test)};
  };

  auto [train, test] = datasets(cfg.n);
  const frocc::FitOptions opts = fit_options(cfg, train.dim());
  const Timing base = time_runs(train, test, opts, cfg.reps);

  json j{{"dataset", train.name},
         {"n_train", train.size()},
         {"n_test", test.size()},
         {"d", train.dim()},
         {"m", opts.m},
         {"epsilon", opts.epsilon},
         {"kernel", frocc::kernel_name(opts.kernel)},
         {"mode", frocc::mode_name(opts.mode)},
         {"threads", cfg.threads},
         {"reps", cfg.reps},
         {"train_seconds", summary(base.train)},
         {"test_seconds", summary(base.test)},
         {"model_hash", base.hash}};

  if (cfg.scaling) {
    if (cfg.gen.empty()) throw frocc::ArgumentError("--scaling needs a generator (--gen)");
    auto [train2, test2] = datasets(2 * cfg.n);
    const Timing doubled = time_runs(train2, test2, opts, cfg.reps);
    const double t1 = summary(base.train)["median"].get<double>();
    const double t2 = summary(doubled.train)["median"].get<double>();
    j["scaling"] = {{"n", cfg.n},
                    {"n2", 2 * cfg.n},
                    {"train_seconds_2n", summary(doubled.train)},
                    {"test_seconds_2n", summary(doubled.test)},
                    {"train_ratio", t2 / t1}};
  }
  emit(j, cfg.out_path);
  return kOk;
}

int cmd_synth(const RunConfig& cfg) {
  require_writable_parent(cfg.out_path, "--out");
  const frocc::Dataset ds = generate(cfg, cfg.n, cfg.seed);
  frocc::write_csv(ds, cfg.out_path);
  std::cout << json{{"path", cfg.out_path}, {"name", ds.name}, {"n", ds.size()}, {"d", ds.dim()},
                    {"n_pos", ds.count(frocc::Label::Positive)}, {"n_neg", ds.count(frocc::Label::Negative)}}
                   .dump(2)
            << "\n";
  return kOk;
}

void add_fit_flags(CLI::App* app, RunConfig& cfg) {
  app->add_option("-m", cfg.m, "Number of classifying directions")->capture_default_str();
  app->add_option("--epsilon", cfg.epsilon, "Separation parameter in (0, 1]")->capture_default_str();
  app->add_option("--kernel", cfg.kernel, "linear, rbf, poly or sigmoid")->capture_default_str();
  app->add_option("--gamma", cfg.gamma, "Kernel gamma (rbf, sigmoid); default 1/d");
  app->add_option("--coef0", cfg.coef0, "Kernel coef0 (poly, sigmoid); default 0");
  app->add_option("--degree", cfg.degree, "Polynomial degree; default 3");
  app->add_option("--mode", cfg.mode, "exact or bin")->capture_default_str();
  app->add_flag("--standardize", cfg.standardize, "Standardize features using training statistics");
}

void add_csv_flags(CLI::App* app, RunConfig& cfg) {
  app->add_flag("--header", cfg.header, "CSV files start with a header row");
  app->add_option("--label-column", cfg.label_column, "Label column name (needs --header) or zero-based index");
  app->add_option("--positive-label", cfg.positive_label, "Label value of the normal class")->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Random-projection one-class classification"};
  app.require_subcommand(1);
  RunConfig cfg;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--seed", cfg.seed, "Master seed")->capture_default_str();
    sub->add_option("--threads", cfg.threads, "Worker threads or 'auto'")->capture_default_str();
    sub->add_option("--out", cfg.out_path, "Also write the JSON result here");
  };

  auto* train = app.add_subcommand("train", "Fit a model and save it");
  train->add_option("--train", cfg.train_path, "Training CSV")->required();
  train->add_option("--model", cfg.model_path, "Model output path")->required();
  add_fit_flags(train, cfg);
  add_csv_flags(train, cfg);
  common(train);

  auto* predict = app.add_subcommand("predict", "Score points with a saved model");
  predict->add_option("--test", cfg.test_path, "CSV of points to score")->required();
  predict->add_option("--model", cfg.model_path, "Model file")->required();
  add_csv_flags(predict, cfg);
  common(predict);

  auto* eval = app.add_subcommand("eval", "Evaluate ROC-AUC and precision@n on a labeled test set");
  eval->add_option("--test", cfg.test_path, "Labeled test CSV")->required();
  eval->add_option("--model", cfg.model_path, "Model file (read, or written when --train is given)");
  eval->add_option("--train", cfg.train_path, "Train on this CSV first");
  add_fit_flags(eval, cfg);
  add_csv_flags(eval, cfg);
  common(eval);

  auto* bench = app.add_subcommand("bench", "Time training and scoring over repeated runs");
  bench->add_option("--train", cfg.train_path, "Training CSV");
  bench->add_option("--test", cfg.test_path, "Test CSV (defaults to the training set)");
  bench->add_option("--gen", cfg.gen, "Synthetic generator: gaussians or moons");
  bench->add_option("--n", cfg.n, "Generated training size")->capture_default_str();
  bench->add_option("--k", cfg.k, "Gaussian modes")->capture_default_str();
  bench->add_option("--d", cfg.d, "Gaussian dimension")->capture_default_str();
  bench->add_option("--spread", cfg.spread, "Gaussian standard deviation")->capture_default_str();
  bench->add_option("--noise", cfg.noise, "Moons noise")->capture_default_str();
  bench->add_option("--reps", cfg.reps, "Repetitions")->capture_default_str();
  bench->add_flag("--scaling", cfg.scaling, "Also time 2n and report the train-time ratio");
  add_fit_flags(bench, cfg);
  add_csv_flags(bench, cfg);
  common(bench);

  auto* synth = app.add_subcommand("synth", "Write a synthetic dataset as CSV");
  synth->add_option("--gen", cfg.gen, "gaussians or moons")->required();
  synth->add_option("--n", cfg.n, "Number of points")->capture_default_str();
  synth->add_option("--k", cfg.k, "Gaussian modes")->capture_default_str();
  synth->add_option("--d", cfg.d, "Gaussian dimension")->capture_default_str();
  synth->add_option("--spread", cfg.spread, "Gaussian standard deviation")->capture_default_str();
  synth->add_option("--noise", cfg.noise, "Moons noise")->capture_default_str();
  synth->add_option("--seed", cfg.seed, "Seed")->capture_default_str();
  synth->add_option("--out", cfg.out_path, "Output CSV")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kArgs;
  }

  try {
    if (*train) return cmd_train(cfg);
    if (*predict) return cmd_predict(cfg);
    if (*eval) return cmd_eval(cfg);
    if (*bench) return cmd_bench(cfg);
    if (*synth) return cmd_synth(cfg);
  } catch (const frocc::ArgumentError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kArgs;
  } catch (const frocc::IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kIo;
  } catch (const frocc::DataError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kData;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kData;
  }
  return kArgs;
}
