#include "frocc/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "frocc/error.hpp"

namespace frocc {

namespace {

struct ClassCounts {
  std::size_t pos = 0;
  std::size_t neg = 0;
};

ClassCounts count_classes(std::span<const double> scores, std::span<const Label> labels) {
  if (scores.size() != labels.size())
    throw ArgumentError("scores and labels differ in length (" + std::to_string(scores.size()) + " vs " +
                        std::to_string(labels.size()) + ")");
  ClassCounts c;
  for (const Label l : labels) (l == Label::Positive ? c.pos : c.neg) += 1;
  for (const double s : scores)
    if (std::isnan(s)) throw DataError("scores contain NaN");
  return c;
}

}  // namespace

double roc_auc(std::span<const double> scores, std::span<const Label> labels) {
  const ClassCounts c = count_classes(scores, labels);
  if (c.pos == 0 || c.neg == 0) throw DataError("roc_auc needs both positive and negative labels");

  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });

  // Sweep tie groups in ascending score order. Each positive beats every
  // negative already passed and ties with the negatives in its own group.
  // Twice the statistic is an integer, so the sum is exact.
  double twice_u = 0.0;
  std::size_t neg_below = 0;
  for (std::size_t g = 0; g < order.size();) {
    std::size_t h = g;
    std::size_t pos_here = 0, neg_here = 0;
    while (h < order.size() && scores[order[h]] == scores[order[g]]) {
      (labels[order[h]] == Label::Positive ? pos_here : neg_here) += 1;
      ++h;
    }
    twice_u += static_cast<double>(pos_here) * static_cast<double>(2 * neg_below + neg_here);
    neg_below += neg_here;
    g = h;
  }
  return twice_u / (2.0 * static_cast<double>(c.pos) * static_cast<double>(c.neg));
}

double precision_at_n(std::span<const double> scores, std::span<const Label> labels, std::size_t n) {
  count_classes(scores, labels);
  if (n < 1 || n > scores.size())
    throw ArgumentError("precision_at_n: n=" + std::to_string(n) + " outside [1, " +
                        std::to_string(scores.size()) + "]");
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });
  std::size_t hits = 0;
  for (std::size_t r = 0; r < n; ++r)
    if (labels[order[r]] == Label::Negative) ++hits;
  return static_cast<double>(hits) / static_cast<double>(n);
}

double adjusted_precision_at_n(std::span<const double> scores, std::span<const Label> labels,
                               std::size_t n) {
  const ClassCounts c = count_classes(scores, labels);
  if (c.pos == 0) throw DataError("adjusted precision is undefined for an all-negative test set");
  const double expected = static_cast<double>(c.neg) / static_cast<double>(scores.size());
  const double prec = precision_at_n(scores, labels, n);
  return (prec - expected) / (1.0 - expected);
}

EvalReport evaluate(std::span<const double> scores, std::span<const Label> labels) {
  const ClassCounts c = count_classes(scores, labels);
  EvalReport r;
  r.roc_auc = roc_auc(scores, labels);
  r.n = c.pos;
  r.precision_at_n = precision_at_n(scores, labels, r.n);
  r.adjusted_precision_at_n = adjusted_precision_at_n(scores, labels, r.n);
  r.n_test_pos = c.pos;
  r.n_test_neg = c.neg;
  return r;
}

void to_json(nlohmann::json& j, const EvalReport& r) {
  j = nlohmann::json{{"roc_auc", r.roc_auc},
                     {"precision_at_n", r.precision_at_n},
                     {"adjusted_precision_at_n", r.adjusted_precision_at_n},
                     {"n", r.n},
                     {"train_seconds", r.train_seconds},
                     {"test_seconds", r.test_seconds},
                     {"n_train", r.n_train},
                     {"n_test_pos", r.n_test_pos},
                     {"n_test_neg", r.n_test_neg}};
}

void from_json(const nlohmann::json& j, EvalReport& r) {
  j.at("roc_auc").get_to(r.roc_auc);
  j.at("precision_at_n").get_to(r.precision_at_n);
  j.at("adjusted_precision_at_n").get_to(r.adjusted_precision_at_n);
  j.at("n").get_to(r.n);
  j.at("train_seconds").get_to(r.train_seconds);
  j.at("test_seconds").get_to(r.test_seconds);
  j.at("n_train").get_to(r.n_train);
  j.at("n_test_pos").get_to(r.n_test_pos);
  j.at("n_test_neg").get_to(r.n_test_neg);
}

}  // namespace frocc
