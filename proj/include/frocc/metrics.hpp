#pragma once

#include <cstddef>
#include <span>
#include <string>

#include <json.hpp>

#include "frocc/label.hpp"

namespace frocc {

// Higher scores mean "more normal"; positives are the normal class.

// Mann-Whitney estimate of P(score_pos > score_neg) with half credit for
// ties. Requires at least one label of each class.
double roc_auc(std::span<const double> scores, std::span<const Label> labels);

// Fraction of negatives among the n lowest-scoring points. Ties keep input
// order.
double precision_at_n(std::span<const double> scores, std::span<const Label> labels, std::size_t n);

// Chance-corrected precision@n: (prec - e) / (1 - e), e = n_neg / N.
double adjusted_precision_at_n(std::span<const double> scores, std::span<const Label> labels,
                               std::size_t n);

struct EvalReport {
  double roc_auc = 0.0;
  double precision_at_n = 0.0;
  double adjusted_precision_at_n = 0.0;
  std::size_t n = 0;
  double train_seconds = 0.0;
  double test_seconds = 0.0;
  std::size_t n_train = 0;
  std::size_t n_test_pos = 0;
  std::size_t n_test_neg = 0;
};

// Fills the ranking metrics with n = number of test positives. Timings and
// n_train are left for the caller.
EvalReport evaluate(std::span<const double> scores, std::span<const Label> labels);

void to_json(nlohmann::json& j, const EvalReport& r);
void from_json(const nlohmann::json& j, EvalReport& r);

}  // namespace frocc
