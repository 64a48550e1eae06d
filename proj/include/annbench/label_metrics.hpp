#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include "annbench/metric.hpp"

namespace annbench {

// One query's ground-truth label and the labels of its retrieved neighbors, nearest first.
struct Outcome {
  Label truth = 0;
  std::vector<Label> retrieved;
};

struct ConfusionCounts {
  std::uint64_t tp = 0;
  std::uint64_t fp = 0;
  std::uint64_t fn = 0;
  std::uint64_t tn = 0;

  std::uint64_t total() const { return tp + fp + fn + tn; }
  friend bool operator==(const ConfusionCounts&, const ConfusionCounts&) = default;
};

struct LabelMetrics {
  double micro_precision = 0.0;
  double micro_recall = 0.0;
  double micro_f1 = 0.0;
  double accuracy = 0.0;
  double macro_precision = 0.0;
  double macro_recall = 0.0;
  double macro_f1 = 0.0;
  ConfusionCounts pooled;                      // sum over classes
  std::map<Label, ConfusionCounts> per_class;  // one-vs-rest
};

/// Majority label; a tie goes to whichever tied label ranks nearest.
Label predict_label(std::span<const Label> retrieved);

/// 2PR / (P + R), or 0 when P + R is 0.
double f1_score(double precision, double recall);

/// Classes are every label that occurs as a truth or a prediction. Throws on an
/// empty outcome list or an outcome with no retrieved labels.
LabelMetrics label_metrics(std::span<const Outcome> outcomes);

/// Fraction of retrieved labels equal to the query's.
double precision_at_k(Label query, std::span<const Label> retrieved);

/// |retrieved ∩ truth| / |truth|.
double recall_at_n(std::span<const Id> retrieved, std::span<const Id> truth);

}  // namespace annbench
