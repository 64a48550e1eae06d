#include "annbench/label_metrics.hpp"

#include <algorithm>
#include <unordered_set>

#include "annbench/error.hpp"

namespace annbench {

Label predict_label(std::span<const Label> retrieved) {
  ANNBENCH_CHECK(!retrieved.empty(), "cannot predict from an empty neighbor list");
  std::map<Label, std::size_t> votes;
  for (Label l : retrieved) ++votes[l];
  std::size_t best = 0;
  for (const auto& [label, n] : votes) best = std::max(best, n);
  for (Label l : retrieved)
    if (votes[l] == best) return l;
  return retrieved.front();
}

double f1_score(double precision, double recall) {
  const double sum = precision + recall;
  return sum == 0.0 ? 0.0 : 2.0 * precision * recall / sum;
}

LabelMetrics label_metrics(std::span<const Outcome> outcomes) {
  ANNBENCH_CHECK(!outcomes.empty(), "label_metrics: no outcomes");
  LabelMetrics m;
  std::uint64_t correct = 0;
  for (const auto& o : outcomes) {
    const Label predicted = predict_label(o.retrieved);
    m.per_class[o.truth];
    m.per_class[predicted];
    if (predicted == o.truth) {
      ++m.per_class[o.truth].tp;
      ++correct;
    } else {
      ++m.per_class[predicted].fp;
      ++m.per_class[o.truth].fn;
    }
  }
  const auto n = static_cast<std::uint64_t>(outcomes.size());
  for (auto& [label, c] : m.per_class) {
    c.tn = n - c.tp - c.fp - c.fn;
    m.pooled.tp += c.tp;
    m.pooled.fp += c.fp;
    m.pooled.fn += c.fn;
    m.pooled.tn += c.tn;
  }

  auto ratio = [](std::uint64_t num, std::uint64_t den) {
    return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
  };
  m.micro_precision = ratio(m.pooled.tp, m.pooled.tp + m.pooled.fp);
  m.micro_recall = ratio(m.pooled.tp, m.pooled.tp + m.pooled.fn);
  m.micro_f1 = f1_score(m.micro_precision, m.micro_recall);
  m.accuracy = ratio(correct, n);

  for (const auto& [label, c] : m.per_class) {
    const double p = ratio(c.tp, c.tp + c.fp);
    const double r = ratio(c.tp, c.tp + c.fn);
    m.macro_precision += p;
    m.macro_recall += r;
    m.macro_f1 += f1_score(p, r);
  }
  const auto classes = static_cast<double>(m.per_class.size());
  m.macro_precision /= classes;
  m.macro_recall /= classes;
  m.macro_f1 /= classes;
  return m;
}

double precision_at_k(Label query, std::span<const Label> retrieved) {
  ANNBENCH_CHECK(!retrieved.empty(), "precision_at_k: empty neighbor list");
  const auto hits = std::count(retrieved.begin(), retrieved.end(), query);
  return static_cast<double>(hits) / static_cast<double>(retrieved.size());
}

double recall_at_n(std::span<const Id> retrieved, std::span<const Id> truth) {
  ANNBENCH_CHECK(!truth.empty(), "recall_at_n: empty truth set");
  const std::unordered_set<Id> got(retrieved.begin(), retrieved.end());
  std::size_t hits = 0;
  for (Id t : truth) hits += got.count(t);
  return static_cast<double>(hits) / static_cast<double>(truth.size());
}

}  // namespace annbench
