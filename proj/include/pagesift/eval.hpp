#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "pagesift/dataset.hpp"
#include "pagesift/label.hpp"

namespace pagesift::eval {

enum class Target { Text, Images, All };

std::string_view to_string(Target target);
std::optional<Target> parse_target(std::string_view text);

struct Confusion {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;
  std::size_t tn = 0;

  std::size_t total() const { return tp + fp + fn + tn; }
  Confusion& operator+=(const Confusion& o) {
    tp += o.tp, fp += o.fp, fn += o.fn, tn += o.tn;
    return *this;
  }
  bool operator==(const Confusion&) const = default;
};

struct Metrics {
  double precision = 0;
  double recall = 0;
  double f1 = 0;
};

/// Harmonic mean, 0 when p + r == 0.
double f1_score(double precision, double recall);

/// Precision/recall with 0 for an empty denominator.
Metrics metrics_from(const Confusion& c);

struct EvalReport {
  Target target = Target::All;
  Confusion counts;
  // Unset when no labeled element falls in the target slice.
  std::optional<double> precision, recall, f1;
  // Mean of per-page metrics over pages with at least one positive.
  std::optional<double> macro_precision, macro_recall, macro_f1;
  std::size_t pages_evaluated = 0;
  std::size_t pages_skipped_macro = 0;
  std::vector<std::string> warnings;
};

using PagePredictions = std::map<NodeId, Label>;
using Predictions = std::map<std::string, PagePredictions, std::less<>>;

/// Scores labeled elements of `truth` against `predictions` (positive = R).
/// Missing predictions count as NR with a warning. Throws Error(EmptyTruth).
EvalReport evaluate(const Predictions& predictions, std::span<const dataset::LabeledPage> truth, Target target);

/// Predictions equal to the ground truth of `pages`.
Predictions truth_as_predictions(std::span<const dataset::LabeledPage> pages);

nlohmann::ordered_json to_json(const EvalReport& report);

}  // namespace pagesift::eval
