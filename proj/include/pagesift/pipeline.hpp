#pragma once

#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "pagesift/dataset.hpp"
#include "pagesift/eval.hpp"
#include "pagesift/extractors.hpp"
#include "pagesift/features.hpp"
#include "pagesift/layout.hpp"

namespace pagesift::pipeline {

/// Feature rows of every labeled candidate, with y = 1 for R.
struct TrainingSet {
  features::Matrix x;
  std::vector<int> y;
  std::size_t unlabeled_candidates = 0;
};

TrainingSet build_training_set(std::span<const dataset::LabeledPage> pages, const layout::Viewport& viewport);

eval::Predictions predict_pages(const extract::Extractor& extractor, std::span<const dataset::LabeledPage> pages,
                                const layout::Viewport& viewport);

/// [{node_id, tag, label, score}] in prediction order.
nlohmann::ordered_json to_json(const std::vector<extract::Prediction>& predictions);

/// Reports for the text and image slices, plus the pooled slice for Target::All.
nlohmann::ordered_json report_json(const eval::Predictions& predictions, std::span<const dataset::LabeledPage> truth,
                                   eval::Target target);

}  // namespace pagesift::pipeline
