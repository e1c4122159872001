#pragma once

#include <functional>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "pagesift/dom.hpp"
#include "pagesift/gbm.hpp"
#include "pagesift/label.hpp"
#include "pagesift/layout.hpp"

namespace pagesift::extract {

/// Verdict on one candidate. `score` is the model probability for "gbm" and
/// 1 or 0 for the rule-based extractors.
struct Prediction {
  NodeId node_id = 0;
  std::string tag;
  Label label = Label::NR;
  double score = 0;

  bool operator==(const Prediction&) const = default;
};

/// Predictions for every visible candidate, in document order.
using Extractor = std::function<std::vector<Prediction>(const dom::Document&, const layout::LayoutTree&)>;

/// Registered names: "shallow", "cetr", "mss", "gbm". "gbm" needs `model`.
/// Throws Error(UnknownExtractor), or Error(SchemaMismatch) when the model
/// was trained on another feature schema.
Extractor make_extractor(std::string_view name, std::shared_ptr<const gbm::GbmModel> model = nullptr);

const std::vector<std::string>& extractor_names();

/// Parses, lays out and classifies one page.
std::vector<Prediction> run_extractor(const Extractor& extractor, std::string_view html,
                                      const layout::Viewport& viewport = {});

LabelMap to_label_map(const std::vector<Prediction>& predictions);

}  // namespace pagesift::extract
