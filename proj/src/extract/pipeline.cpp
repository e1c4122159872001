#include "pagesift/pipeline.hpp"

#include <map>

namespace pagesift::pipeline {

TrainingSet build_training_set(std::span<const dataset::LabeledPage> pages, const layout::Viewport& viewport) {
  TrainingSet set;
  set.x = features::Matrix(0, features::kFeatureCount);
  for (const auto& page : pages) {
    std::map<NodeId, Label> truth;
    for (const auto& record : page.labels) truth[static_cast<NodeId>(std::stoul(record.id))] = record.label;
    dom::Document doc = dom::parse_document(page.html);
    layout::LayoutTree tree = layout::compute_layout(doc, viewport);
    features::ExtractedFeatures extracted = features::extract_all(doc, tree);
    for (std::size_t i = 0; i < extracted.node_ids.size(); ++i) {
      auto it = truth.find(extracted.node_ids[i]);
      if (it == truth.end()) {
        ++set.unlabeled_candidates;
        continue;
      }
      set.x.append_row(extracted.matrix.row(i));
      set.y.push_back(it->second == Label::R ? 1 : 0);
    }
  }
  return set;
}

eval::Predictions predict_pages(const extract::Extractor& extractor, std::span<const dataset::LabeledPage> pages,
                                const layout::Viewport& viewport) {
  eval::Predictions out;
  for (const auto& page : pages) {
    out[page.page_id] = extract::to_label_map(extract::run_extractor(extractor, page.html, viewport));
  }
  return out;
}

nlohmann::ordered_json to_json(const std::vector<extract::Prediction>& predictions) {
  nlohmann::ordered_json out = nlohmann::ordered_json::array();
  for (const auto& p : predictions) {
    out.push_back({{"node_id", p.node_id}, {"tag", p.tag}, {"label", to_string(p.label)}, {"score", p.score}});
  }
  return out;
}

nlohmann::ordered_json report_json(const eval::Predictions& predictions, std::span<const dataset::LabeledPage> truth,
                                   eval::Target target) {
  nlohmann::ordered_json out = nlohmann::ordered_json::object();
  std::vector<eval::Target> slices;
  if (target == eval::Target::All) {
    slices = {eval::Target::Text, eval::Target::Images, eval::Target::All};
  } else {
    slices = {target};
  }
  for (eval::Target slice : slices) {
    out[std::string(eval::to_string(slice))] = eval::to_json(eval::evaluate(predictions, truth, slice));
  }
  return out;
}

}  // namespace pagesift::pipeline
