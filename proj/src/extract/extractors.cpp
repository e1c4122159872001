#include "pagesift/extractors.hpp"

#include "pagesift/baselines.hpp"
#include "pagesift/error.hpp"
#include "pagesift/features.hpp"

namespace pagesift::extract {

namespace {

std::vector<Prediction> from_label_map(const dom::Document& doc, const layout::LayoutTree& layout,
                                       const LabelMap& labels) {
  std::vector<Prediction> out;
  for (NodeId id : layout::visible_candidates(layout, doc)) {
    auto it = labels.find(id);
    Label label = it == labels.end() ? Label::NR : it->second;
    out.push_back({id, doc.node(id).tag, label, label == Label::R ? 1.0 : 0.0});
  }
  return out;
}

}  // namespace

const std::vector<std::string>& extractor_names() {
  static const std::vector<std::string> names = {"shallow", "cetr", "mss", "gbm"};
  return names;
}

Extractor make_extractor(std::string_view name, std::shared_ptr<const gbm::GbmModel> model) {
  if (name == "shallow") {
    return [](const dom::Document& doc, const layout::LayoutTree& layout) {
      return from_label_map(doc, layout, baselines::shallow_text_classify(baselines::block_stats(doc, layout)));
    };
  }
  if (name == "cetr") {
    return [](const dom::Document& doc, const layout::LayoutTree& layout) {
      return from_label_map(doc, layout, baselines::cetr_classify(doc, layout));
    };
  }
  if (name == "mss") {
    return [](const dom::Document& doc, const layout::LayoutTree& layout) {
      return from_label_map(doc, layout, baselines::mss_classify(baselines::tokenize(doc, layout)));
    };
  }
  if (name == "gbm") {
    if (!model) throw Error(ErrorKind::InvalidConfig, "extractor 'gbm' requires a model");
    if (model->schema != features::schema()) {
      throw Error(ErrorKind::SchemaMismatch, "model feature schema '" + model->schema.version +
                                                 "' differs from '" + features::schema().version + "'");
    }
    return [model](const dom::Document& doc, const layout::LayoutTree& layout) {
      features::ExtractedFeatures extracted = features::extract_all(doc, layout);
      std::vector<Prediction> out;
      out.reserve(extracted.node_ids.size());
      for (std::size_t i = 0; i < extracted.node_ids.size(); ++i) {
        double p = gbm::predict(*model, extracted.matrix.row(i));
        NodeId id = extracted.node_ids[i];
        out.push_back({id, doc.node(id).tag, p >= 0.5 ? Label::R : Label::NR, p});
      }
      return out;
    };
  }
  throw Error(ErrorKind::UnknownExtractor, "unknown extractor '" + std::string(name) + "'");
}

std::vector<Prediction> run_extractor(const Extractor& extractor, std::string_view html,
                                      const layout::Viewport& viewport) {
  dom::Document doc = dom::parse_document(html);
  layout::LayoutTree tree = layout::compute_layout(doc, viewport);
  return extractor(doc, tree);
}

LabelMap to_label_map(const std::vector<Prediction>& predictions) {
  LabelMap out;
  for (const auto& p : predictions) out[p.node_id] = p.label;
  return out;
}

}  // namespace pagesift::extract
