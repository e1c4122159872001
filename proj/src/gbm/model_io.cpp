#include <json.hpp>

#include "pagesift/error.hpp"
#include "pagesift/gbm.hpp"

namespace pagesift::gbm {

using ordered_json = nlohmann::ordered_json;

std::string save_model(const GbmModel& model) {
  ordered_json doc;
  doc["version"] = kModelVersion;
  doc["prior"] = model.prior;
  doc["config"] = {
      {"iterations", model.config.iterations},
      {"num_leaves", model.config.num_leaves},
      {"learning_rate", model.config.learning_rate},
      {"shrinkage", model.config.shrinkage},
      {"min_docs_per_leaf", model.config.min_docs_per_leaf},
      {"seed", model.config.seed},
  };
  doc["schema"] = model.schema.names;
  doc["schema_version"] = model.schema.version;
  ordered_json trees = ordered_json::array();
  for (const auto& tree : model.trees) {
    ordered_json nodes = ordered_json::array();
    for (const auto& node : tree.nodes) {
      if (node.is_leaf()) {
        nodes.push_back({{"value", node.value}});
      } else {
        nodes.push_back({{"feature", node.feature},
                         {"threshold", node.threshold},
                         {"left", node.left},
                         {"right", node.right}});
      }
    }
    trees.push_back({{"nodes", std::move(nodes)}});
  }
  doc["trees"] = std::move(trees);
  return doc.dump(1) + "\n";
}

namespace {

[[noreturn]] void malformed(const std::string& what) { throw Error(ErrorKind::MalformedModel, what); }

template <typename T>
T field(const nlohmann::json& obj, const char* key) {
  if (!obj.is_object() || !obj.contains(key)) malformed(std::string("missing field '") + key + "'");
  const auto& v = obj.at(key);
  if constexpr (std::is_same_v<T, double>) {
    if (!v.is_number()) malformed(std::string("field '") + key + "' is not a number");
  } else if constexpr (std::is_integral_v<T>) {
    if (!v.is_number_integer()) malformed(std::string("field '") + key + "' is not an integer");
  }
  return v.get<T>();
}

}  // namespace

GbmModel load_model(std::string_view bytes) {
  nlohmann::json doc = nlohmann::json::parse(bytes.begin(), bytes.end(), nullptr, false);
  if (doc.is_discarded() || !doc.is_object()) malformed("not a JSON object");
  if (!doc.contains("version") || doc["version"] != kModelVersion) {
    malformed("version must be \"" + std::string(kModelVersion) + "\"");
  }
  try {
    GbmModel model;
    model.prior = field<double>(doc, "prior");
    const auto& config = doc.at("config");
    model.config.iterations = field<int>(config, "iterations");
    model.config.num_leaves = field<int>(config, "num_leaves");
    model.config.learning_rate = field<double>(config, "learning_rate");
    model.config.shrinkage = field<double>(config, "shrinkage");
    model.config.min_docs_per_leaf = field<int>(config, "min_docs_per_leaf");
    model.config.seed = field<std::uint64_t>(config, "seed");
    model.config.validate();

    if (!doc.contains("schema") || !doc["schema"].is_array()) malformed("schema must be an array of names");
    for (const auto& name : doc["schema"]) {
      if (!name.is_string()) malformed("schema entries must be strings");
      model.schema.names.push_back(name.get<std::string>());
    }
    model.schema.version = doc.value("schema_version", std::string{});
    const auto width = static_cast<int>(model.schema.names.size());

    if (!doc.contains("trees") || !doc["trees"].is_array()) malformed("trees must be an array");
    if (doc["trees"].size() > static_cast<std::size_t>(model.config.iterations)) malformed("more trees than iterations");
    for (const auto& t : doc["trees"]) {
      if (!t.is_object() || !t.contains("nodes") || !t["nodes"].is_array() || t["nodes"].empty()) {
        malformed("tree without nodes");
      }
      RegressionTree tree;
      const auto count = static_cast<int>(t["nodes"].size());
      for (const auto& n : t["nodes"]) {
        TreeNode node;
        if (n.contains("value")) {
          node.value = field<double>(n, "value");
        } else {
          node.feature = field<int>(n, "feature");
          node.threshold = field<double>(n, "threshold");
          node.left = field<int>(n, "left");
          node.right = field<int>(n, "right");
          const int self = static_cast<int>(tree.nodes.size());
          if (node.feature < 0 || node.feature >= width) malformed("feature index out of range");
          // Children always follow their parent, which also rules out cycles.
          if (node.left <= self || node.right <= self || node.left >= count || node.right >= count) {
            malformed("child index out of range");
          }
        }
        tree.nodes.push_back(node);
      }
      model.trees.push_back(std::move(tree));
    }
    return model;
  } catch (const nlohmann::json::exception& e) {
    malformed(e.what());
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::MalformedModel) throw;
    malformed(e.what());
  }
}

}  // namespace pagesift::gbm
