#include <cmath>
#include <string>

#include "pagesift/error.hpp"
#include "pagesift/gbm.hpp"

namespace pagesift::gbm {

namespace {

// log(1 + e^z) without overflow.
double softplus(double z) { return z > 0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z)); }

}  // namespace

void TrainingConfig::validate() const {
  auto fail = [](const std::string& what) { throw Error(ErrorKind::InvalidConfig, what); };
  if (iterations < 1) fail("iterations must be >= 1");
  if (num_leaves < 2) fail("num_leaves must be >= 2");
  if (!(learning_rate > 0 && learning_rate <= 1)) fail("learning_rate must be in (0, 1]");
  if (!(shrinkage > 0 && shrinkage <= 1)) fail("shrinkage must be in (0, 1]");
  if (min_docs_per_leaf < 1) fail("min_docs_per_leaf must be >= 1");
}

double sigmoid(double score) { return 1.0 / (1.0 + std::exp(-score)); }

double logistic_loss(std::span<const double> scores, std::span<const int> labels) {
  if (scores.empty()) return 0.0;
  double total = 0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    total += labels[i] == 1 ? softplus(-scores[i]) : softplus(scores[i]);
  }
  return total / static_cast<double>(scores.size());
}

double GbmModel::score(std::span<const double> x) const {
  double s = prior;
  for (const auto& tree : trees) s += tree.predict(x);
  return s;
}

GbmModel train(const Matrix& x, std::span<const int> labels, const TrainingConfig& config,
               const features::FeatureSchema& schema, TrainingLog* log) {
  config.validate();
  const std::size_t n = x.rows();
  if (n == 0) throw Error(ErrorKind::EmptyTraining, "no training rows");
  if (labels.size() != n) throw Error(ErrorKind::InvalidConfig, "label count differs from row count");
  if (x.cols() != schema.names.size()) {
    throw Error(ErrorKind::SchemaMismatch, "matrix has " + std::to_string(x.cols()) + " columns, schema has " +
                                               std::to_string(schema.names.size()));
  }
  std::size_t positives = 0;
  for (int y : labels) {
    if (y != 0 && y != 1) throw Error(ErrorKind::InvalidConfig, "labels must be 0 or 1");
    positives += static_cast<std::size_t>(y);
  }
  if (positives == 0 || positives == n) {
    throw Error(ErrorKind::DegenerateLabels, "training labels contain a single class");
  }

  GbmModel model;
  model.schema = schema;
  model.config = config;
  const double p = static_cast<double>(positives) / static_cast<double>(n);
  model.prior = std::log(p / (1 - p));

  std::vector<double> scores(n, model.prior);
  std::vector<double> gradients(n);
  std::vector<double> hessians(n);
  if (log) log->loss = {logistic_loss(scores, labels)};

  const double scale = config.step_scale();
  for (int t = 0; t < config.iterations; ++t) {
    for (std::size_t i = 0; i < n; ++i) {
      double prob = sigmoid(scores[i]);
      gradients[i] = labels[i] - prob;
      hessians[i] = prob * (1 - prob);
    }
    RegressionTree tree = fit_tree(x, gradients, hessians, config);
    for (auto& node : tree.nodes) {
      if (node.is_leaf()) node.value *= scale;
    }
    for (std::size_t i = 0; i < n; ++i) scores[i] += tree.predict(x.row(i));
    model.trees.push_back(std::move(tree));
    if (log) log->loss.push_back(logistic_loss(scores, labels));
  }
  return model;
}

double predict(const GbmModel& model, std::span<const double> x) {
  if (x.size() != model.schema.names.size()) {
    throw Error(ErrorKind::SchemaMismatch, "vector has " + std::to_string(x.size()) + " features, model expects " +
                                               std::to_string(model.schema.names.size()));
  }
  return sigmoid(model.score(x));
}

Label classify(const GbmModel& model, std::span<const double> x, double threshold) {
  return predict(model, x) >= threshold ? Label::R : Label::NR;
}

}  // namespace pagesift::gbm
