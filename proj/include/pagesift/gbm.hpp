#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "pagesift/features.hpp"
#include "pagesift/label.hpp"

namespace pagesift::gbm {

using features::Matrix;

struct TrainingConfig {
  int iterations = 50;
  int num_leaves = 92;
  double learning_rate = 0.4;
  double shrinkage = 0.53;
  int min_docs_per_leaf = 10;
  std::uint64_t seed = 0;

  /// Throws Error(InvalidConfig) on out-of-range values.
  void validate() const;
  /// Factor applied to every leaf output.
  double step_scale() const { return learning_rate * shrinkage; }

  bool operator==(const TrainingConfig&) const = default;
};

/// Regularizer added to hessian sums in gains and leaf values.
inline constexpr double kEpsilon = 1e-9;

/// Internal nodes route `x[feature] <= threshold` to `left`. Leaves have
/// feature == -1 and carry `value`.
struct TreeNode {
  int feature = -1;
  double threshold = 0;
  int left = -1;
  int right = -1;
  double value = 0;

  bool is_leaf() const { return feature < 0; }
  bool operator==(const TreeNode&) const = default;
};

struct RegressionTree {
  std::vector<TreeNode> nodes;

  double predict(std::span<const double> x) const;
  std::size_t leaf_count() const;
  bool operator==(const RegressionTree&) const = default;
};

struct SplitCandidate {
  int feature = -1;
  double threshold = 0;
  double gain = -std::numeric_limits<double>::infinity();
  std::size_t left_count = 0;

  bool valid() const { return feature >= 0; }
};

/// G_L²/(H_L+ε) + G_R²/(H_R+ε) − G²/(H+ε).
double split_gain(double grad_left, double hess_left, double grad_right, double hess_right);

/// Threshold between two adjacent distinct values, strictly below `upper`.
double midpoint(double lower, double upper);

/// Best split of all rows, searched in parallel across features. Ties keep
/// the lowest feature, then the lowest threshold.
SplitCandidate find_best_split(const Matrix& x, std::span<const double> gradients,
                               std::span<const double> hessians, int min_docs_per_leaf);
/// Single-threaded reference of find_best_split.
SplitCandidate find_best_split_serial(const Matrix& x, std::span<const double> gradients,
                                      std::span<const double> hessians, int min_docs_per_leaf);

/// Best-first regression tree with Newton leaf values G/(H+ε). Leaf values
/// are not scaled. Throws Error(EmptyTraining) on zero rows.
RegressionTree fit_tree(const Matrix& x, std::span<const double> gradients,
                        std::span<const double> hessians, const TrainingConfig& config);
RegressionTree fit_tree_serial(const Matrix& x, std::span<const double> gradients,
                               std::span<const double> hessians, const TrainingConfig& config);

struct GbmModel {
  double prior = 0;
  std::vector<RegressionTree> trees;
  features::FeatureSchema schema;
  TrainingConfig config;

  double score(std::span<const double> x) const;
  bool operator==(const GbmModel&) const = default;
};

/// Mean logistic loss after each stage; entry 0 is the prior-only model.
struct TrainingLog {
  std::vector<double> loss;
};

double sigmoid(double score);
double logistic_loss(std::span<const double> scores, std::span<const int> labels);

/// MART with logistic loss. Throws Error(DegenerateLabels) for single-class
/// labels and Error(EmptyTraining) for zero rows.
GbmModel train(const Matrix& x, std::span<const int> labels, const TrainingConfig& config,
               const features::FeatureSchema& schema = features::schema(), TrainingLog* log = nullptr);

/// sigmoid(prior + Σ trees). Throws Error(SchemaMismatch) on width mismatch.
double predict(const GbmModel& model, std::span<const double> x);

/// R iff predict(x) >= threshold.
Label classify(const GbmModel& model, std::span<const double> x, double threshold = 0.5);

inline constexpr std::string_view kModelVersion = "gbm-v1";

std::string save_model(const GbmModel& model);
/// Throws Error(MalformedModel).
GbmModel load_model(std::string_view bytes);

}  // namespace pagesift::gbm
