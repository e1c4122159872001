#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>

#include "pagesift/error.hpp"
#include "pagesift/gbm.hpp"

namespace pagesift::gbm {

namespace {

using Int128 = __int128;

// Gradient and hessian sums are accumulated in 128-bit fixed point, so a sum
// over a set of rows does not depend on the order the rows are visited.
// Identical partitions reached through different features therefore get
// bit-identical gains, and the feature/threshold tie rule stays exact.
class FixedPoint {
 public:
  explicit FixedPoint(std::span<const double> values) : quantized_(values.size()) {
    double max_abs = 0;
    for (double v : values) max_abs = std::max(max_abs, std::abs(v));
    if (max_abs > 0) {
      int e = 0;
      std::frexp(max_abs, &e);
      exponent_ = 62 - e;
    }
    for (std::size_t i = 0; i < values.size(); ++i) {
      quantized_[i] = std::llround(std::ldexp(values[i], exponent_));
    }
  }

  Int128 at(std::size_t i) const { return quantized_[i]; }
  double to_double(Int128 sum) const { return std::ldexp(static_cast<double>(sum), -exponent_); }

 private:
  std::vector<long long> quantized_;
  int exponent_ = 0;
};

struct Leaf {
  int node = 0;
  std::vector<std::vector<std::uint32_t>> sorted;  // rows of this leaf, per feature, ascending value
  Int128 grad = 0;
  Int128 hess = 0;
  std::size_t count = 0;
  SplitCandidate best;
};

class TreeGrower {
 public:
  TreeGrower(const Matrix& x, std::span<const double> gradients, std::span<const double> hessians,
             const TrainingConfig& config, bool parallel)
      : x_(x), grad_(gradients), hess_(hessians), config_(config), parallel_(parallel) {}

  Leaf root() const {
    Leaf leaf;
    const std::size_t n = x_.rows();
    leaf.sorted.resize(x_.cols());
    const auto cols = static_cast<std::ptrdiff_t>(x_.cols());
#pragma omp parallel for if (parallel_)
    for (std::ptrdiff_t f = 0; f < cols; ++f) {
      auto& order = leaf.sorted[static_cast<std::size_t>(f)];
      order.resize(n);
      std::iota(order.begin(), order.end(), 0u);
      std::stable_sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
        return x_.at(a, static_cast<std::size_t>(f)) < x_.at(b, static_cast<std::size_t>(f));
      });
    }
    for (std::size_t r = 0; r < n; ++r) {
      leaf.grad += grad_.at(r);
      leaf.hess += hess_.at(r);
    }
    leaf.count = n;
    return leaf;
  }

  // Best split of `leaf` over every feature.
  SplitCandidate best_split(const Leaf& leaf) const {
    const std::size_t cols = x_.cols();
    std::vector<SplitCandidate> per_feature(cols);
    const auto n_cols = static_cast<std::ptrdiff_t>(cols);
#pragma omp parallel for schedule(dynamic) if (parallel_)
    for (std::ptrdiff_t f = 0; f < n_cols; ++f) {
      per_feature[static_cast<std::size_t>(f)] = best_split_on(leaf, static_cast<std::size_t>(f));
    }
    SplitCandidate best;
    for (const auto& candidate : per_feature) {
      if (candidate.valid() && candidate.gain > best.gain) best = candidate;
    }
    return best;
  }

  std::pair<Leaf, Leaf> split(Leaf& parent) const {
    const SplitCandidate& s = parent.best;
    const auto& by_feature = parent.sorted[static_cast<std::size_t>(s.feature)];
    std::vector<char> goes_left(x_.rows(), 0);
    for (std::size_t k = 0; k < s.left_count; ++k) goes_left[by_feature[k]] = 1;

    Leaf left, right;
    left.sorted.resize(x_.cols());
    right.sorted.resize(x_.cols());
    const auto cols = static_cast<std::ptrdiff_t>(x_.cols());
#pragma omp parallel for if (parallel_)
    for (std::ptrdiff_t f = 0; f < cols; ++f) {
      const auto uf = static_cast<std::size_t>(f);
      auto& l = left.sorted[uf];
      auto& r = right.sorted[uf];
      l.reserve(s.left_count);
      r.reserve(parent.count - s.left_count);
      for (std::uint32_t row : parent.sorted[uf]) (goes_left[row] ? l : r).push_back(row);
    }
    for (std::size_t k = 0; k < s.left_count; ++k) {
      left.grad += grad_.at(by_feature[k]);
      left.hess += hess_.at(by_feature[k]);
    }
    left.count = s.left_count;
    right.grad = parent.grad - left.grad;
    right.hess = parent.hess - left.hess;
    right.count = parent.count - s.left_count;
    parent.sorted.clear();
    return {std::move(left), std::move(right)};
  }

  double leaf_value(const Leaf& leaf) const {
    return grad_.to_double(leaf.grad) / (hess_.to_double(leaf.hess) + kEpsilon);
  }

  RegressionTree grow() {
    RegressionTree tree;
    tree.nodes.emplace_back();
    std::vector<Leaf> leaves;
    leaves.push_back(root());
    leaves.back().best = best_split(leaves.back());

    while (leaves.size() < static_cast<std::size_t>(config_.num_leaves)) {
      std::size_t chosen = leaves.size();
      for (std::size_t i = 0; i < leaves.size(); ++i) {
        const SplitCandidate& b = leaves[i].best;
        if (!b.valid() || !(b.gain > 0)) continue;
        if (chosen == leaves.size() || b.gain > leaves[chosen].best.gain) chosen = i;
      }
      if (chosen == leaves.size()) break;

      Leaf parent = std::move(leaves[chosen]);
      leaves.erase(leaves.begin() + static_cast<std::ptrdiff_t>(chosen));
      auto [left, right] = split(parent);
      left.node = static_cast<int>(tree.nodes.size());
      right.node = left.node + 1;
      TreeNode& internal = tree.nodes[static_cast<std::size_t>(parent.node)];
      internal.feature = parent.best.feature;
      internal.threshold = parent.best.threshold;
      internal.left = left.node;
      internal.right = right.node;
      tree.nodes.emplace_back();
      tree.nodes.emplace_back();
      left.best = best_split(left);
      right.best = best_split(right);
      leaves.push_back(std::move(left));
      leaves.push_back(std::move(right));
    }
    for (const Leaf& leaf : leaves) tree.nodes[static_cast<std::size_t>(leaf.node)].value = leaf_value(leaf);
    return tree;
  }

 private:
  SplitCandidate best_split_on(const Leaf& leaf, std::size_t feature) const {
    SplitCandidate best;
    const auto& order = leaf.sorted[feature];
    const std::size_t m = order.size();
    const auto min_docs = static_cast<std::size_t>(config_.min_docs_per_leaf);
    if (m < 2 || m < 2 * min_docs) return best;
    const double g_total = grad_.to_double(leaf.grad);
    const double h_total = hess_.to_double(leaf.hess);
    Int128 g_left = 0;
    Int128 h_left = 0;
    for (std::size_t k = 1; k < m; ++k) {
      g_left += grad_.at(order[k - 1]);
      h_left += hess_.at(order[k - 1]);
      if (k < min_docs || m - k < min_docs) continue;
      double lower = x_.at(order[k - 1], feature);
      double upper = x_.at(order[k], feature);
      if (!(lower < upper)) continue;
      double gl = grad_.to_double(g_left);
      double hl = hess_.to_double(h_left);
      double gr = grad_.to_double(leaf.grad - g_left);
      double hr = hess_.to_double(leaf.hess - h_left);
      double gain = gl * gl / (hl + kEpsilon) + gr * gr / (hr + kEpsilon) - g_total * g_total / (h_total + kEpsilon);
      if (gain > best.gain) {
        best.feature = static_cast<int>(feature);
        best.threshold = midpoint(lower, upper);
        best.gain = gain;
        best.left_count = k;
      }
    }
    return best;
  }

  const Matrix& x_;
  FixedPoint grad_;
  FixedPoint hess_;
  const TrainingConfig& config_;
  bool parallel_;
};

void check_inputs(const Matrix& x, std::span<const double> gradients, std::span<const double> hessians,
                  const TrainingConfig& config) {
  if (x.rows() == 0) throw Error(ErrorKind::EmptyTraining, "no training rows");
  if (gradients.size() != x.rows() || hessians.size() != x.rows()) {
    throw Error(ErrorKind::InvalidConfig, "gradient/hessian length differs from row count");
  }
  for (double h : hessians) {
    if (!(h >= 0)) throw Error(ErrorKind::InvalidConfig, "hessians must be non-negative");
  }
  config.validate();
}

RegressionTree fit(const Matrix& x, std::span<const double> gradients, std::span<const double> hessians,
                   const TrainingConfig& config, bool parallel) {
  check_inputs(x, gradients, hessians, config);
  TreeGrower grower(x, gradients, hessians, config, parallel);
  return grower.grow();
}

SplitCandidate root_split(const Matrix& x, std::span<const double> gradients, std::span<const double> hessians,
                          int min_docs_per_leaf, bool parallel) {
  TrainingConfig config;
  config.min_docs_per_leaf = min_docs_per_leaf;
  check_inputs(x, gradients, hessians, config);
  TreeGrower grower(x, gradients, hessians, config, parallel);
  return grower.best_split(grower.root());
}

}  // namespace

double split_gain(double grad_left, double hess_left, double grad_right, double hess_right) {
  double g = grad_left + grad_right;
  double h = hess_left + hess_right;
  return grad_left * grad_left / (hess_left + kEpsilon) + grad_right * grad_right / (hess_right + kEpsilon) -
         g * g / (h + kEpsilon);
}

double midpoint(double lower, double upper) {
  double t = 0.5 * (lower + upper);
  if (!(t >= lower && t < upper)) t = lower;
  return t;
}

SplitCandidate find_best_split(const Matrix& x, std::span<const double> gradients, std::span<const double> hessians,
                               int min_docs_per_leaf) {
  return root_split(x, gradients, hessians, min_docs_per_leaf, true);
}

SplitCandidate find_best_split_serial(const Matrix& x, std::span<const double> gradients,
                                      std::span<const double> hessians, int min_docs_per_leaf) {
  return root_split(x, gradients, hessians, min_docs_per_leaf, false);
}

RegressionTree fit_tree(const Matrix& x, std::span<const double> gradients, std::span<const double> hessians,
                        const TrainingConfig& config) {
  return fit(x, gradients, hessians, config, true);
}

RegressionTree fit_tree_serial(const Matrix& x, std::span<const double> gradients,
                               std::span<const double> hessians, const TrainingConfig& config) {
  return fit(x, gradients, hessians, config, false);
}

double RegressionTree::predict(std::span<const double> x) const {
  std::size_t i = 0;
  while (!nodes[i].is_leaf()) {
    const TreeNode& n = nodes[i];
    i = static_cast<std::size_t>(x[static_cast<std::size_t>(n.feature)] <= n.threshold ? n.left : n.right);
  }
  return nodes[i].value;
}

std::size_t RegressionTree::leaf_count() const {
  return static_cast<std::size_t>(std::count_if(nodes.begin(), nodes.end(), [](const TreeNode& n) { return n.is_leaf(); }));
}

}  // namespace pagesift::gbm
