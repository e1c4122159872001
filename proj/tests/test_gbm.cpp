#include <doctest.h>

#include <cmath>

#include "oracles/split_oracle.hpp"
#include "oracles/tree_oracle.hpp"
#include "pagesift/error.hpp"
#include "pagesift/gbm.hpp"
#include "support/generators.hpp"

using namespace pagesift;
using namespace pagesift::gbm;

namespace {

const features::FeatureSchema kOneFeature{"test-1d", {"x"}};

ErrorKind kind_of(const auto& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("no error thrown");
  return ErrorKind::Io;
}

// class = [x > 0] on a seeded sample of `n` points in [-1, 1].
std::pair<Matrix, std::vector<int>> separable_1d(std::size_t n, std::uint64_t seed) {
  gen::Rng rng(seed);
  Matrix x(n, 1);
  std::vector<int> y(n);
  for (std::size_t i = 0; i < n; ++i) {
    double v = rng.real(-1, 1);
    if (v == 0) v = 0.5;
    x.at(i, 0) = v;
    y[i] = v > 0 ? 1 : 0;
  }
  return {x, y};
}

struct Instance {
  Matrix x;
  std::vector<double> grad, hess;
};

// Coarse instances use dyadic values so equal-gain ties are frequent and exact.
Instance random_instance(gen::Rng& rng, std::size_t rows, std::size_t cols, bool coarse) {
  Instance in{gen::random_matrix(rng, rows, cols, coarse), {}, {}};
  for (std::size_t r = 0; r < rows; ++r) {
    if (coarse) {
      in.grad.push_back(rng.uniform(-64, 64) / 64.0);
      in.hess.push_back(rng.uniform(1, 16) / 64.0);
    } else {
      double p = rng.real(0.01, 0.99);
      in.grad.push_back((rng.coin() ? 1.0 : 0.0) - p);
      in.hess.push_back(p * (1 - p));
    }
  }
  return in;
}

}  // namespace

TEST_SUITE("gbm") {
  TEST_CASE("config validation") {
    TrainingConfig ok;
    CHECK_NOTHROW(ok.validate());
    CHECK(ok.step_scale() == doctest::Approx(0.212));
    for (auto mutate : std::vector<std::function<void(TrainingConfig&)>>{
             [](auto& c) { c.iterations = 0; }, [](auto& c) { c.num_leaves = 1; },
             [](auto& c) { c.learning_rate = 0; }, [](auto& c) { c.learning_rate = 1.5; },
             [](auto& c) { c.shrinkage = -1; }, [](auto& c) { c.min_docs_per_leaf = 0; }}) {
      TrainingConfig c;
      mutate(c);
      CHECK(kind_of([&] { c.validate(); }) == ErrorKind::InvalidConfig);
    }
  }

  TEST_CASE("two-row Newton example") {
    Matrix x(2, 1);
    x.at(0, 0) = 0;
    x.at(1, 0) = 1;
    std::vector<double> g{-0.5, 0.5}, h{0.25, 0.25};
    TrainingConfig config;
    config.min_docs_per_leaf = 1;
    auto tree = fit_tree(x, g, h, config);
    REQUIRE(tree.nodes.size() == 3);
    CHECK(tree.nodes[0].feature == 0);
    CHECK(tree.nodes[0].threshold == 0.5);
    CHECK(tree.nodes[1].value == doctest::Approx(-2.0).epsilon(1e-8));
    CHECK(tree.nodes[2].value == doctest::Approx(2.0).epsilon(1e-8));
    CHECK(tree.leaf_count() == 2);
  }

  TEST_CASE("equal gradients give a single leaf") {
    gen::Rng rng(5);
    Matrix x = gen::random_matrix(rng, 40, 3, false);
    std::vector<double> g(40, 0.3), h(40, 0.21);
    TrainingConfig config;
    config.min_docs_per_leaf = 1;
    auto tree = fit_tree(x, g, h, config);
    REQUIRE(tree.nodes.size() == 1);
    CHECK(tree.nodes[0].value == doctest::Approx(0.3 * 40 / (0.21 * 40 + kEpsilon)));
  }

  TEST_CASE("min_docs_per_leaf blocks small sides") {
    Matrix x(4, 1);
    for (int i = 0; i < 4; ++i) x.at(static_cast<std::size_t>(i), 0) = i;
    std::vector<double> g{-1, 1, 1, 1}, h{0.25, 0.25, 0.25, 0.25};
    auto s1 = find_best_split(x, g, h, 1);
    CHECK(s1.left_count == 1);
    auto s2 = find_best_split(x, g, h, 2);
    CHECK(s2.left_count == 2);
    CHECK_FALSE(find_best_split(x, g, h, 3).valid());
  }

  TEST_CASE("midpoint stays in [lower, upper)") {
    CHECK(midpoint(1, 3) == 2);
    double a = 1.0, b = std::nextafter(1.0, 2.0);
    CHECK(midpoint(a, b) == a);
    CHECK(split_gain(-0.5, 0.25, 0.5, 0.25) == doctest::Approx(2.0));
  }

  TEST_CASE("fit_tree input errors") {
    Matrix empty(0, 2);
    TrainingConfig config;
    CHECK(kind_of([&] { fit_tree(empty, {}, {}, config); }) == ErrorKind::EmptyTraining);
    Matrix x(2, 1);
    std::vector<double> g{1}, h{1, 1};
    CHECK(kind_of([&] { fit_tree(x, g, h, config); }) == ErrorKind::InvalidConfig);
    std::vector<double> g2{1, 1}, bad{1, -1};
    CHECK(kind_of([&] { fit_tree(x, g2, bad, config); }) == ErrorKind::InvalidConfig);
  }

  TEST_CASE("root split matches the exhaustive oracle") {
    gen::Rng rng(99);
    for (int i = 0; i < 300; ++i) {
      std::size_t rows = static_cast<std::size_t>(rng.uniform(1, 32));
      std::size_t cols = static_cast<std::size_t>(rng.uniform(1, 4));
      int min_docs = rng.uniform(1, 3);
      Instance in = random_instance(rng, rows, cols, i % 2 == 0);
      auto expected = oracle::brute_force_split(in.x, in.grad, in.hess, static_cast<std::size_t>(min_docs));
      for (auto* fn : {&find_best_split, &find_best_split_serial}) {
        auto got = fn(in.x, in.grad, in.hess, min_docs);
        REQUIRE(got.feature == expected.feature);
        if (!got.valid()) continue;
        REQUIRE(got.threshold == expected.threshold);
        REQUIRE(std::abs(got.gain - expected.gain) <= 1e-12);
      }
    }
  }

  TEST_CASE("whole trees match the best-first oracle") {
    gen::Rng rng(1234);
    for (int i = 0; i < 200; ++i) {
      std::size_t rows = static_cast<std::size_t>(rng.uniform(2, 32));
      std::size_t cols = static_cast<std::size_t>(rng.uniform(1, 4));
      Instance in = random_instance(rng, rows, cols, i % 2 == 0);
      TrainingConfig config;
      config.num_leaves = rng.uniform(2, 8);
      config.min_docs_per_leaf = rng.uniform(1, 3);
      auto expected = oracle::brute_force_tree(in.x, in.grad, in.hess, static_cast<std::size_t>(config.num_leaves),
                                               static_cast<std::size_t>(config.min_docs_per_leaf));
      auto got = fit_tree(in.x, in.grad, in.hess, config);
      REQUIRE(got.nodes.size() == expected.nodes.size());
      REQUIRE(got.leaf_count() <= static_cast<std::size_t>(config.num_leaves));
      for (std::size_t k = 0; k < got.nodes.size(); ++k) {
        REQUIRE(got.nodes[k].feature == expected.nodes[k].feature);
        REQUIRE(got.nodes[k].threshold == expected.nodes[k].threshold);
        REQUIRE(got.nodes[k].left == expected.nodes[k].left);
        REQUIRE(got.nodes[k].right == expected.nodes[k].right);
        REQUIRE(std::abs(got.nodes[k].value - expected.nodes[k].value) <= 1e-9 * std::max(1.0, std::abs(expected.nodes[k].value)));
      }
      REQUIRE(fit_tree_serial(in.x, in.grad, in.hess, config) == got);
    }
  }

  TEST_CASE("prior, empty models and classification threshold") {
    GbmModel m;
    m.schema = kOneFeature;
    std::vector<double> x{0.0};
    CHECK(predict(m, x) == 0.5);
    CHECK(classify(m, x) == Label::R);
    m.prior = std::log(3.0);
    CHECK(predict(m, x) == doctest::Approx(0.75).epsilon(1e-15));
    CHECK(classify(m, x, 0.9) == Label::NR);
    m.prior = std::log(0.49 / 0.51);
    CHECK(classify(m, x) == Label::NR);
    std::vector<double> wide{0.0, 1.0};
    CHECK(kind_of([&] { predict(m, wide); }) == ErrorKind::SchemaMismatch);
  }

  TEST_CASE("training errors") {
    Matrix x(3, 1);
    std::vector<int> ones{1, 1, 1};
    CHECK(kind_of([&] { train(x, ones, {}, kOneFeature); }) == ErrorKind::DegenerateLabels);
    Matrix empty(0, 1);
    CHECK(kind_of([&] { train(empty, {}, {}, kOneFeature); }) == ErrorKind::EmptyTraining);
    std::vector<int> y{0, 1, 0};
    CHECK(kind_of([&] { train(x, y, {}); }) == ErrorKind::SchemaMismatch);
  }

  TEST_CASE("balanced labels give a zero prior; one iteration adds one scaled tree") {
    auto [x, y] = separable_1d(50, 3);
    std::vector<int> balanced(50);
    for (std::size_t i = 0; i < 50; ++i) balanced[i] = static_cast<int>(i % 2);
    TrainingConfig config;
    config.iterations = 1;
    config.min_docs_per_leaf = 1;
    auto m = train(x, balanced, config, kOneFeature);
    CHECK(m.prior == 0.0);
    REQUIRE(m.trees.size() == 1);

    auto m2 = train(x, y, config, kOneFeature);
    std::vector<double> g, h;
    double p0 = sigmoid(m2.prior);
    for (int label : y) {
      g.push_back(label - p0);
      h.push_back(p0 * (1 - p0));
    }
    auto raw = fit_tree(x, g, h, config);
    for (std::size_t i = 0; i < x.rows(); ++i) {
      CHECK(m2.score(x.row(i)) == m2.prior + raw.predict(x.row(i)) * config.step_scale());
    }
  }

  TEST_CASE("leaf scaling is linear in learning_rate x shrinkage") {
    auto [x, y] = separable_1d(120, 8);
    TrainingConfig a;
    a.iterations = 1;
    a.min_docs_per_leaf = 2;
    a.learning_rate = 0.4;
    a.shrinkage = 0.5;
    TrainingConfig b = a;
    b.learning_rate = 0.2;
    auto ma = train(x, y, a, kOneFeature);
    auto mb = train(x, y, b, kOneFeature);
    REQUIRE(ma.trees[0].nodes.size() == mb.trees[0].nodes.size());
    for (std::size_t k = 0; k < ma.trees[0].nodes.size(); ++k) {
      const auto& na = ma.trees[0].nodes[k];
      const auto& nb = mb.trees[0].nodes[k];
      CHECK(na.feature == nb.feature);
      if (na.is_leaf()) CHECK(nb.value == 0.5 * na.value);
    }
    TrainingConfig c = a;
    c.shrinkage = 0.15;  // k = 0.3
    auto mc = train(x, y, c, kOneFeature);
    for (std::size_t k = 0; k < ma.trees[0].nodes.size(); ++k) {
      if (ma.trees[0].nodes[k].is_leaf()) {
        CHECK(mc.trees[0].nodes[k].value == doctest::Approx(0.3 * ma.trees[0].nodes[k].value).epsilon(1e-14));
      }
    }
  }

  TEST_CASE("separable 1-D data: convergence, accuracy and monotone output") {
    auto [x, y] = separable_1d(200, 11);
    TrainingConfig config;
    config.min_docs_per_leaf = 1;
    TrainingLog log;
    auto m = train(x, y, config, kOneFeature, &log);
    REQUIRE(log.loss.size() == 51);
    for (std::size_t t = 1; t < log.loss.size(); ++t) CHECK(log.loss[t] <= log.loss[t - 1] + 1e-9);
    for (std::size_t i = 0; i < x.rows(); ++i) CHECK((classify(m, x.row(i)) == Label::R) == (y[i] == 1));
    double prev = 0;
    for (int k = -100; k <= 100; ++k) {
      std::vector<double> v{k / 100.0};
      double p = predict(m, v);
      CHECK(p >= prev);
      prev = p;
    }
    std::vector<double> one{1.0};
    CHECK(predict(m, one) > 0.9);
  }

  TEST_CASE("training is deterministic and serializes byte-identically") {
    gen::Rng rng(21);
    Matrix x = gen::random_matrix(rng, 300, 25, false);
    std::vector<int> y(300);
    for (std::size_t i = 0; i < 300; ++i) y[i] = x.at(i, 0) + 0.5 * x.at(i, 3) > 0 ? 1 : 0;
    TrainingConfig config;
    config.iterations = 10;
    TrainingLog log;
    auto a = train(x, y, config, features::schema(), &log);
    auto b = train(x, y, config);
    CHECK(a == b);
    CHECK(save_model(a) == save_model(b));
    for (std::size_t t = 1; t < log.loss.size(); ++t) CHECK(log.loss[t] <= log.loss[t - 1] + 1e-9);
  }

  TEST_CASE("model file round trip") {
    gen::Rng rng(31);
    Matrix x = gen::random_matrix(rng, 200, 25, false);
    std::vector<int> y(200);
    for (std::size_t i = 0; i < 200; ++i) y[i] = x.at(i, 2) > 0.3 ? 1 : 0;
    TrainingConfig config;
    config.iterations = 5;
    config.num_leaves = 6;
    auto m = train(x, y, config);
    std::string bytes = save_model(m);
    auto loaded = load_model(bytes);
    CHECK(loaded == m);
    CHECK(save_model(loaded) == bytes);
    Matrix probe = gen::random_matrix(rng, 100, 25, false);
    for (std::size_t i = 0; i < probe.rows(); ++i) CHECK(predict(loaded, probe.row(i)) == predict(m, probe.row(i)));
    CHECK(bytes.find("\"version\": \"gbm-v1\"") != std::string::npos);

    for (std::size_t len = 0; len + 1 < bytes.size(); len += 1 + len / 8) {
      CAPTURE(len);
      CHECK(kind_of([&] { load_model(bytes.substr(0, len)); }) == ErrorKind::MalformedModel);
    }
    std::string other_version = bytes;
    other_version.replace(other_version.find("gbm-v1"), 6, "gbm-v2");
    CHECK(kind_of([&] { load_model(other_version); }) == ErrorKind::MalformedModel);
    std::string bad_child = bytes;
    bad_child.replace(bad_child.find("\"left\": 1"), 9, "\"left\": 0");
    CHECK(kind_of([&] { load_model(bad_child); }) == ErrorKind::MalformedModel);
  }
}
