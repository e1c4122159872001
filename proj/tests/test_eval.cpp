#include <doctest.h>

#include <algorithm>
#include <random>

#include "pagesift/dataset.hpp"
#include "pagesift/error.hpp"
#include "pagesift/eval.hpp"
#include "support/generators.hpp"

using namespace pagesift;
using namespace pagesift::eval;
using dataset::LabeledPage;

namespace {

LabeledPage page(std::string id, std::vector<std::pair<std::string, Label>> tags_and_labels) {
  LabeledPage p;
  p.page_id = std::move(id);
  NodeId n = 2;
  for (auto& [tag, label] : tags_and_labels) p.labels.push_back({label, tag, std::to_string(n++), ""});
  return p;
}

// Random truth pages plus an independent confusion count for a random
// prediction map.
struct Fixture {
  std::vector<LabeledPage> truth;
  Predictions predictions;
  Confusion text, images;
};

Fixture random_fixture(gen::Rng& rng) {
  Fixture f;
  int pages = rng.uniform(1, 8);
  for (int i = 0; i < pages; ++i) {
    std::vector<std::pair<std::string, Label>> labels;
    int n = rng.uniform(0, 12);
    for (int k = 0; k < n; ++k) labels.emplace_back(rng.coin(0.3) ? "IMG" : "P", rng.coin() ? Label::R : Label::NR);
    auto p = page("p" + std::to_string(i), labels);
    auto& map = f.predictions[p.page_id];
    for (const auto& r : p.labels) {
      Label guess = rng.coin() ? Label::R : Label::NR;
      map[static_cast<NodeId>(std::stoul(r.id))] = guess;
      Confusion& c = r.tag == "IMG" ? f.images : f.text;
      bool t = r.label == Label::R, g = guess == Label::R;
      (t ? (g ? c.tp : c.fn) : (g ? c.fp : c.tn))++;
    }
    f.truth.push_back(std::move(p));
  }
  return f;
}

}  // namespace

TEST_SUITE("eval") {
  TEST_CASE("f1 arithmetic") {
    CHECK(f1_score(0.5, 0.5) == 0.5);
    CHECK(f1_score(0.91, 0.88) == doctest::Approx(0.8948).epsilon(1e-4 / 0.8948));
    CHECK(std::abs(f1_score(0.91, 0.88) - 2 * 0.91 * 0.88 / 1.79) < 1e-15);
    CHECK(f1_score(0, 0) == 0);
    auto m = metrics_from({1, 1, 1, 0});
    CHECK(m.precision == 0.5);
    CHECK(m.recall == 0.5);
    CHECK(m.f1 == 0.5);
    auto empty = metrics_from({0, 0, 0, 5});
    CHECK(empty.precision == 0);
    CHECK(empty.recall == 0);
    CHECK(empty.f1 == 0);
  }

  TEST_CASE("targets") {
    for (Target t : {Target::Text, Target::Images, Target::All}) CHECK(parse_target(to_string(t)) == t);
    CHECK_FALSE(parse_target("pictures"));
  }

  TEST_CASE("confusion example tp=1 fp=1 fn=1") {
    auto truth = page("a", {{"P", Label::R}, {"P", Label::NR}, {"P", Label::R}, {"IMG", Label::R}});
    Predictions pred{{"a", {{2, Label::R}, {3, Label::R}, {4, Label::NR}, {5, Label::R}}}};
    std::vector<LabeledPage> pages{truth};
    auto r = evaluate(pred, pages, Target::Text);
    CHECK(r.counts == Confusion{1, 1, 1, 0});
    CHECK(*r.precision == 0.5);
    CHECK(*r.recall == 0.5);
    CHECK(*r.f1 == 0.5);
    CHECK(r.pages_evaluated == 1);
    CHECK(r.warnings.empty());
    auto img = evaluate(pred, pages, Target::Images);
    CHECK(img.counts == Confusion{1, 0, 0, 0});
    CHECK(evaluate(pred, pages, Target::All).counts == Confusion{2, 1, 1, 0});
  }

  TEST_CASE("micro and macro averages differ") {
    // Page a: P=1, R=1/2. Page b: P=1/3, R=1.
    std::vector<LabeledPage> pages{page("a", {{"P", Label::R}, {"P", Label::R}}),
                                   page("b", {{"P", Label::R}, {"P", Label::NR}, {"P", Label::NR}})};
    Predictions pred{{"a", {{2, Label::R}, {3, Label::NR}}}, {"b", {{2, Label::R}, {3, Label::R}, {4, Label::R}}}};
    auto r = evaluate(pred, pages, Target::Text);
    CHECK(*r.precision == doctest::Approx(2.0 / 4));
    CHECK(*r.recall == doctest::Approx(2.0 / 3));
    CHECK(*r.macro_precision == doctest::Approx((1 + 1.0 / 3) / 2));
    CHECK(*r.macro_recall == doctest::Approx(0.75));
    CHECK(*r.macro_f1 == doctest::Approx((f1_score(1, 0.5) + f1_score(1.0 / 3, 1)) / 2));
  }

  TEST_CASE("empty slices and missing predictions") {
    std::vector<LabeledPage> pages{page("a", {{"P", Label::NR}, {"P", Label::R}})};
    Predictions pred{{"a", {{2, Label::NR}}}};
    auto img = evaluate(pred, pages, Target::Images);
    CHECK_FALSE(img.precision);
    CHECK_FALSE(img.f1);
    CHECK_FALSE(img.macro_f1);
    CHECK(img.pages_evaluated == 0);
    auto j = to_json(img);
    CHECK(j["f1"].is_null());
    CHECK(j["target"] == "images");

    auto text = evaluate(pred, pages, Target::Text);
    REQUIRE(text.warnings.size() == 1);
    CHECK(text.warnings[0].find("id 3") != std::string::npos);
    CHECK(text.counts == Confusion{0, 0, 1, 1});
    auto none = evaluate({}, pages, Target::Text);
    CHECK(none.warnings.size() == 2);

    std::vector<LabeledPage> no_positives{page("z", {{"P", Label::NR}})};
    auto skipped = evaluate({{"z", {{2, Label::NR}}}}, no_positives, Target::Text);
    CHECK(skipped.pages_skipped_macro == 1);
    CHECK_FALSE(skipped.macro_f1);
    CHECK(*skipped.f1 == 0);

    CHECK_THROWS_AS(evaluate({}, std::vector<LabeledPage>{}, Target::All), Error);
  }

  TEST_CASE("property: counts match an independent tally") {
    gen::Rng rng(3);
    for (int i = 0; i < 300; ++i) {
      auto f = random_fixture(rng);
      auto text = evaluate(f.predictions, f.truth, Target::Text);
      auto images = evaluate(f.predictions, f.truth, Target::Images);
      auto all = evaluate(f.predictions, f.truth, Target::All);
      REQUIRE(text.counts == f.text);
      REQUIRE(images.counts == f.images);
      Confusion sum = f.text;
      sum += f.images;
      REQUIRE(all.counts == sum);
      if (all.f1) {
        auto m = metrics_from(sum);
        REQUIRE(std::abs(*all.precision - m.precision) < 1e-9);
        REQUIRE(std::abs(*all.recall - m.recall) < 1e-9);
        REQUIRE(std::abs(*all.f1 - m.f1) < 1e-9);
        for (double v : {*all.precision, *all.recall, *all.f1}) REQUIRE((v >= 0 && v <= 1));
      }
    }
  }

  TEST_CASE("property: identity, page order and truth positives") {
    gen::Rng rng(4);
    for (int i = 0; i < 200; ++i) {
      auto f = random_fixture(rng);
      auto self = evaluate(truth_as_predictions(f.truth), f.truth, Target::All);
      if (self.counts.tp > 0) {
        REQUIRE(*self.precision == 1.0);
        REQUIRE(*self.recall == 1.0);
        REQUIRE(*self.f1 == 1.0);
      }
      REQUIRE(self.counts.fp + self.counts.fn == 0);

      auto shuffled = f.truth;
      std::shuffle(shuffled.begin(), shuffled.end(), rng.engine());
      auto a = evaluate(f.predictions, f.truth, Target::All);
      auto b = evaluate(f.predictions, shuffled, Target::All);
      REQUIRE(a.counts == b.counts);
      REQUIRE(a.f1 == b.f1);

      auto flipped = f.predictions;
      for (auto& [id, map] : flipped) {
        for (auto& [node, label] : map) label = label == Label::R ? Label::NR : Label::R;
      }
      auto c = evaluate(flipped, f.truth, Target::All);
      REQUIRE(c.counts.tp + c.counts.fn == a.counts.tp + a.counts.fn);
      REQUIRE(c.counts.tp == a.counts.fn);
      REQUIRE(c.counts.fp == a.counts.tn);
    }
  }
}
