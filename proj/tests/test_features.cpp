#include <doctest.h>

#include <cmath>
#include <sstream>

#include "pagesift/dom.hpp"
#include "pagesift/error.hpp"
#include "pagesift/features.hpp"
#include "pagesift/layout.hpp"
#include "support/generators.hpp"

using namespace pagesift;
using namespace pagesift::features;

namespace {

struct Page {
  dom::Document doc;
  layout::LayoutTree tree;

  explicit Page(const std::string& html, layout::Viewport vp = {})
      : doc(dom::parse_document(html)), tree(layout::compute_layout(doc, vp)) {}

  FeatureVector at(NodeId id) const { return extract_features(doc, tree, id); }
};

}  // namespace

TEST_SUITE("features") {
  TEST_CASE("schema is frozen at 25 named columns") {
    CHECK(schema().version == "features-v1");
    REQUIRE(schema().names.size() == kFeatureCount);
    CHECK(kFeatureCount == 25);
    CHECK(schema().names[kXRel] == "x_rel");
    CHECK(schema().names[kIsImage] == "is_image");
    CHECK(schema().names[kHasSrc] == "has_src");
  }

  TEST_CASE("image geometry on a 1280 x 416 page") {
    Page p("<body><img src=\"a.jpg\" width=\"600\" height=\"400\" alt=\"A  cat\"></body>");
    CHECK(p.tree.page_height() == 416);
    auto f = p.at(2);
    CHECK(f[kWRel] == 0.46875);
    CHECK(f[kXRel] == 8.0 / 1280);
    CHECK(f[kYRel] == 8.0 / 416);
    CHECK(f[kHRel] == 400.0 / 416);
    CHECK(f[kAreaRel] == doctest::Approx(600.0 * 400 / (1280.0 * 416)).epsilon(1e-15));
    CHECK(f[kCenterOffset] == doctest::Approx(std::abs(8 + 300 - 640) / 1280.0));
    CHECK(f[kIsImage] == 1);
    CHECK(f[kHasSrc] == 1);
    CHECK(f[kAltLength] == 5);
    CHECK(f[kWordCount] == 0);
    CHECK(f[kTagCode] >= kUnknownTagBuckets);

    Page no_src("<body><img width=\"600\" height=\"400\"></body>");
    CHECK(no_src.at(2)[kHasSrc] == 0);
  }

  TEST_CASE("doubling the viewport width halves x_rel and w_rel of a fixed image") {
    const std::string html = "<body><img src=\"a.jpg\" width=\"600\" height=\"400\"></body>";
    auto narrow = Page(html, {1280, 800}).at(2);
    auto wide = Page(html, {2560, 800}).at(2);
    CHECK(wide[kXRel] == narrow[kXRel] / 2);
    CHECK(wide[kWRel] == narrow[kWRel] / 2);
  }

  TEST_CASE("link density") {
    Page all("<p><a href=\"#\">every word linked</a></p>");
    CHECK(all.at(2)[kLinkDensity] == 1.0);
    Page half("<p>two words <a href=\"#\">linked <a href=\"#\">twice</a></a></p>");
    CHECK(half.at(2)[kLinkDensity] == 0.5);
    Page none("<p>plain</p>");
    CHECK(none.at(2)[kLinkDensity] == 0.0);
  }

  TEST_CASE("text density over 80-character wrapped lines") {
    std::string text;
    for (int i = 0; i < 29; ++i) text += "abcd ";
    text += "abcdefghijklmno";
    REQUIRE(text.size() == 160);
    Page p("<p>" + text + "</p>");
    auto f = p.at(2);
    CHECK(f[kWordCount] == 30);
    CHECK(f[kTextDensity] == 15.0);
    CHECK(f[kAvgWordLength] == doctest::Approx(131.0 / 30));
    CHECK(f[kTagRatio] == 160);

    auto stats = text_stats("one two three");
    CHECK(stats.words == 3);
    CHECK(stats.text_density == 3);
    CHECK(text_stats("").text_density == 0);
  }

  TEST_CASE("token flags match word prefixes of id and class") {
    Page p("<div class=\"story-body\">a</div><div id=\"nav_bar\">b</div><div class=\"x y\">c</div>"
           "<div id=\"mainContent\" class=\"share-tools\">d</div>");
    CHECK(p.at(2)[kPositiveToken] == 1);
    CHECK(p.at(2)[kNegativeToken] == 0);
    CHECK(p.at(3)[kNegativeToken] == 1);
    CHECK(p.at(4)[kPositiveToken] == 0);
    CHECK(p.at(4)[kNegativeToken] == 0);
    CHECK(p.at(5)[kPositiveToken] == 1);
    CHECK(p.at(5)[kNegativeToken] == 1);
    for (std::size_t k = kReserved0; k <= kReserved5; ++k) CHECK(p.at(2)[k] == 0);
  }

  TEST_CASE("tag codes") {
    CHECK(tag_code("P") >= kUnknownTagBuckets);
    CHECK(tag_code("P") != tag_code("DIV"));
    CHECK(tag_code("MY-WIDGET") < kUnknownTagBuckets);
    CHECK(tag_code("MY-WIDGET") >= 0);
    CHECK(tag_code("MY-WIDGET") == tag_code("MY-WIDGET"));
  }

  TEST_CASE("depth features") {
    Page p("<iframe><div><p>deep</p></div></iframe>");
    auto f = p.at(4);
    CHECK(f[kDepth] == 4);
    CHECK(f[kIframeDepth] == 1);
  }

  TEST_CASE("non-candidates are rejected") {
    Page p("<div style=\"display:none\"><p>x</p></div><p>y</p>");
    for (NodeId id : {0u, 1u, 2u, 3u, 99u}) {
      CAPTURE(id);
      try {
        p.at(id);
        FAIL("accepted");
      } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::NotACandidate);
      }
    }
    CHECK_NOTHROW(p.at(4));
  }

  TEST_CASE("batch extraction") {
    Page empty("<body></body>");
    auto none = extract_all(empty.doc, empty.tree);
    CHECK(none.node_ids.empty());
    CHECK(none.matrix.rows() == 0);

    Page p("<p>a</p><p>b</p><img src=x><p>c</p>");
    auto all = extract_all(p.doc, p.tree);
    CHECK(all.node_ids == std::vector<NodeId>{2, 3, 4, 5});
    CHECK(all.matrix.rows() == 4);
    CHECK(all.matrix.cols() == kFeatureCount);
    auto row = all.matrix.row(2);
    auto single = p.at(4);
    CHECK(std::equal(row.begin(), row.end(), single.begin()));
  }

  TEST_CASE("csv export") {
    Page p("<p>a b</p><img src=x width=10 height=10>");
    std::string csv = to_csv(extract_all(p.doc, p.tree));
    std::istringstream in(csv);
    std::string line;
    std::getline(in, line);
    CHECK(line.starts_with("node_id,x_rel,y_rel,"));
    CHECK(line.ends_with(",is_image,alt_length,has_src"));
    int rows = 0;
    while (std::getline(in, line)) {
      ++rows;
      CHECK(std::count(line.begin(), line.end(), ',') == static_cast<long>(kFeatureCount));
    }
    CHECK(rows == 2);
    for (double v : {0.1, 1.0 / 3, 1e-300, 123456789.0, 0.0}) CHECK(std::stod(format_double(v)) == v);
  }

  TEST_CASE("property: finite, bounded, deterministic features on random pages") {
    gen::Rng rng(4242);
    for (int i = 0; i < 300; ++i) {
      auto html = gen::random_html(rng, rng.uniform(0, 80));
      Page p(html, {rng.uniform(64, 1920), 800});
      auto par = extract_all(p.doc, p.tree);
      auto ser = extract_all_serial(p.doc, p.tree);
      REQUIRE(par.node_ids == ser.node_ids);
      REQUIRE(par.matrix == ser.matrix);
      REQUIRE(par.node_ids == layout::visible_candidates(p.tree, p.doc));
      std::size_t images = 0;
      for (NodeId id : par.node_ids) images += p.doc.node(id).tag == "IMG";
      double image_sum = 0;
      for (std::size_t r = 0; r < par.matrix.rows(); ++r) {
        auto row = par.matrix.row(r);
        for (double v : row) REQUIRE(std::isfinite(v));
        for (std::size_t k : {kXRel, kYRel, kWRel, kHRel, kAreaRel, kCenterOffset, kLinkDensity}) {
          REQUIRE(row[k] >= 0);
          REQUIRE(row[k] <= 1);
        }
        REQUIRE((row[kIsImage] == 1) == (p.doc.node(par.node_ids[r]).tag == "IMG"));
        image_sum += row[kIsImage];
        auto stats = text_stats(dom::element_text(p.doc, par.node_ids[r]));
        if (stats.chars <= kWrapWidth) REQUIRE(row[kTextDensity] == row[kWordCount]);
      }
      REQUIRE(image_sum == static_cast<double>(images));
    }
  }
}
