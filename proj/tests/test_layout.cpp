#include <doctest.h>

#include "oracles/layout_fixtures.hpp"
#include "pagesift/dom.hpp"
#include "pagesift/error.hpp"
#include "pagesift/layout.hpp"
#include "support/generators.hpp"

using namespace pagesift;

TEST_SUITE("layout") {
  TEST_CASE("golden fixtures") {
    for (const auto& fx : oracle::layout_fixtures()) {
      CAPTURE(fx.name);
      auto doc = dom::parse_document(fx.html);
      auto tree = layout::compute_layout(doc, fx.viewport);
      REQUIRE(tree.size() == fx.boxes.size());
      for (const auto& e : fx.boxes) {
        CAPTURE(e.id);
        const auto& b = tree.box(e.id);
        CHECK(doc.node(e.id).tag == e.tag);
        CHECK(b.x == e.x);
        CHECK(b.y == e.y);
        CHECK(b.width == e.w);
        CHECK(b.height == e.h);
        CHECK(b.visible == e.visible);
      }
      CHECK(layout::visible_candidates(tree, doc) == fx.candidates);
      CHECK(tree.page_height() == fx.boxes.front().h);
    }
  }

  TEST_CASE("viewport parsing") {
    auto vp = layout::parse_viewport("1024x768");
    CHECK(vp.width == 1024);
    CHECK(vp.height == 768);
    for (const char* bad : {"", "1024", "x768", "1024x", "10x10", "1024x0", "-5x5", "axb", "1024x768x2"}) {
      CAPTURE(bad);
      try {
        layout::parse_viewport(bad);
        FAIL("accepted");
      } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::InvalidViewport);
      }
    }
    auto doc = dom::parse_document("<p>x</p>");
    CHECK_THROWS_AS(layout::compute_layout(doc, {63, 800}), Error);
    CHECK_NOTHROW(layout::compute_layout(doc, {64, 1}));
  }

  TEST_CASE("candidates: paragraphs and an image") {
    auto doc = dom::parse_document("<p>a</p><p>b</p><div><img src=x></div><p>c</p>");
    auto tree = layout::compute_layout(doc, {});
    CHECK(layout::visible_candidates(tree, doc) == std::vector<NodeId>{2, 3, 5, 6});
  }

  TEST_CASE("candidates: paragraph inside hidden div is excluded") {
    auto doc = dom::parse_document("<div style='display: none !important'><p>gone</p></div><p>kept</p>");
    auto tree = layout::compute_layout(doc, {});
    CHECK(layout::visible_candidates(tree, doc) == std::vector<NodeId>{4});
  }

  TEST_CASE("candidates: image five divs deep inside an iframe") {
    auto doc = dom::parse_document(
        "<iframe src=ad.html><div><div><div><div><div><img src=a.png width=300 height=250></div></div></div></div></div>"
        "</iframe>");
    auto tree = layout::compute_layout(doc, {});
    auto c = layout::visible_candidates(tree, doc);
    REQUIRE(c.size() == 1);
    CHECK(doc.node(c[0]).tag == "IMG");
    CHECK(doc.node(c[0]).iframe_depth == 1);
    CHECK(tree.box(c[0]).width == 300);
  }

  TEST_CASE("candidates: text in an inline child counts as owned") {
    auto doc = dom::parse_document("<p><a href=#>link only</a></p><div><p>nested</p></div>");
    auto tree = layout::compute_layout(doc, {});
    CHECK(layout::visible_candidates(tree, doc) == std::vector<NodeId>{2, 5});
  }

  TEST_CASE("image sizing rules") {
    auto doc = dom::parse_document(
        "<img><img width=5000 height=10><img style='width:10px;height:20px'><img width=50% height=30px>"
        "<img style='display:block' width=40 height=40>");
    auto tree = layout::compute_layout(doc, {});
    CHECK(tree.box(2).width == 150);
    CHECK(tree.box(2).height == 150);
    CHECK(tree.box(3).width == 1264);  // clamped to the content box
    CHECK(tree.box(3).height == 10);
    CHECK(tree.box(4).width == 10);
    CHECK(tree.box(4).height == 20);
    CHECK(tree.box(5).width == 632);
    CHECK(tree.box(5).height == 30);
    CHECK(tree.box(6).width == 40);
    CHECK(tree.box(6).height == 40);
  }

  TEST_CASE("heading font sizes") {
    CHECK(layout::style::font_size("H1", 16) == 32);
    CHECK(layout::style::font_size("H6", 16) == 11);
    CHECK(layout::style::font_size("P", 19) == 19);
  }

  TEST_CASE("property: geometry invariants on random pages") {
    gen::Rng rng(77);
    for (int i = 0; i < 300; ++i) {
      auto doc = dom::parse_document(gen::random_html(rng, rng.uniform(0, 80)));
      layout::Viewport vp{rng.uniform(64, 2000), rng.uniform(1, 1200)};
      auto tree = layout::compute_layout(doc, vp);
      REQUIRE(tree.size() == doc.size());
      auto again = layout::compute_layout(doc, vp);
      for (NodeId id = 0; id < doc.size(); ++id) {
        const auto& b = tree.box(id);
        const auto& c = again.box(id);
        REQUIRE((b.x == c.x && b.y == c.y && b.width == c.width && b.height == c.height && b.visible == c.visible));
        REQUIRE(b.x >= 0);
        REQUIRE(b.y >= 0);
        REQUIRE(b.width >= 0);
        REQUIRE(b.height >= 0);
        if (!b.visible) REQUIRE((b.width == 0 && b.height == 0));
      }
      for (NodeId id = 0; id < doc.size(); ++id) {
        const auto& parent = tree.box(id);
        if (!parent.visible || parent.display != Display::Block) continue;
        double prev_y = -1;
        double child_heights = 0;
        for (NodeId child : doc.element_children(id)) {
          const auto& b = tree.box(child);
          if (!b.visible || b.display != Display::Block) continue;
          REQUIRE(b.x >= parent.x);
          REQUIRE(b.x + b.width <= parent.x + parent.width);
          REQUIRE(b.y >= prev_y);
          prev_y = b.y;
          child_heights += b.height;
        }
        REQUIRE(parent.height >= child_heights);
      }
      for (NodeId id : layout::visible_candidates(tree, doc)) {
        REQUIRE(tree.box(id).visible);
        for (auto p = doc.node(id).parent; p; p = doc.node(*p).parent) REQUIRE(tree.box(*p).visible);
      }
    }
  }
}
