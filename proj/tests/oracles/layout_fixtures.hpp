#pragma once

// Golden boxes computed by hand from the style table: body margin 8, list and
// blockquote indent 40, line height 1.25 x font, glyph width 0.5 x font,
// images 150 x 150 unless sized.

#include <string>
#include <vector>

#include "pagesift/layout.hpp"

namespace oracle {

struct ExpectedBox {
  pagesift::NodeId id;
  std::string tag;
  double x, y, w, h;
  bool visible;
};

struct LayoutFixture {
  std::string name;
  std::string html;
  pagesift::layout::Viewport viewport;
  std::vector<ExpectedBox> boxes;  // every element, in id order
  std::vector<pagesift::NodeId> candidates;
};

inline std::vector<LayoutFixture> layout_fixtures() {
  return {
      {"single paragraph",
       "<body><p>hi</p></body>",
       {1280, 800},
       {{0, "HTML", 0, 0, 1280, 36, true}, {1, "BODY", 8, 8, 1264, 20, true}, {2, "P", 8, 8, 1264, 20, true}},
       {2}},
      {"image attributes",
       "<body><img width=\"600\" height=\"400\"></body>",
       {1280, 800},
       {{0, "HTML", 0, 0, 1280, 416, true}, {1, "BODY", 8, 8, 1264, 400, true}, {2, "IMG", 8, 8, 600, 400, true}},
       {2}},
      {"display none subtree",
       "<body><div style=\"display:none\"><p>a</p><img src=\"x.png\"></div><p>b</p></body>",
       {1280, 800},
       {{0, "HTML", 0, 0, 1280, 36, true},
        {1, "BODY", 8, 8, 1264, 20, true},
        {2, "DIV", 0, 0, 0, 0, false},
        {3, "P", 0, 0, 0, 0, false},
        {4, "IMG", 0, 0, 0, 0, false},
        {5, "P", 8, 8, 1264, 20, true}},
       {5}},
      {"nested iframe",
       "<body><iframe><div><iframe><img width=\"100\" height=\"50\"></iframe></div></iframe></body>",
       {1280, 800},
       {{0, "HTML", 0, 0, 1280, 66, true},
        {1, "BODY", 8, 8, 1264, 50, true},
        {2, "IFRAME", 8, 8, 1264, 50, true},
        {3, "DIV", 8, 8, 1264, 50, true},
        {4, "IFRAME", 8, 8, 1264, 50, true},
        {5, "IMG", 8, 8, 100, 50, true}},
       {5}},
      // 184 px content: H1 wraps at 11 glyphs of 16 px, P at 23 glyphs of 8 px.
      {"wrapping at a narrow viewport",
       "<body><h1>Headline text</h1><p>aaaaaaaaaa aaaaaaaaaa aaaaaaaaaa</p></body>",
       {200, 600},
       {{0, "HTML", 0, 0, 200, 136, true},
        {1, "BODY", 8, 8, 184, 120, true},
        {2, "H1", 8, 8, 184, 80, true},
        {3, "P", 8, 88, 184, 40, true}},
       {2, 3}},
      {"list and blockquote indents",
       "<body><ul><li>one</li><li>two</li></ul><blockquote>q</blockquote></body>",
       {1280, 800},
       {{0, "HTML", 0, 0, 1280, 76, true},
        {1, "BODY", 8, 8, 1264, 60, true},
        {2, "UL", 48, 8, 1224, 40, true},
        {3, "LI", 48, 8, 1224, 20, true},
        {4, "LI", 48, 28, 1224, 20, true},
        {5, "BLOCKQUOTE", 48, 48, 1184, 20, true}},
       {3, 4, 5}},
      {"inline style width and height",
       "<body><div style=\"width:50%;height:100px\"><p>x</p></div><p>y</p></body>",
       {1280, 800},
       {{0, "HTML", 0, 0, 1280, 136, true},
        {1, "BODY", 8, 8, 1264, 120, true},
        {2, "DIV", 8, 8, 632, 100, true},
        {3, "P", 8, 8, 632, 20, true},
        {4, "P", 8, 108, 1264, 20, true}},
       {3, 4}},
      {"inline anchor box",
       "<body><p>ab <a href=\"#\">cd</a></p></body>",
       {1280, 800},
       {{0, "HTML", 0, 0, 1280, 36, true},
        {1, "BODY", 8, 8, 1264, 20, true},
        {2, "P", 8, 8, 1264, 20, true},
        {3, "A", 32, 8, 16, 20, true}},
       {2}},
      {"image in text with percent width",
       "<body><p>text<img style=\"width:25%\"></p></body>",
       {1280, 800},
       {{0, "HTML", 0, 0, 1280, 186, true},
        {1, "BODY", 8, 8, 1264, 170, true},
        {2, "P", 8, 8, 1264, 170, true},
        {3, "IMG", 8, 28, 316, 150, true}},
       {2, 3}},
      {"hidden attribute, line break, promoted custom element",
       "<body><custom><div>in</div></custom><span hidden>gone</span><p>a<br>b</p></body>",
       {1280, 800},
       {{0, "HTML", 0, 0, 1280, 76, true},
        {1, "BODY", 8, 8, 1264, 60, true},
        {2, "CUSTOM", 8, 8, 1264, 20, true},
        {3, "DIV", 8, 8, 1264, 20, true},
        {4, "SPAN", 0, 0, 0, 0, false},
        {5, "P", 8, 28, 1264, 40, true},
        {6, "BR", 16, 28, 0, 0, true}},
       {3, 5}},
  };
}

}  // namespace oracle
