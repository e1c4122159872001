#include "pagesift/tags.hpp"

#include <algorithm>
#include <array>
#include <utility>

namespace pagesift {
namespace {

struct TagInfo {
  std::string_view tag;
  Display display;
};

// The order of this table is frozen: feature vectors encode tags by index.
constexpr std::array kTags = {
    TagInfo{"HTML", Display::Block},       TagInfo{"BODY", Display::Block},
    TagInfo{"HEAD", Display::None},        TagInfo{"TITLE", Display::None},
    TagInfo{"META", Display::None},        TagInfo{"LINK", Display::None},
    TagInfo{"BASE", Display::None},        TagInfo{"SCRIPT", Display::None},
    TagInfo{"STYLE", Display::None},       TagInfo{"NOSCRIPT", Display::None},
    TagInfo{"TEMPLATE", Display::None},    TagInfo{"DIV", Display::Block},
    TagInfo{"P", Display::Block},          TagInfo{"H1", Display::Block},
    TagInfo{"H2", Display::Block},         TagInfo{"H3", Display::Block},
    TagInfo{"H4", Display::Block},         TagInfo{"H5", Display::Block},
    TagInfo{"H6", Display::Block},         TagInfo{"UL", Display::Block},
    TagInfo{"OL", Display::Block},         TagInfo{"LI", Display::Block},
    TagInfo{"DL", Display::Block},         TagInfo{"DT", Display::Block},
    TagInfo{"DD", Display::Block},         TagInfo{"TABLE", Display::Block},
    TagInfo{"THEAD", Display::Block},      TagInfo{"TBODY", Display::Block},
    TagInfo{"TFOOT", Display::Block},      TagInfo{"TR", Display::Block},
    TagInfo{"TD", Display::Block},         TagInfo{"TH", Display::Block},
    TagInfo{"CAPTION", Display::Block},    TagInfo{"SECTION", Display::Block},
    TagInfo{"ARTICLE", Display::Block},    TagInfo{"ASIDE", Display::Block},
    TagInfo{"HEADER", Display::Block},     TagInfo{"FOOTER", Display::Block},
    TagInfo{"NAV", Display::Block},        TagInfo{"MAIN", Display::Block},
    TagInfo{"FIGURE", Display::Block},     TagInfo{"FIGCAPTION", Display::Block},
    TagInfo{"BLOCKQUOTE", Display::Block}, TagInfo{"PRE", Display::Block},
    TagInfo{"FORM", Display::Block},       TagInfo{"FIELDSET", Display::Block},
    TagInfo{"LEGEND", Display::Block},     TagInfo{"ADDRESS", Display::Block},
    TagInfo{"HR", Display::Block},         TagInfo{"CENTER", Display::Block},
    TagInfo{"IFRAME", Display::Block},     TagInfo{"DETAILS", Display::Block},
    TagInfo{"SUMMARY", Display::Block},    TagInfo{"MENU", Display::Block},
    TagInfo{"A", Display::Inline},         TagInfo{"SPAN", Display::Inline},
    TagInfo{"B", Display::Inline},         TagInfo{"I", Display::Inline},
    TagInfo{"EM", Display::Inline},        TagInfo{"STRONG", Display::Inline},
    TagInfo{"U", Display::Inline},         TagInfo{"S", Display::Inline},
    TagInfo{"SMALL", Display::Inline},     TagInfo{"BIG", Display::Inline},
    TagInfo{"CODE", Display::Inline},      TagInfo{"ABBR", Display::Inline},
    TagInfo{"CITE", Display::Inline},      TagInfo{"Q", Display::Inline},
    TagInfo{"SUB", Display::Inline},       TagInfo{"SUP", Display::Inline},
    TagInfo{"TIME", Display::Inline},      TagInfo{"LABEL", Display::Inline},
    TagInfo{"FONT", Display::Inline},      TagInfo{"MARK", Display::Inline},
    TagInfo{"STRIKE", Display::Inline},    TagInfo{"VAR", Display::Inline},
    TagInfo{"KBD", Display::Inline},       TagInfo{"SAMP", Display::Inline},
    TagInfo{"DFN", Display::Inline},       TagInfo{"BR", Display::Inline},
    TagInfo{"WBR", Display::Inline},       TagInfo{"IMG", Display::Inline},
    TagInfo{"INPUT", Display::Inline},     TagInfo{"BUTTON", Display::Inline},
    TagInfo{"SELECT", Display::Inline},    TagInfo{"OPTION", Display::Inline},
    TagInfo{"TEXTAREA", Display::Inline},  TagInfo{"PICTURE", Display::Inline},
    TagInfo{"SOURCE", Display::None},      TagInfo{"TRACK", Display::None},
    TagInfo{"PARAM", Display::None},       TagInfo{"AREA", Display::None},
    TagInfo{"COL", Display::None},         TagInfo{"COLGROUP", Display::None},
    TagInfo{"EMBED", Display::Inline},     TagInfo{"OBJECT", Display::Inline},
    TagInfo{"VIDEO", Display::Inline},     TagInfo{"AUDIO", Display::Inline},
    TagInfo{"CANVAS", Display::Inline},    TagInfo{"SVG", Display::Inline},
};

constexpr std::array<std::string_view, 15> kVoid = {
    "AREA", "BASE", "BR", "COL", "EMBED", "HR", "IMG", "INPUT",
    "KEYGEN", "LINK", "META", "PARAM", "SOURCE", "TRACK", "WBR"};

}  // namespace

std::optional<int> known_tag_index(std::string_view upper_tag) {
  for (std::size_t i = 0; i < kTags.size(); ++i) {
    if (kTags[i].tag == upper_tag) return static_cast<int>(i);
  }
  return std::nullopt;
}

std::optional<Display> default_display(std::string_view upper_tag) {
  if (auto index = known_tag_index(upper_tag)) return kTags[*index].display;
  return std::nullopt;
}

bool is_void_element(std::string_view upper_tag) {
  return std::find(kVoid.begin(), kVoid.end(), upper_tag) != kVoid.end();
}

}  // namespace pagesift
