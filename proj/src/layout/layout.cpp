#include "pagesift/layout.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <optional>
#include <string>

#include "pagesift/error.hpp"

namespace pagesift::layout {

namespace {

using dom::Child;
using dom::Document;
using dom::ElementNode;
using dom::TextChunk;

struct Length {
  double value = 0;
  bool percent = false;

  double resolve(double reference) const { return percent ? value * reference / 100.0 : value; }
};

std::string trim_lower(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  std::string out(s.substr(b, e - b));
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

std::optional<Length> parse_length(std::string_view text) {
  std::string s = trim_lower(text);
  Length length;
  if (s.ends_with("px")) {
    s.resize(s.size() - 2);
  } else if (s.ends_with('%')) {
    s.pop_back();
    length.percent = true;
  }
  if (s.empty()) return std::nullopt;
  const char* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, length.value);
  if (ec != std::errc{} || ptr != end || !std::isfinite(length.value) || length.value < 0) return std::nullopt;
  return length;
}

// The subset of inline `style` the engine honors.
struct InlineStyle {
  std::optional<Display> display;
  std::optional<Length> width;
  std::optional<Length> height;
};

InlineStyle parse_style(const ElementNode& element) {
  InlineStyle out;
  const std::string* style = element.attribute("style");
  if (!style) return out;
  std::string_view rest = *style;
  while (!rest.empty()) {
    auto semi = rest.find(';');
    std::string_view decl = rest.substr(0, semi);
    rest = semi == std::string_view::npos ? std::string_view{} : rest.substr(semi + 1);
    auto colon = decl.find(':');
    if (colon == std::string_view::npos) continue;
    std::string prop = trim_lower(decl.substr(0, colon));
    std::string value = trim_lower(decl.substr(colon + 1));
    if (auto bang = value.find('!'); bang != std::string::npos) value = trim_lower(value.substr(0, bang));
    if (prop == "display") {
      if (value == "none") out.display = Display::None;
      else if (value == "inline" || value == "inline-block" || value == "inline-flex") out.display = Display::Inline;
      else if (!value.empty()) out.display = Display::Block;
    } else if (prop == "width") {
      out.width = parse_length(value);
    } else if (prop == "height") {
      out.height = parse_length(value);
    }
  }
  return out;
}

struct Rect {
  double left = 0, top = 0, right = 0, bottom = 0;
  bool empty = true;

  void extend(double l, double t, double r, double b) {
    if (empty) {
      left = l, top = t, right = r, bottom = b;
      empty = false;
      return;
    }
    left = std::min(left, l);
    top = std::min(top, t);
    right = std::max(right, r);
    bottom = std::max(bottom, b);
  }
};

}  // namespace

namespace style {

double font_size(std::string_view tag, double inherited) {
  if (tag == "H1") return 32;
  if (tag == "H2") return 24;
  if (tag == "H3") return 19;
  if (tag == "H4") return 16;
  if (tag == "H5") return 13;
  if (tag == "H6") return 11;
  return inherited;
}

Margins margins(std::string_view tag) {
  if (tag == "BODY") return {kBodyMargin, kBodyMargin, kBodyMargin, kBodyMargin};
  if (tag == "UL" || tag == "OL" || tag == "DD" || tag == "MENU") return {0, 0, 0, kListIndent};
  if (tag == "BLOCKQUOTE") return {0, kListIndent, 0, kListIndent};
  return {};
}

}  // namespace style

void validate(const Viewport& vp) {
  if (vp.width < Viewport::kMinWidth || vp.height <= 0) {
    throw Error(ErrorKind::InvalidViewport,
                std::to_string(vp.width) + "x" + std::to_string(vp.height) + " (minimum width " +
                    std::to_string(Viewport::kMinWidth) + ")");
  }
}

Viewport parse_viewport(std::string_view text) {
  auto x = text.find_first_of("xX");
  Viewport vp{0, 0};
  if (x != std::string_view::npos) {
    auto parse_int = [](std::string_view s, int& out) {
      auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
      return ec == std::errc{} && ptr == s.data() + s.size() && !s.empty();
    };
    if (parse_int(text.substr(0, x), vp.width) && parse_int(text.substr(x + 1), vp.height)) {
      validate(vp);
      return vp;
    }
  }
  throw Error(ErrorKind::InvalidViewport, "expected WxH, got '" + std::string(text) + "'");
}

class LayoutEngine {
 public:
  LayoutEngine(const Document& doc, const Viewport& vp) : doc_(doc) {
    tree_.viewport_ = vp;
    tree_.boxes_.resize(doc.size());
    tree_.owned_chars_.assign(doc.size(), 0);
    for (NodeId id = 0; id < doc.size(); ++id) tree_.boxes_[id].node_id = id;
    resolve_display();
  }

  LayoutTree run() && {
    double width = tree_.viewport_.width;
    layout_block(0, 0.0, 0.0, width, style::kBaseFontSize);
    return std::move(tree_);
  }

 private:
  struct RunState {
    double x0 = 0;
    double width = 0;
    double y = 0;
    double line_height = 0;
    double char_width = 0;
    long chars_per_line = 1;
    long col = 0;
    bool pending_space = false;
    std::uint32_t glyphs = 0;
    std::vector<std::pair<NodeId, Rect>> open;
  };

  void resolve_display() {
    display_.assign(doc_.size(), Display::Inline);
    styles_.resize(doc_.size());
    for (std::size_t i = doc_.size(); i-- > 0;) {
      const ElementNode& e = doc_.node(static_cast<NodeId>(i));
      styles_[i] = parse_style(e);
      std::optional<Display> known = default_display(e.tag);
      std::optional<Display> declared = styles_[i].display;
      if (e.has_attribute("hidden") || declared == Display::None ||
          (!declared && known == Display::None)) {
        display_[i] = Display::None;
        continue;
      }
      // Images are always replaced inline boxes.
      Display d = e.tag == "IMG" ? Display::Inline : declared.value_or(known.value_or(Display::Inline));
      if (d == Display::Inline && !is_void_element(e.tag)) {
        for (const Child& child : e.children) {
          const NodeId* c = std::get_if<NodeId>(&child);
          if (c && display_[*c] == Display::Block) {
            d = Display::Block;
            break;
          }
        }
      }
      display_[i] = d;
    }
    display_[0] = Display::Block;
  }

  void hide_subtree(NodeId id) {
    for (NodeId k = id; k < id + 1 + doc_.descendant_count(id); ++k) {
      LayoutBox& b = tree_.boxes_[k];
      b.x = b.y = b.width = b.height = 0;
      b.visible = false;
      b.display = Display::None;
    }
  }

  // Lays out a block box and returns its height.
  double layout_block(NodeId id, double x, double y, double width, double font_size) {
    const ElementNode& e = doc_.node(id);
    LayoutBox& own = tree_.boxes_[id];
    own.x = x;
    own.y = y;
    own.width = width;
    own.visible = true;
    own.display = Display::Block;

    double cursor = y;
    std::vector<const Child*> run;
    auto flush = [&] {
      if (run.empty()) return;
      cursor += layout_run(run, id, x, cursor, width, font_size);
      run.clear();
    };
    for (const Child& child : e.children) {
      const NodeId* child_id = std::get_if<NodeId>(&child);
      if (!child_id) {
        run.push_back(&child);
        continue;
      }
      Display d = display_[*child_id];
      if (d == Display::None) {
        hide_subtree(*child_id);
      } else if (d == Display::Block) {
        flush();
        const ElementNode& c = doc_.node(*child_id);
        style::Margins m = style::margins(c.tag);
        // Horizontal margins never push a child outside its parent.
        m.left = std::min(m.left, width);
        double available = std::max(0.0, width - m.left - m.right);
        double child_width = available;
        if (const auto& w = styles_[*child_id].width) child_width = std::min(available, w->resolve(available));
        cursor += m.top;
        cursor += layout_block(*child_id, x + m.left, cursor, child_width, style::font_size(c.tag, font_size));
        cursor += m.bottom;
      } else {
        run.push_back(&child);
      }
    }
    flush();

    double height = cursor - y;
    if (const auto& h = styles_[id].height; h && !h->percent) height = std::max(height, h->value);
    tree_.boxes_[id].height = height;
    return height;
  }

  double layout_run(const std::vector<const Child*>& items, NodeId owner, double x, double y,
                    double width, double font_size) {
    RunState s;
    s.x0 = x;
    s.width = width;
    s.y = y;
    s.line_height = style::kLineHeightFactor * font_size;
    s.char_width = style::kCharWidthFactor * font_size;
    s.chars_per_line = std::max(1L, static_cast<long>(std::floor(width / s.char_width)));
    for (const Child* item : items) place(*item, s);
    if (s.col > 0) s.y += s.line_height;
    tree_.owned_chars_[owner] += s.glyphs;
    return s.y - y;
  }

  void place_glyph(RunState& s, bool counts) {
    if (s.col >= s.chars_per_line) {
      s.y += s.line_height;
      s.col = 0;
    }
    double gx = s.x0 + static_cast<double>(s.col) * s.char_width;
    for (auto& [id, rect] : s.open) rect.extend(gx, s.y, gx + s.char_width, s.y + s.line_height);
    ++s.col;
    if (counts) ++s.glyphs;
  }

  void break_line(RunState& s) {
    if (s.col > 0) {
      s.y += s.line_height;
      s.col = 0;
    }
    s.pending_space = false;
  }

  void place(const Child& child, RunState& s) {
    if (const auto* chunk = std::get_if<TextChunk>(&child)) {
      for (std::size_t i = 0; i < chunk->text.size(); ++i) {
        char c = chunk->text[i];
        if ((static_cast<unsigned char>(c) & 0xC0) == 0x80) continue;
        if (c == ' ') {
          s.pending_space = s.col > 0;
          continue;
        }
        if (s.pending_space) place_glyph(s, false);
        s.pending_space = false;
        place_glyph(s, true);
      }
      return;
    }
    NodeId id = std::get<NodeId>(child);
    if (display_[id] == Display::None) {
      hide_subtree(id);
      return;
    }
    const ElementNode& e = doc_.node(id);
    LayoutBox& own = tree_.boxes_[id];
    own.visible = true;
    own.display = Display::Inline;

    if (e.tag == "IMG") {
      auto [w, h] = image_size(id, s.width);
      break_line(s);
      for (auto& [open_id, rect] : s.open) rect.extend(s.x0, s.y, s.x0 + w, s.y + h);
      own.x = s.x0;
      own.y = s.y;
      own.width = w;
      own.height = h;
      s.y += h;
      return;
    }
    if (e.tag == "BR") {
      own.x = s.x0 + std::min(static_cast<double>(s.col) * s.char_width, s.width);
      own.y = s.y;
      own.width = own.height = 0;
      if (s.col == 0) s.y += s.line_height;
      break_line(s);
      return;
    }

    // A space before the element belongs to the enclosing run.
    if (s.pending_space) place_glyph(s, false);
    s.pending_space = false;
    double start_x = s.x0 + std::min(static_cast<double>(s.col) * s.char_width, s.width);
    double start_y = s.y;
    s.open.emplace_back(id, Rect{});
    for (const Child& c : e.children) place(c, s);
    Rect rect = s.open.back().second;
    s.open.pop_back();
    LayoutBox& box = tree_.boxes_[id];
    if (rect.empty) {
      box.x = start_x;
      box.y = start_y;
      box.width = box.height = 0;
    } else {
      box.x = rect.left;
      box.y = rect.top;
      box.width = rect.right - rect.left;
      box.height = rect.bottom - rect.top;
    }
  }

  std::pair<double, double> image_size(NodeId id, double content_width) const {
    const ElementNode& e = doc_.node(id);
    auto from_attr = [&](std::string_view name) -> std::optional<Length> {
      const std::string* v = e.attribute(name);
      return v ? parse_length(*v) : std::nullopt;
    };
    std::optional<Length> w = from_attr("width");
    std::optional<Length> h = from_attr("height");
    if (!w) w = styles_[id].width;
    if (!h) h = styles_[id].height;
    double width = w ? w->resolve(content_width) : style::kDefaultImageSize;
    double height = (h && !h->percent) ? h->value : style::kDefaultImageSize;
    return {std::min(width, content_width), height};
  }

  const Document& doc_;
  LayoutTree tree_;
  std::vector<Display> display_;
  std::vector<InlineStyle> styles_;
};

LayoutTree compute_layout(const Document& doc, const Viewport& vp) {
  validate(vp);
  return LayoutEngine(doc, vp).run();
}

bool is_candidate(const LayoutTree& layout, const Document& doc, NodeId id) {
  if (!doc.contains(id) || id >= layout.size()) return false;
  const LayoutBox& b = layout.box(id);
  if (!b.visible) return false;
  if (doc.node(id).tag == "IMG") return true;
  return b.display == Display::Block && layout.owned_chars(id) > 0;
}

std::vector<NodeId> visible_candidates(const LayoutTree& layout, const Document& doc) {
  std::vector<NodeId> out;
  for (NodeId id = 0; id < doc.size(); ++id) {
    if (is_candidate(layout, doc, id)) out.push_back(id);
  }
  return out;
}

}  // namespace pagesift::layout
