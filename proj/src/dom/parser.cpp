#include <span>
#include <algorithm>
#include <array>
#include <cstdint>
#include <initializer_list>
#include <string>
#include <string_view>
#include <utility>

#include "pagesift/dom.hpp"
#include "pagesift/error.hpp"
#include "pagesift/tags.hpp"

namespace pagesift::dom {

namespace {

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f'; }
bool is_alpha(char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z'); }
char to_upper(char c) { return (c >= 'a' && c <= 'z') ? static_cast<char>(c - 'a' + 'A') : c; }
char to_lower(char c) { return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c; }

bool in(std::string_view tag, std::span<const std::string_view> set) {
  return std::find(set.begin(), set.end(), tag) != set.end();
}
bool in(std::string_view tag, std::initializer_list<std::string_view> set) {
  return in(tag, std::span<const std::string_view>(set.begin(), set.size()));
}

void append_utf8(std::string& out, std::uint32_t cp) {
  if (cp == 0 || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) cp = 0xFFFD;
  if (cp < 0x80) {
    out += static_cast<char>(cp);
  } else if (cp < 0x800) {
    out += static_cast<char>(0xC0 | (cp >> 6));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else if (cp < 0x10000) {
    out += static_cast<char>(0xE0 | (cp >> 12));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else {
    out += static_cast<char>(0xF0 | (cp >> 18));
    out += static_cast<char>(0x80 | ((cp >> 12) & 0x3F));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  }
}

struct NamedEntity {
  std::string_view name;
  std::uint32_t code_point;
  bool legacy;  // recognized without a trailing ';'
};

// &nbsp; decodes to a plain space: text statistics treat it as a separator.
constexpr std::array kEntities = {
    NamedEntity{"amp", '&', true},      NamedEntity{"lt", '<', true},
    NamedEntity{"gt", '>', true},       NamedEntity{"quot", '"', true},
    NamedEntity{"nbsp", ' ', true},     NamedEntity{"apos", '\'', false},
    NamedEntity{"copy", 0xA9, true},    NamedEntity{"reg", 0xAE, true},
    NamedEntity{"trade", 0x2122, false}, NamedEntity{"mdash", 0x2014, false},
    NamedEntity{"ndash", 0x2013, false}, NamedEntity{"hellip", 0x2026, false},
    NamedEntity{"lsquo", 0x2018, false}, NamedEntity{"rsquo", 0x2019, false},
    NamedEntity{"ldquo", 0x201C, false}, NamedEntity{"rdquo", 0x201D, false},
    NamedEntity{"bull", 0x2022, false},  NamedEntity{"middot", 0xB7, true},
    NamedEntity{"laquo", 0xAB, true},   NamedEntity{"raquo", 0xBB, true},
    NamedEntity{"euro", 0x20AC, false},  NamedEntity{"pound", 0xA3, true},
};

std::string decode_entities(std::string_view in_text) {
  std::string out;
  out.reserve(in_text.size());
  std::size_t i = 0;
  while (i < in_text.size()) {
    char c = in_text[i];
    if (c != '&') {
      out += c;
      ++i;
      continue;
    }
    std::string_view rest = in_text.substr(i + 1);
    if (!rest.empty() && rest[0] == '#') {
      bool hex = rest.size() > 1 && (rest[1] == 'x' || rest[1] == 'X');
      std::size_t j = hex ? 2 : 1;
      std::uint32_t value = 0;
      std::size_t digits = 0;
      while (j < rest.size()) {
        char d = rest[j];
        int v = -1;
        if (d >= '0' && d <= '9') v = d - '0';
        else if (hex && d >= 'a' && d <= 'f') v = d - 'a' + 10;
        else if (hex && d >= 'A' && d <= 'F') v = d - 'A' + 10;
        if (v < 0) break;
        if (value < 0x110000) value = value * (hex ? 16 : 10) + static_cast<std::uint32_t>(v);
        ++digits;
        ++j;
      }
      if (digits > 0) {
        append_utf8(out, value);
        if (j < rest.size() && rest[j] == ';') ++j;
        i += 1 + j;
        continue;
      }
    } else {
      bool matched = false;
      for (const auto& entity : kEntities) {
        if (rest.substr(0, entity.name.size()) != entity.name) continue;
        bool semicolon = rest.size() > entity.name.size() && rest[entity.name.size()] == ';';
        if (!semicolon && !entity.legacy) continue;
        append_utf8(out, entity.code_point);
        i += 1 + entity.name.size() + (semicolon ? 1 : 0);
        matched = true;
        break;
      }
      if (matched) continue;
    }
    out += '&';
    ++i;
  }
  return out;
}

// Collapses whitespace runs without trimming.
std::string collapse_whitespace(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  bool pending_space = false;
  for (char c : text) {
    if (is_space(c)) {
      pending_space = true;
      continue;
    }
    if (pending_space) out += ' ';
    pending_space = false;
    out += c;
  }
  if (pending_space) out += ' ';
  return out;
}

constexpr std::string_view kHeadElements[] = {
    "BASE", "LINK", "META", "TITLE", "STYLE", "SCRIPT", "NOSCRIPT", "TEMPLATE"};

constexpr std::string_view kClosesParagraph[] = {
    "ADDRESS", "ARTICLE", "ASIDE", "BLOCKQUOTE", "CENTER", "DETAILS", "DIV", "DL",
    "FIELDSET", "FIGCAPTION", "FIGURE", "FOOTER", "FORM", "H1", "H2", "H3",
    "H4", "H5", "H6", "HEADER", "HR", "MAIN", "MENU", "NAV", "OL", "P",
    "PRE", "SECTION", "SUMMARY", "TABLE", "UL", "LI", "DD", "DT"};

constexpr std::string_view kScopeBoundaries[] = {
    "BUTTON", "TABLE", "TD", "TH", "CAPTION", "OBJECT", "TEMPLATE", "IFRAME"};

// Whitespace-only text under these parents carries no rendering meaning.
constexpr std::string_view kDropsWhitespace[] = {
    "HTML", "HEAD", "TABLE", "THEAD", "TBODY", "TFOOT", "TR", "UL", "OL", "DL", "SELECT"};

bool is_heading(std::string_view tag) { return in(tag, {"H1", "H2", "H3", "H4", "H5", "H6"}); }

}  // namespace

class TreeBuilder {
 public:
  explicit TreeBuilder(const ParseConfig& config) : config_(config) {
    create("HTML", {}, std::nullopt);
  }

  void start_tag(const std::string& tag, std::vector<Attribute> attrs, bool self_closing) {
    if (tag == "HTML") {
      merge_attributes(0, std::move(attrs));
      return;
    }
    if (tag == "HEAD") {
      if (!body_ && !head_ && top() == 0) {
        head_ = create(tag, std::move(attrs), top());
        stack_.push_back(*head_);
      }
      return;
    }
    if (tag == "BODY") {
      if (body_) {
        merge_attributes(*body_, std::move(attrs));
      } else {
        open_body(std::move(attrs));
      }
      return;
    }
    if (!body_ && !in(tag, kHeadElements)) open_body({});

    if (in(tag, kClosesParagraph)) close_in_scope("P", kScopeBoundaries);
    if (tag == "LI") close_in_scope("LI", {"UL", "OL", "MENU", "TABLE", "TD", "TH", "IFRAME"});
    if (tag == "DT" || tag == "DD") close_any_in_scope({"DT", "DD"}, {"DL", "TABLE", "TD", "TH", "IFRAME"});
    if (tag == "TR") close_in_scope("TR", {"TABLE"});
    if (tag == "TD" || tag == "TH") close_any_in_scope({"TD", "TH"}, {"TR", "TABLE"});
    if (in(tag, {"THEAD", "TBODY", "TFOOT"})) close_any_in_scope({"THEAD", "TBODY", "TFOOT"}, {"TABLE"});
    if (tag == "OPTION") close_in_scope("OPTION", {"SELECT"});
    if (tag == "A") close_in_scope("A", kScopeBoundaries);
    if (is_heading(tag) && is_heading(node(top()).tag)) stack_.pop_back();

    NodeId id = create(tag, std::move(attrs), top());
    bool known = default_display(tag).has_value();
    if (is_void_element(tag) || (self_closing && !known)) return;
    stack_.push_back(id);
  }

  void end_tag(const std::string& tag) {
    if (tag == "HTML" || tag == "BODY" || is_void_element(tag)) return;
    if (tag == "HEAD") {
      if (head_ && top() == *head_) stack_.pop_back();
      return;
    }
    if (tag == "P") {
      close_in_scope("P", kScopeBoundaries);
      return;
    }
    for (std::size_t i = stack_.size(); i-- > 1;) {
      const std::string& open = node(stack_[i]).tag;
      if (open == "BODY" || open == "HEAD") break;
      if (open == tag) {
        stack_.resize(i);
        return;
      }
    }
  }

  void text(std::string_view decoded) {
    std::string collapsed = collapse_whitespace(decoded);
    if (collapsed.empty()) return;
    bool whitespace_only = collapsed == " ";
    if (!body_ && (top() == 0 || (head_ && top() == *head_))) {
      if (whitespace_only) return;
      open_body({});
    }
    ElementNode& parent = mutable_node(top());
    if (whitespace_only && in(parent.tag, kDropsWhitespace)) return;
    if (!parent.children.empty()) {
      if (auto* last = std::get_if<TextChunk>(&parent.children.back())) {
        last->text = collapse_whitespace(last->text + collapsed);
        return;
      }
    }
    parent.children.emplace_back(TextChunk{std::move(collapsed)});
  }

  // Body of the raw-text element that is currently open.
  void raw_text(std::string_view content) { mutable_node(top()).raw_text.append(content); }

  const std::string& current_tag() const { return node(top()).tag; }

  Document finish() {
    if (!body_) open_body({});
    auto& nodes = doc_.nodes_;
    doc_.subtree_end_.assign(nodes.size(), 0);
    for (std::size_t i = nodes.size(); i-- > 0;) {
      auto& end = doc_.subtree_end_[i];
      end = std::max<NodeId>(end, static_cast<NodeId>(i + 1));
      if (nodes[i].parent) {
        auto& parent_end = doc_.subtree_end_[*nodes[i].parent];
        parent_end = std::max(parent_end, end);
      }
    }
    return std::move(doc_);
  }

 private:
  NodeId top() const { return stack_.back(); }
  const ElementNode& node(NodeId id) const { return doc_.nodes_[id]; }
  ElementNode& mutable_node(NodeId id) { return doc_.nodes_[id]; }

  NodeId create(const std::string& tag, std::vector<Attribute> attrs, std::optional<NodeId> parent) {
    ElementNode element;
    element.node_id = static_cast<NodeId>(doc_.nodes_.size());
    element.tag = tag;
    element.attributes = std::move(attrs);
    element.parent = parent;
    if (parent) {
      const ElementNode& p = node(*parent);
      element.depth = p.depth + 1;
      element.iframe_depth = p.iframe_depth + (p.tag == "IFRAME" ? 1 : 0);
      if (static_cast<std::size_t>(element.depth) > config_.max_depth) {
        throw Error(ErrorKind::DepthExceeded,
                    "element nesting exceeds " + std::to_string(config_.max_depth));
      }
    }
    NodeId id = element.node_id;
    doc_.nodes_.push_back(std::move(element));
    if (parent) mutable_node(*parent).children.emplace_back(id);
    if (!parent) stack_.push_back(id);
    return id;
  }

  void open_body(std::vector<Attribute> attrs) {
    stack_.resize(1);
    body_ = create("BODY", std::move(attrs), NodeId{0});
    stack_.push_back(*body_);
  }

  void merge_attributes(NodeId id, std::vector<Attribute> attrs) {
    ElementNode& element = mutable_node(id);
    for (auto& attr : attrs) {
      if (!element.has_attribute(attr.name)) element.attributes.push_back(std::move(attr));
    }
  }

  void close_any_in_scope(std::span<const std::string_view> targets, std::span<const std::string_view> boundaries) {
    for (std::size_t i = stack_.size(); i-- > 1;) {
      const std::string& open = node(stack_[i]).tag;
      if (open == "BODY" || open == "HEAD") return;
      if (in(open, targets)) {
        stack_.resize(i);
        return;
      }
      if (in(open, boundaries)) return;
    }
  }

  void close_any_in_scope(std::initializer_list<std::string_view> targets,
                          std::initializer_list<std::string_view> boundaries) {
    close_any_in_scope(std::span(targets.begin(), targets.size()), std::span(boundaries.begin(), boundaries.size()));
  }

  void close_in_scope(std::string_view target, std::span<const std::string_view> boundaries) {
    close_any_in_scope(std::span(&target, 1), boundaries);
  }

  void close_in_scope(std::string_view target, std::initializer_list<std::string_view> boundaries) {
    close_in_scope(target, std::span(boundaries.begin(), boundaries.size()));
  }

  const ParseConfig& config_;
  Document doc_;
  std::vector<NodeId> stack_;
  std::optional<NodeId> head_;
  std::optional<NodeId> body_;
};

namespace {

class Tokenizer {
 public:
  Tokenizer(std::string_view input, TreeBuilder& builder) : in_(input), builder_(builder) {}

  void run() {
    std::size_t text_start = 0;
    while (pos_ < in_.size()) {
      if (in_[pos_] != '<') {
        ++pos_;
        continue;
      }
      std::size_t markup_start = pos_;
      if (!starts_markup()) {
        ++pos_;
        continue;
      }
      flush_text(text_start, markup_start);
      consume_markup();
      text_start = pos_;
    }
    flush_text(text_start, in_.size());
  }

 private:
  bool starts_markup() const {
    std::string_view rest = in_.substr(pos_ + 1);
    if (rest.empty()) return false;
    char c = rest[0];
    return is_alpha(c) || c == '/' || c == '!' || c == '?';
  }

  void flush_text(std::size_t from, std::size_t to) {
    if (to > from) builder_.text(decode_entities(in_.substr(from, to - from)));
  }

  void skip_past(std::string_view terminator) {
    std::size_t end = in_.find(terminator, pos_);
    pos_ = end == std::string_view::npos ? in_.size() : end + terminator.size();
  }

  void consume_markup() {
    std::string_view rest = in_.substr(pos_);
    if (rest.starts_with("<!--")) {
      pos_ += 4;
      skip_past("-->");
      return;
    }
    if (rest[1] == '!' || rest[1] == '?') {
      skip_past(">");
      return;
    }
    if (rest[1] == '/') {
      if (rest.size() > 2 && is_alpha(rest[2])) {
        pos_ += 2;
        std::string name = read_tag_name();
        skip_past(">");
        builder_.end_tag(name);
      } else {
        skip_past(">");
      }
      return;
    }
    ++pos_;
    std::string name = read_tag_name();
    bool self_closing = false;
    std::vector<Attribute> attrs = read_attributes(self_closing);
    builder_.start_tag(name, std::move(attrs), self_closing);
    if (name == "SCRIPT" || name == "STYLE") {
      builder_.raw_text(read_raw_until_end(name));
      builder_.end_tag(name);
    } else if (name == "TITLE" || name == "TEXTAREA") {
      builder_.text(decode_entities(read_raw_until_end(name)));
      builder_.end_tag(name);
    }
  }

  std::string read_tag_name() {
    std::string name;
    while (pos_ < in_.size() && !is_space(in_[pos_]) && in_[pos_] != '/' && in_[pos_] != '>') {
      name += to_upper(in_[pos_]);
      ++pos_;
    }
    return name;
  }

  std::vector<Attribute> read_attributes(bool& self_closing) {
    std::vector<Attribute> attrs;
    while (pos_ < in_.size()) {
      char c = in_[pos_];
      if (is_space(c)) {
        ++pos_;
        continue;
      }
      if (c == '>') {
        ++pos_;
        return attrs;
      }
      if (c == '/') {
        ++pos_;
        if (pos_ < in_.size() && in_[pos_] == '>') {
          self_closing = true;
          ++pos_;
          return attrs;
        }
        continue;
      }
      std::string name;
      name += to_lower(c);
      ++pos_;
      while (pos_ < in_.size()) {
        char n = in_[pos_];
        if (is_space(n) || n == '/' || n == '>' || n == '=') break;
        name += to_lower(n);
        ++pos_;
      }
      while (pos_ < in_.size() && is_space(in_[pos_])) ++pos_;
      std::string value;
      if (pos_ < in_.size() && in_[pos_] == '=') {
        ++pos_;
        while (pos_ < in_.size() && is_space(in_[pos_])) ++pos_;
        if (pos_ < in_.size() && (in_[pos_] == '"' || in_[pos_] == '\'')) {
          char quote = in_[pos_++];
          std::size_t end = in_.find(quote, pos_);
          if (end == std::string_view::npos) end = in_.size();
          value = decode_entities(in_.substr(pos_, end - pos_));
          pos_ = std::min(end + 1, in_.size());
        } else {
          std::size_t start = pos_;
          while (pos_ < in_.size() && !is_space(in_[pos_]) && in_[pos_] != '>') ++pos_;
          value = decode_entities(in_.substr(start, pos_ - start));
        }
      }
      bool duplicate = std::any_of(attrs.begin(), attrs.end(),
                                   [&](const Attribute& a) { return a.name == name; });
      if (!duplicate) attrs.push_back({std::move(name), std::move(value)});
    }
    return attrs;
  }

  // Returns everything up to the matching close tag and leaves pos_ after it.
  std::string_view read_raw_until_end(std::string_view upper_name) {
    std::size_t start = pos_;
    std::size_t search = pos_;
    while (search < in_.size()) {
      std::size_t lt = in_.find("</", search);
      if (lt == std::string_view::npos) break;
      std::size_t name_end = lt + 2 + upper_name.size();
      bool name_matches = name_end <= in_.size();
      for (std::size_t k = 0; name_matches && k < upper_name.size(); ++k) {
        name_matches = to_upper(in_[lt + 2 + k]) == upper_name[k];
      }
      if (name_matches &&
          (name_end == in_.size() || is_space(in_[name_end]) || in_[name_end] == '>' || in_[name_end] == '/')) {
        pos_ = lt;
        skip_past(">");
        return in_.substr(start, lt - start);
      }
      search = lt + 2;
    }
    pos_ = in_.size();
    return in_.substr(start);
  }

  std::string_view in_;
  std::size_t pos_ = 0;
  TreeBuilder& builder_;
};

}  // namespace

std::string sanitize_utf8(std::string_view bytes) {
  std::string out;
  out.reserve(bytes.size());
  std::size_t i = 0;
  auto cont = [&](std::size_t k, unsigned char lo = 0x80, unsigned char hi = 0xBF) {
    if (i + k >= bytes.size()) return false;
    auto b = static_cast<unsigned char>(bytes[i + k]);
    return b >= lo && b <= hi;
  };
  while (i < bytes.size()) {
    auto b = static_cast<unsigned char>(bytes[i]);
    std::size_t len = 0;
    if (b < 0x80) {
      len = 1;
    } else if (b >= 0xC2 && b <= 0xDF) {
      len = cont(1) ? 2 : 0;
    } else if (b == 0xE0) {
      len = cont(1, 0xA0) && cont(2) ? 3 : 0;
    } else if (b == 0xED) {
      len = cont(1, 0x80, 0x9F) && cont(2) ? 3 : 0;
    } else if (b >= 0xE1 && b <= 0xEF) {
      len = cont(1) && cont(2) ? 3 : 0;
    } else if (b == 0xF0) {
      len = cont(1, 0x90) && cont(2) && cont(3) ? 4 : 0;
    } else if (b >= 0xF1 && b <= 0xF3) {
      len = cont(1) && cont(2) && cont(3) ? 4 : 0;
    } else if (b == 0xF4) {
      len = cont(1, 0x80, 0x8F) && cont(2) && cont(3) ? 4 : 0;
    }
    if (len == 0) {
      out += "\xEF\xBF\xBD";
      ++i;
    } else {
      out.append(bytes.substr(i, len));
      i += len;
    }
  }
  return out;
}

Document parse_document(std::string_view html, const ParseConfig& config) {
  std::string clean = sanitize_utf8(html);
  TreeBuilder builder(config);
  Tokenizer(clean, builder).run();
  Document doc = builder.finish();
  doc.raw_length = html.size();
  return doc;
}

}  // namespace pagesift::dom
