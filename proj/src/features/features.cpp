#include "pagesift/features.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstdint>

#include "pagesift/error.hpp"
#include "pagesift/tags.hpp"

namespace pagesift::features {

namespace {

constexpr std::array<std::string_view, 8> kNegativeTokens = {
    "ad", "nav", "foot", "comment", "share", "promo", "related", "social"};
constexpr std::array<std::string_view, 8> kPositiveTokens = {
    "content", "article", "body", "main", "story", "text", "post", "headline"};

double clamp01(double v) { return std::clamp(v, 0.0, 1.0); }
double ratio(double num, double den) { return den > 0 ? num / den : 0.0; }

std::vector<std::string> attribute_words(const dom::ElementNode& e) {
  std::vector<std::string> words;
  for (std::string_view name : {"id", "class"}) {
    const std::string* value = e.attribute(name);
    if (!value) continue;
    std::string current;
    for (char c : *value) {
      if (std::isalnum(static_cast<unsigned char>(c))) {
        current += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
      } else if (!current.empty()) {
        words.push_back(std::move(current));
        current.clear();
      }
    }
    if (!current.empty()) words.push_back(std::move(current));
  }
  return words;
}

template <std::size_t N>
bool any_word_starts_with(const std::vector<std::string>& words, const std::array<std::string_view, N>& tokens) {
  for (const auto& w : words) {
    for (std::string_view t : tokens) {
      if (std::string_view(w).starts_with(t)) return true;
    }
  }
  return false;
}

FeatureVector compute_row(const dom::Document& doc, const layout::LayoutTree& layout, NodeId id) {
  FeatureVector f{};
  const dom::ElementNode& e = doc.node(id);
  const layout::LayoutBox& b = layout.box(id);
  const double vw = layout.viewport().width;
  const double ph = layout.page_height();

  f[kXRel] = clamp01(ratio(b.x, vw));
  f[kYRel] = clamp01(ratio(b.y, ph));
  f[kWRel] = clamp01(ratio(b.width, vw));
  f[kHRel] = clamp01(ratio(b.height, ph));
  f[kAreaRel] = clamp01(ratio(b.width * b.height, vw * ph));
  f[kCenterOffset] = clamp01(std::abs(b.x + b.width / 2 - vw / 2) / vw);
  f[kDepth] = e.depth;
  f[kIframeDepth] = e.iframe_depth;

  std::string text = dom::element_text(doc, id);
  TextStats stats = text_stats(text);
  f[kWordCount] = static_cast<double>(stats.words);
  f[kAvgWordLength] = stats.avg_word_length;
  f[kTextDensity] = stats.text_density;
  f[kLinkDensity] = link_density(doc, id);
  f[kTagRatio] = static_cast<double>(stats.chars) / (1.0 + static_cast<double>(doc.descendant_count(id)));

  f[kTagCode] = tag_code(e.tag);
  auto words = attribute_words(e);
  f[kNegativeToken] = any_word_starts_with(words, kNegativeTokens) ? 1.0 : 0.0;
  f[kPositiveToken] = any_word_starts_with(words, kPositiveTokens) ? 1.0 : 0.0;

  bool image = e.tag == "IMG";
  f[kIsImage] = image ? 1.0 : 0.0;
  const std::string* alt = e.attribute("alt");
  f[kAltLength] = alt ? static_cast<double>(dom::utf8_length(dom::normalize_whitespace(*alt))) : 0.0;
  const std::string* src = e.attribute("src");
  f[kHasSrc] = (src && !dom::normalize_whitespace(*src).empty()) ? 1.0 : 0.0;
  return f;
}

}  // namespace

const FeatureSchema& schema() {
  static const FeatureSchema kSchema{
      "features-v1",
      {"x_rel", "y_rel", "w_rel", "h_rel", "area_rel", "center_offset", "depth", "iframe_depth",
       "word_count", "avg_word_length", "text_density", "link_density", "tag_ratio", "tag_code",
       "negative_token", "positive_token", "reserved_0", "reserved_1", "reserved_2", "reserved_3",
       "reserved_4", "reserved_5", "is_image", "alt_length", "has_src"}};
  return kSchema;
}

void Matrix::append_row(std::span<const double> values) {
  if (rows_ == 0 && cols_ == 0) cols_ = values.size();
  if (values.size() != cols_) throw Error(ErrorKind::SchemaMismatch, "row width differs from matrix width");
  data_.insert(data_.end(), values.begin(), values.end());
  ++rows_;
}

TextStats text_stats(std::string_view text) {
  TextStats s;
  s.chars = dom::utf8_length(text);
  std::size_t word_chars = 0;
  bool in_word = false;
  for (char c : text) {
    bool space = c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f';
    if (space) {
      in_word = false;
      continue;
    }
    if (!in_word) ++s.words;
    in_word = true;
    if ((static_cast<unsigned char>(c) & 0xC0) != 0x80) ++word_chars;
  }
  s.avg_word_length = s.words ? static_cast<double>(word_chars) / static_cast<double>(s.words) : 0.0;
  std::size_t lines = std::max<std::size_t>(1, (s.chars + kWrapWidth - 1) / kWrapWidth);
  s.text_density = static_cast<double>(s.words) / static_cast<double>(lines);
  return s;
}

int tag_code(std::string_view upper_tag) {
  if (auto index = known_tag_index(upper_tag)) return kUnknownTagBuckets + *index;
  std::uint32_t hash = 2166136261u;
  for (char c : upper_tag) {
    hash ^= static_cast<unsigned char>(c);
    hash *= 16777619u;
  }
  return static_cast<int>(hash % kUnknownTagBuckets);
}

double link_density(const dom::Document& doc, NodeId id) {
  std::size_t total = text_stats(dom::element_text(doc, id)).words;
  if (total == 0) return 0.0;
  std::size_t linked = 0;
  NodeId end = id + 1 + static_cast<NodeId>(doc.descendant_count(id));
  for (NodeId k = id; k < end;) {
    if (doc.node(k).tag == "A") {
      linked += text_stats(dom::element_text(doc, k)).words;
      k += 1 + static_cast<NodeId>(doc.descendant_count(k));
    } else {
      ++k;
    }
  }
  return clamp01(static_cast<double>(linked) / static_cast<double>(total));
}

FeatureVector extract_features(const dom::Document& doc, const layout::LayoutTree& layout, NodeId id) {
  if (!layout::is_candidate(layout, doc, id)) {
    throw Error(ErrorKind::NotACandidate, "node " + std::to_string(id) + " is not a visible candidate");
  }
  return compute_row(doc, layout, id);
}

ExtractedFeatures extract_all_serial(const dom::Document& doc, const layout::LayoutTree& layout) {
  ExtractedFeatures out;
  out.node_ids = layout::visible_candidates(layout, doc);
  out.matrix = Matrix(out.node_ids.size(), kFeatureCount);
  for (std::size_t r = 0; r < out.node_ids.size(); ++r) {
    FeatureVector f = compute_row(doc, layout, out.node_ids[r]);
    std::copy(f.begin(), f.end(), out.matrix.row(r).begin());
  }
  return out;
}

ExtractedFeatures extract_all(const dom::Document& doc, const layout::LayoutTree& layout) {
  ExtractedFeatures out;
  out.node_ids = layout::visible_candidates(layout, doc);
  out.matrix = Matrix(out.node_ids.size(), kFeatureCount);
  const auto n = static_cast<std::ptrdiff_t>(out.node_ids.size());
#pragma omp parallel for schedule(dynamic, 8)
  for (std::ptrdiff_t r = 0; r < n; ++r) {
    FeatureVector f = compute_row(doc, layout, out.node_ids[static_cast<std::size_t>(r)]);
    std::copy(f.begin(), f.end(), out.matrix.row(static_cast<std::size_t>(r)).begin());
  }
  return out;
}

std::string format_double(double value) {
  std::array<char, 32> buf{};
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  return std::string(buf.data(), ptr);
}

std::string to_csv(const ExtractedFeatures& extracted) {
  std::string out = "node_id";
  for (const auto& name : schema().names) out += "," + name;
  out += '\n';
  for (std::size_t r = 0; r < extracted.node_ids.size(); ++r) {
    out += std::to_string(extracted.node_ids[r]);
    for (double v : extracted.matrix.row(r)) {
      out += ',';
      out += format_double(v);
    }
    out += '\n';
  }
  return out;
}

}  // namespace pagesift::features
