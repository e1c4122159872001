#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "pagesift/dom.hpp"
#include "pagesift/label.hpp"
#include "pagesift/layout.hpp"

namespace pagesift::baselines {

// ---------------------------------------------------------------------------
// Shallow text features: link density and word count thresholds with a
// one-block neighborhood rule.

struct BlockStats {
  NodeId node_id = 0;
  std::size_t word_count = 0;
  double link_density = 0;
  double text_density = 0;
};

struct ShallowTextConfig {
  double max_link_density = 0.33;
  std::size_t long_block_words = 40;
  std::size_t short_block_words = 15;
};

/// One entry per visible candidate, in document order.
std::vector<BlockStats> block_stats(const dom::Document& doc, const layout::LayoutTree& layout);

LabelMap shallow_text_classify(std::span<const BlockStats> blocks, const ShallowTextConfig& config = {});

// ---------------------------------------------------------------------------
// CETR, computed per candidate element instead of per source line.

struct CetrConfig {
  double sigma = 2.0;
  int radius = 3;
};

/// Gaussian smoothing with weights renormalized over the in-range window.
std::vector<double> gaussian_smooth(std::span<const double> values, double sigma, int radius);

/// R iff smoothed ratio >= mean of smoothed ratios.
std::vector<Label> cetr_labels(std::span<const double> ratios, const CetrConfig& config = {});

LabelMap cetr_classify(const dom::Document& doc, const layout::LayoutTree& layout, const CetrConfig& config = {});

// ---------------------------------------------------------------------------
// Maximum subsequence segmentation over a word/tag token stream.

enum class TokenKind { Word, Tag };

struct Token {
  TokenKind kind = TokenKind::Word;
  NodeId origin = 0;
};

using TokenStream = std::vector<Token>;

struct MssConfig {
  long long word_score = 1;
  long long tag_score = -3;
};

/// Inclusive index range [begin, end] and its score sum.
struct ScoreSpan {
  std::size_t begin = 0;
  std::size_t end = 0;
  long long sum = 0;

  bool operator==(const ScoreSpan&) const = default;
};

/// Single-pass maximum-sum contiguous span. Among equal sums the earliest,
/// then shortest span wins. nullopt for an empty sequence.
std::optional<ScoreSpan> max_subsequence(std::span<const long long> scores);

/// Tags of visible elements and words of visible text, in document order.
/// Words originate from the nearest enclosing block element.
TokenStream tokenize(const dom::Document& doc, const layout::LayoutTree& layout);

/// Every origin node in the stream: R iff one of its word tokens is inside
/// the winning span.
LabelMap mss_classify(const TokenStream& tokens, const MssConfig& config = {});

}  // namespace pagesift::baselines
