#include "pagesift/baselines.hpp"

#include <cmath>
#include <numeric>

#include "pagesift/features.hpp"

namespace pagesift::baselines {

std::vector<BlockStats> block_stats(const dom::Document& doc, const layout::LayoutTree& layout) {
  std::vector<BlockStats> out;
  for (NodeId id : layout::visible_candidates(layout, doc)) {
    features::TextStats stats = features::text_stats(dom::element_text(doc, id));
    out.push_back({id, stats.words, features::link_density(doc, id), stats.text_density});
  }
  return out;
}

LabelMap shallow_text_classify(std::span<const BlockStats> blocks, const ShallowTextConfig& config) {
  auto long_clean = [&](const BlockStats& b) {
    return b.word_count > config.long_block_words && b.link_density < config.max_link_density;
  };
  LabelMap out;
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    const BlockStats& b = blocks[i];
    bool relevant = false;
    if (b.link_density < config.max_link_density) {
      if (b.word_count > config.long_block_words) {
        relevant = true;
      } else if (b.word_count > config.short_block_words) {
        bool prev = i > 0 && long_clean(blocks[i - 1]);
        bool next = i + 1 < blocks.size() && long_clean(blocks[i + 1]);
        relevant = prev || next;
      }
    }
    out[b.node_id] = relevant ? Label::R : Label::NR;
  }
  return out;
}

std::vector<double> gaussian_smooth(std::span<const double> values, double sigma, int radius) {
  std::vector<double> kernel(static_cast<std::size_t>(2 * radius + 1));
  for (int k = -radius; k <= radius; ++k) {
    kernel[static_cast<std::size_t>(k + radius)] = std::exp(-(k * k) / (2 * sigma * sigma));
  }
  const auto n = static_cast<std::ptrdiff_t>(values.size());
  std::vector<double> out(values.size());
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    double weighted = 0;
    double weight = 0;
    for (int k = -radius; k <= radius; ++k) {
      std::ptrdiff_t j = i + k;
      if (j < 0 || j >= n) continue;
      double w = kernel[static_cast<std::size_t>(k + radius)];
      weighted += w * values[static_cast<std::size_t>(j)];
      weight += w;
    }
    out[static_cast<std::size_t>(i)] = weighted / weight;
  }
  return out;
}

std::vector<Label> cetr_labels(std::span<const double> ratios, const CetrConfig& config) {
  std::vector<double> smoothed = gaussian_smooth(ratios, config.sigma, config.radius);
  std::vector<Label> out(smoothed.size(), Label::NR);
  if (smoothed.empty()) return out;
  double mean = std::accumulate(smoothed.begin(), smoothed.end(), 0.0) / static_cast<double>(smoothed.size());
  // Rounding in the mean must not split a uniform vector.
  double slack = 1e-12 * std::max(1.0, std::abs(mean));
  for (std::size_t i = 0; i < smoothed.size(); ++i) {
    if (smoothed[i] >= mean - slack) out[i] = Label::R;
  }
  return out;
}

LabelMap cetr_classify(const dom::Document& doc, const layout::LayoutTree& layout, const CetrConfig& config) {
  std::vector<NodeId> candidates = layout::visible_candidates(layout, doc);
  std::vector<double> ratios;
  ratios.reserve(candidates.size());
  for (NodeId id : candidates) {
    double chars = static_cast<double>(dom::utf8_length(dom::element_text(doc, id)));
    ratios.push_back(chars / (1.0 + static_cast<double>(doc.descendant_count(id))));
  }
  std::vector<Label> labels = cetr_labels(ratios, config);
  LabelMap out;
  for (std::size_t i = 0; i < candidates.size(); ++i) out[candidates[i]] = labels[i];
  return out;
}

std::optional<ScoreSpan> max_subsequence(std::span<const long long> scores) {
  if (scores.empty()) return std::nullopt;
  ScoreSpan best{0, 0, scores[0]};
  long long current = scores[0];
  std::size_t start = 0;
  for (std::size_t j = 1; j < scores.size(); ++j) {
    // Extending a non-negative run keeps the earliest start.
    if (current >= 0) {
      current += scores[j];
    } else {
      current = scores[j];
      start = j;
    }
    if (current > best.sum || (current == best.sum && start < best.begin)) best = {start, j, current};
  }
  return best;
}

TokenStream tokenize(const dom::Document& doc, const layout::LayoutTree& layout) {
  TokenStream tokens;
  // Nearest block-level ancestor-or-self of each element.
  std::vector<NodeId> block_owner(doc.size(), 0);
  for (NodeId id = 0; id < doc.size(); ++id) {
    const auto& e = doc.node(id);
    if (layout.box(id).display == Display::Block || !e.parent) {
      block_owner[id] = id;
    } else {
      block_owner[id] = block_owner[*e.parent];
    }
  }
  auto visit = [&](auto&& self, NodeId id) -> void {
    if (!layout.box(id).visible) return;
    tokens.push_back({TokenKind::Tag, id});
    for (const dom::Child& child : doc.node(id).children) {
      if (const auto* element = std::get_if<NodeId>(&child)) {
        self(self, *element);
        continue;
      }
      const auto& text = std::get<dom::TextChunk>(child).text;
      bool in_word = false;
      for (char c : text) {
        if (c == ' ') {
          in_word = false;
        } else if (!in_word) {
          tokens.push_back({TokenKind::Word, block_owner[id]});
          in_word = true;
        }
      }
    }
  };
  visit(visit, 0);
  return tokens;
}

LabelMap mss_classify(const TokenStream& tokens, const MssConfig& config) {
  LabelMap out;
  std::vector<long long> scores;
  scores.reserve(tokens.size());
  for (const Token& t : tokens) {
    scores.push_back(t.kind == TokenKind::Word ? config.word_score : config.tag_score);
    out.emplace(t.origin, Label::NR);
  }
  auto best = max_subsequence(scores);
  if (!best) return out;
  for (std::size_t i = best->begin; i <= best->end; ++i) {
    if (tokens[i].kind == TokenKind::Word) out[tokens[i].origin] = Label::R;
  }
  return out;
}

}  // namespace pagesift::baselines
