#pragma once

// Seeded generators for property tests.

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "pagesift/features.hpp"

namespace gen {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  int uniform(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(engine_); }
  double real(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(engine_); }
  bool coin(double p = 0.5) { return real(0, 1) < p; }
  template <typename T>
  const T& pick(const std::vector<T>& items) {
    return items[static_cast<std::size_t>(uniform(0, static_cast<int>(items.size()) - 1))];
  }
  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
};

inline std::string random_words(Rng& rng, int n) {
  static const std::vector<std::string> words = {"alpha", "beta", "gamma", "news", "story", "market",
                                                 "x", "lorem", "ipsum", "café", "über", "data"};
  std::string out;
  for (int i = 0; i < n; ++i) out += (i ? " " : "") + rng.pick(words);
  return out;
}

// Tag soup: well-formed and malformed nesting, stray end tags, entities,
// comments, raw-text elements, hidden subtrees, sized images and iframes.
inline std::string random_html(Rng& rng, int budget = 40) {
  static const std::vector<std::string> blocks = {"div", "p", "section", "article", "ul", "li", "h1", "h2",
                                                  "table", "tr", "td", "blockquote", "iframe", "header", "custom-x"};
  static const std::vector<std::string> inlines = {"a", "span", "b", "em", "strong", "font"};
  static const std::vector<std::string> classes = {"nav", "content", "ad-slot", "story-body", "footer", "x"};
  std::string out = rng.coin(0.7) ? "<html><head><title>t</title></head><body>" : "";
  std::vector<std::string> open;
  for (int i = 0; i < budget; ++i) {
    int kind = rng.uniform(0, 11);
    if (kind <= 2) {
      std::string tag = rng.pick(blocks);
      out += "<" + tag;
      if (rng.coin(0.4)) out += " class=\"" + rng.pick(classes) + "\"";
      if (rng.coin(0.1)) out += " style=\"display:none\"";
      if (rng.coin(0.1)) out += " style=\"width:" + std::to_string(rng.uniform(1, 120)) + "%\"";
      if (rng.coin(0.05)) out += " hidden";
      out += ">";
      open.push_back(tag);
    } else if (kind <= 4) {
      std::string tag = rng.pick(inlines);
      out += "<" + tag + (tag == "a" ? " href=\"/x\">" : ">");
      open.push_back(tag);
    } else if (kind <= 7) {
      out += random_words(rng, rng.uniform(0, 30));
      if (rng.coin(0.2)) out += " &amp; &lt;&#233;&nbsp;\n\t";
    } else if (kind == 8) {
      out += "<img src=\"i.png\"";
      if (rng.coin(0.6)) out += " width=\"" + std::to_string(rng.uniform(1, 2000)) + "\"";
      if (rng.coin(0.6)) out += " height=\"" + std::to_string(rng.uniform(1, 900)) + "\"";
      if (rng.coin(0.5)) out += " alt=\"" + random_words(rng, rng.uniform(0, 4)) + "\"";
      out += ">";
    } else if (kind == 9) {
      if (!open.empty() && rng.coin(0.8)) {
        out += "</" + open.back() + ">";
        open.pop_back();
      } else {
        out += "</" + rng.pick(blocks) + ">";
      }
    } else if (kind == 10) {
      out += rng.coin() ? "<!-- c -->" : "<script>var a = '<p>';</script>";
    } else {
      out += rng.coin() ? "<br>" : "<style>p{}</style>";
    }
  }
  if (rng.coin(0.5)) {
    while (!open.empty()) {
      out += "</" + open.back() + ">";
      open.pop_back();
    }
  }
  return out;
}

inline pagesift::features::Matrix random_matrix(Rng& rng, std::size_t rows, std::size_t cols, bool coarse) {
  pagesift::features::Matrix x(rows, cols);
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      x.at(r, c) = coarse ? static_cast<double>(rng.uniform(0, 3)) : rng.real(-5, 5);
    }
  }
  return x;
}

}  // namespace gen
