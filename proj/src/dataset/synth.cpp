#include <array>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include "pagesift/dataset.hpp"
#include "pagesift/dom.hpp"
#include "pagesift/error.hpp"
#include "pagesift/layout.hpp"

namespace pagesift::dataset {

namespace {

constexpr std::array kWords = {
    "the", "government", "said", "on", "monday", "that", "new", "rules", "would", "take", "effect",
    "next", "year", "after", "months", "of", "debate", "among", "officials", "and", "local", "leaders",
    "who", "had", "warned", "about", "rising", "costs", "for", "families", "in", "rural", "areas",
    "city", "council", "members", "voted", "to", "approve", "plan", "despite", "concerns", "raised",
    "by", "residents", "during", "public", "hearing", "last", "week", "report", "found", "number",
    "people", "affected", "has", "grown", "since", "early", "spring", "while", "experts", "say",
    "more", "research", "is", "needed", "before", "any", "firm", "conclusion", "can", "be", "drawn",
    "company", "announced", "quarterly", "earnings", "above", "expectations", "shares", "rose",
    "sharply", "trading", "investors", "welcomed", "news", "analysts", "cautioned", "market",
    "remains", "volatile", "weather", "service", "issued", "warning", "heavy", "rain", "expected",
    "across", "region", "through", "weekend", "with", "flooding", "possible", "low", "lying",
    "roads", "schools", "may", "close", "early", "if", "conditions", "worsen", "police", "confirmed",
    "investigation", "was", "ongoing", "witnesses", "described", "scene", "as", "chaotic", "team",
    "won", "final", "match", "season", "thanks", "late", "goal", "from", "young", "striker", "coach",
    "praised", "players", "their", "effort", "under", "pressure", "scientists", "discovered", "species",
    "deep", "ocean", "survey", "which", "could", "change", "understanding", "marine", "life"};

constexpr std::array kNavWords = {"Home", "World", "Politics", "Business", "Tech", "Science", "Health",
                                  "Sport", "Culture", "Travel", "Opinion", "Video", "Weather", "Local",
                                  "Markets", "Style", "Books", "Climate", "Education", "Podcasts"};

constexpr std::array kNames = {"Alex Morgan", "Priya Shah", "Daniel Okafor", "Mei Chen", "Lucas Silva",
                               "Sara Lindqvist", "Omar Haddad", "Julia Novak", "Kenji Watanabe", "Ana Ruiz"};

class Generator {
 public:
  explicit Generator(std::uint64_t seed) : rng_(seed) {}

  std::size_t below(std::size_t bound) {
    const std::uint64_t limit = std::mt19937_64::max() - std::mt19937_64::max() % bound;
    std::uint64_t v;
    do {
      v = rng_();
    } while (v >= limit);
    return static_cast<std::size_t>(v % bound);
  }
  std::size_t between(std::size_t lo, std::size_t hi) { return lo + below(hi - lo + 1); }
  bool chance(double p) { return static_cast<double>(below(1000000)) < p * 1000000.0; }
  template <typename Container>
  std::string pick(const Container& items) {
    return std::string(items[below(items.size())]);
  }
  std::string pick(std::initializer_list<const char*> items) { return *(items.begin() + below(items.size())); }

  std::string words(std::size_t n, bool capitalize = false) {
    std::string out;
    for (std::size_t i = 0; i < n; ++i) {
      if (i) out += ' ';
      std::string w = pick(kWords);
      if (i == 0 && capitalize) w[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(w[0])));
      out += w;
    }
    return out;
  }

  std::string sentence() { return words(between(8, 20), true) + "."; }

  std::string paragraph_text() {
    std::string out;
    std::size_t sentences = between(2, 6);
    for (std::size_t i = 0; i < sentences; ++i) {
      if (i) out += ' ';
      std::string s = sentence();
      if (chance(0.3)) {
        std::size_t cut = s.find(' ');
        s = s.substr(0, cut) + " <a href=\"/story/" + std::to_string(below(100000)) + "\">" + words(between(1, 3)) +
            "</a>" + s.substr(cut);
      }
      out += s;
    }
    return out;
  }

  std::string link(const std::string& text) {
    return "<a href=\"/" + std::to_string(below(100000)) + "\">" + text + "</a>";
  }

  std::string image(const std::string& src, std::size_t w, std::size_t h, const std::string& alt) {
    return "<img src=\"" + src + "\" width=\"" + std::to_string(w) + "\" height=\"" + std::to_string(h) +
           "\" alt=\"" + alt + "\">";
  }

 private:
  std::mt19937_64 rng_;
};

// Marker attributes locate ground truth while labeling; they are stripped
// from the saved page. Attributes never change the element structure.
constexpr std::string_view kArticleMark = "\x01A";
constexpr std::string_view kNoiseMark = "\x01N";

std::string replace_all(std::string text, std::string_view from, std::string_view to) {
  for (std::size_t pos = text.find(from); pos != std::string::npos; pos = text.find(from, pos + to.size())) {
    text.replace(pos, from.size(), to);
  }
  return text;
}

std::string header(Generator& g) {
  std::string out = "<header class=\"" + g.pick({"site-header", "masthead", "top-bar", "brand"}) + "\">";
  out += "<div class=\"" + g.pick({"logo", "brand-mark", "site-logo"}) + "\">" +
         g.image("/static/logo.png", g.between(100, 200), g.between(30, 60), "Daily Ledger") + "</div>";
  out += "<ul class=\"" + g.pick({"nav", "menu", "navigation", "sections"}) + "\">";
  std::size_t items = g.between(5, 9);
  for (std::size_t i = 0; i < items; ++i) out += "<li>" + g.link(g.pick(kNavWords)) + "</li>";
  out += "</ul></header>\n";
  return out;
}

std::string leaderboard(Generator& g) {
  return "<div class=\"" + g.pick({"ad-slot", "banner", "sponsor-strip", "promo-top"}) + "\">" +
         g.image("/ads/leader-" + std::to_string(g.below(1000)) + ".gif", 728, 90, "") + "</div>\n";
}

std::string share_bar(Generator& g) {
  std::string out = "<div class=\"" + g.pick({"share-tools", "social-bar", "article-tools", "toolbar"}) + "\"" +
                    std::string(kNoiseMark) + ">";
  for (const char* net : {"facebook", "twitter", "email"}) {
    if (g.chance(0.6)) out += g.image(std::string("/static/icon-") + net + ".png", 24, 24, net);
    out += g.link(g.pick({"Share", "Tweet", "Email", "Save", "Print"})) + " ";
  }
  out += "</div>\n";
  return out;
}

std::string related_box(Generator& g) {
  std::string out = "<div class=\"" + g.pick({"related-stories", "more-news", "read-next", "also-see"}) + "\"" +
                    std::string(kNoiseMark) + "><h3>" + g.pick({"Read more", "Related", "More on this story"}) +
                    "</h3><ul>";
  for (int i = 0; i < 3; ++i) out += "<li>" + g.link(g.words(g.between(5, 10), true)) + "</li>";
  out += "</ul></div>\n";
  return out;
}

std::string figure(Generator& g) {
  std::size_t w = g.between(480, 960);
  std::size_t h = g.between(270, 640);
  return "<figure>" + g.image("/media/photo-" + std::to_string(g.below(100000)) + ".jpg", w, h, g.words(g.between(3, 10), true)) +
         "<figcaption>" + g.words(g.between(6, 15), true) + ".</figcaption></figure>\n";
}

std::string article(Generator& g) {
  std::string tag = g.chance(0.5) ? "article" : "div";
  std::string out = "<" + tag + " class=\"" +
                    g.pick({"story-body", "article-content", "post", "entry-content", "col-main", "story", "main-col"}) +
                    "\"" + std::string(kArticleMark) + ">\n";
  out += "<h1 class=\"" + g.pick({"headline", "story-title", "title", "entry-title"}) + "\">" +
         g.words(g.between(6, 14), true) + "</h1>\n";
  out += "<p class=\"byline\">By " + g.pick(kNames) + " | " + std::to_string(g.between(1, 28)) + " " +
         g.pick({"March", "June", "October"}) + " 2019</p>\n";
  if (g.chance(0.5)) out += share_bar(g);

  std::size_t paragraphs = g.between(5, 15);
  std::size_t images = g.between(1, 3);
  std::vector<std::size_t> image_slots;
  for (std::size_t i = 0; i < images; ++i) image_slots.push_back(g.below(paragraphs));
  std::size_t related_at = g.chance(0.5) ? g.below(paragraphs) : paragraphs;
  for (std::size_t p = 0; p < paragraphs; ++p) {
    for (std::size_t slot : image_slots) {
      if (slot == p) out += figure(g);
    }
    if (p == related_at) out += related_box(g);
    out += "<p>" + g.paragraph_text() + "</p>\n";
  }
  if (g.chance(0.5)) out += share_bar(g);
  out += "</" + tag + ">\n";
  return out;
}

std::string sidebar(Generator& g) {
  std::string out = "<aside class=\"" + g.pick({"sidebar", "rail", "secondary", "col-side"}) + "\">";
  out += "<h3>" + g.pick({"Most popular", "Trending", "Top stories", "Editor's picks"}) + "</h3><ul>";
  std::size_t links = g.between(5, 8);
  for (std::size_t i = 0; i < links; ++i) out += "<li>" + g.link(g.words(g.between(4, 10), true)) + "</li>";
  out += "</ul>";
  if (g.chance(0.8)) {
    out += "<div class=\"" + g.pick({"ad", "mpu", "sponsored", "box-300"}) + "\">" +
           g.image("/ads/mpu-" + std::to_string(g.below(1000)) + ".jpg", 300, 250, "Advertisement") + "</div>";
  }
  std::size_t teasers = g.between(2, 4);
  for (std::size_t i = 0; i < teasers; ++i) {
    out += "<div class=\"" + g.pick({"card", "teaser", "promo-item", "tile"}) + "\">" +
           g.image("/thumbs/t" + std::to_string(g.below(10000)) + ".jpg", g.between(120, 200), g.between(68, 112),
                   g.words(g.between(2, 5))) +
           g.link(g.words(g.between(5, 12), true)) + "</div>";
  }
  out += "</aside>\n";
  return out;
}

std::string comments(Generator& g) {
  std::string out = "<div class=\"" + g.pick({"comments", "discussion", "responses", "reader-views"}) + "\"><h3>" +
                    g.pick({"Comments", "Join the conversation", "Reader comments"}) + "</h3>";
  std::size_t n = g.between(2, 6);
  for (std::size_t i = 0; i < n; ++i) {
    out += "<div class=\"" + g.pick({"comment", "reply", "entry"}) + "\">" +
           g.image("/avatars/" + std::to_string(g.below(1000)) + ".png", 48, 48, "") + "<p class=\"author\">" +
           g.pick(kNames) + "</p><p>" + g.words(g.between(15, 50), true) + ".</p></div>";
  }
  out += "</div>\n";
  return out;
}

std::string footer(Generator& g) {
  std::string out = "<footer class=\"" + g.pick({"footer", "site-footer", "bottom", "colophon"}) + "\"><ul>";
  std::size_t links = g.between(4, 8);
  for (std::size_t i = 0; i < links; ++i) out += "<li>" + g.link(g.pick(kNavWords)) + "</li>";
  out += "</ul><p>&copy; 2019 Daily Ledger Media. All rights reserved. " +
         g.pick({"Terms of use.", "Privacy policy.", "Cookie settings."}) + "</p></footer>\n";
  return out;
}

std::string page_html(Generator& g) {
  std::string body = header(g);
  if (g.chance(0.6)) body += leaderboard(g);
  std::string main = article(g);
  std::string side = sidebar(g);
  body += "<div class=\"" + g.pick({"page", "wrapper", "container", "layout"}) + "\">\n";
  body += g.chance(0.5) ? main + side : side + main;
  body += "</div>\n";
  if (g.chance(0.6)) body += comments(g);
  body += "<div class=\"modal\" style=\"display:none\"><p>" + g.words(30, true) + ".</p></div>\n";
  if (g.chance(0.5)) body += "<div class=\"cookie-notice\"><p>We use cookies to improve your experience.</p></div>\n";
  body += footer(g);
  return "<!DOCTYPE html>\n<html lang=\"en\"><head><meta charset=\"utf-8\"><title>" + g.words(6, true) +
         "</title><style>body{font-family:serif}</style><script>var ads = [];</script></head>\n<body>\n" + body +
         "</body></html>\n";
}

LabeledPage make_page(Generator& g, std::size_t index) {
  std::string marked = page_html(g);
  std::string with_markers = replace_all(replace_all(marked, kArticleMark, " data-synth=\"article\""), kNoiseMark,
                                         " data-synth=\"noise\"");
  std::string clean = replace_all(replace_all(marked, kArticleMark, ""), kNoiseMark, "");

  dom::Document truth_doc = dom::parse_document(with_markers);
  dom::Document doc = dom::parse_document(clean);
  if (truth_doc.size() != doc.size()) throw Error(ErrorKind::Io, "synthetic page structure changed when unmarked");

  layout::LayoutTree tree = layout::compute_layout(doc, layout::Viewport{});
  LabelMap labels;
  for (NodeId id : layout::visible_candidates(tree, doc)) {
    bool in_article = false;
    bool in_noise = false;
    for (std::optional<NodeId> a = id; a; a = truth_doc.node(*a).parent) {
      const std::string* mark = truth_doc.node(*a).attribute("data-synth");
      if (!mark) continue;
      if (*mark == "noise") in_noise = true;
      if (*mark == "article") in_article = true;
    }
    labels[id] = in_article && !in_noise ? Label::R : Label::NR;
  }

  char id_buf[32];
  std::snprintf(id_buf, sizeof id_buf, "page_%03zu", index + 1);
  LabeledPage page;
  page.page_id = id_buf;
  page.html = std::move(clean);
  for (const auto& [id, label] : labels) {
    page.labels.push_back({label, doc.node(id).tag, std::to_string(id), dom::outer_html(doc, id, labels)});
  }
  return page;
}

}  // namespace

std::vector<LabeledPage> synth_generate(std::size_t n_pages, std::uint64_t seed) {
  if (n_pages < 1) throw Error(ErrorKind::InvalidConfig, "n_pages must be >= 1");
  Generator g(seed);
  std::vector<LabeledPage> pages;
  pages.reserve(n_pages);
  for (std::size_t i = 0; i < n_pages; ++i) pages.push_back(make_page(g, i));
  return pages;
}

}  // namespace pagesift::dataset
