#include "pagesift/dataset.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "pagesift/dom.hpp"
#include "pagesift/error.hpp"

namespace pagesift::dataset {

namespace fs = std::filesystem;

namespace {

[[noreturn]] void malformed(const std::string& what) { throw Error(ErrorKind::MalformedLabels, what); }

bool is_decimal(std::string_view s) {
  return !s.empty() && s.size() <= 10 && std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; });
}

bool is_upper_tag(std::string_view s) {
  return !s.empty() && std::none_of(s.begin(), s.end(), [](char c) { return c >= 'a' && c <= 'z'; });
}

// Uniform integer in [0, bound) from a standardized engine.
std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t bound) {
  const std::uint64_t limit = std::mt19937_64::max() - std::mt19937_64::max() % bound;
  std::uint64_t v;
  do {
    v = rng();
  } while (v >= limit);
  return v % bound;
}

}  // namespace

std::vector<LabelRecord> parse_labels(std::string_view text) {
  nlohmann::json doc = nlohmann::json::parse(text.begin(), text.end(), nullptr, false);
  if (doc.is_discarded()) malformed("labels.json is not valid JSON");
  if (!doc.is_array()) malformed("labels.json must be an array");
  std::vector<LabelRecord> out;
  out.reserve(doc.size());
  for (const auto& item : doc) {
    if (!item.is_object() || item.size() != 4) malformed("each label must be an object with keys label, tag, id, content");
    for (const char* key : {"label", "tag", "id", "content"}) {
      if (!item.contains(key) || !item[key].is_string()) malformed(std::string("label field '") + key + "' must be a string");
    }
    LabelRecord record;
    auto label = parse_label(item["label"].get<std::string>());
    if (!label) malformed("unknown label value '" + item["label"].get<std::string>() + "'");
    record.label = *label;
    record.tag = item["tag"].get<std::string>();
    if (!is_upper_tag(record.tag)) malformed("tag '" + record.tag + "' must be uppercase");
    record.id = item["id"].get<std::string>();
    if (!is_decimal(record.id)) malformed("id '" + record.id + "' is not a decimal string");
    record.content = item["content"].get<std::string>();
    out.push_back(std::move(record));
  }
  return out;
}

std::string write_labels(std::span<const LabelRecord> labels) {
  nlohmann::ordered_json doc = nlohmann::ordered_json::array();
  for (const auto& r : labels) {
    doc.push_back({{"label", to_string(r.label)}, {"tag", r.tag}, {"id", r.id}, {"content", r.content}});
  }
  return doc.dump(2) + "\n";
}

std::vector<std::string> check_label_ids(std::string_view html, std::span<const LabelRecord> labels) {
  std::vector<std::string> warnings;
  dom::Document doc = dom::parse_document(html);
  for (const auto& r : labels) {
    auto id = std::stoull(r.id);
    if (id >= doc.size()) {
      warnings.push_back("label id " + r.id + " resolves to no element");
    } else if (doc.node(static_cast<NodeId>(id)).tag != r.tag) {
      warnings.push_back("label id " + r.id + " is a " + doc.node(static_cast<NodeId>(id)).tag + ", not " + r.tag);
    }
  }
  return warnings;
}

bool valid_page_id(std::string_view id) {
  if (id.empty() || id == "." || id == "..") return false;
  return std::all_of(id.begin(), id.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == '.';
  });
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::MissingFile, path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_file_atomic(const fs::path& path, std::string_view content) {
  static std::atomic<unsigned> counter{0};
  fs::path tmp = path;
  tmp += ".tmp-" + std::to_string(std::hash<std::thread::id>{}(std::this_thread::get_id()) % 1000000) + "-" +
         std::to_string(counter++);
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorKind::Io, "cannot write " + tmp.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) throw Error(ErrorKind::Io, "short write to " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp);
    throw Error(ErrorKind::Io, "cannot replace " + path.string() + ": " + ec.message());
  }
}

LabeledPage load_page(const fs::path& root, const std::string& page_id) {
  LabeledPage page;
  page.page_id = page_id;
  fs::path dir = root / page_id;
  page.html_path = dir / "page.html";
  fs::path labels_path = dir / "labels.json";
  if (!fs::is_regular_file(page.html_path)) throw Error(ErrorKind::MissingFile, page.html_path.string());
  if (!fs::is_regular_file(labels_path)) throw Error(ErrorKind::MissingFile, labels_path.string());
  page.html = read_file(page.html_path);
  try {
    page.labels = parse_labels(read_file(labels_path));
  } catch (const Error& e) {
    throw Error(ErrorKind::MalformedLabels, labels_path.string() + ": " + e.what());
  }
  page.warnings = check_label_ids(page.html, page.labels);
  return page;
}

std::vector<LabeledPage> load_dataset(const fs::path& root) {
  if (!fs::is_directory(root)) throw Error(ErrorKind::MissingFile, "dataset directory " + root.string());
  std::vector<std::string> ids;
  for (const auto& entry : fs::directory_iterator(root)) {
    if (!entry.is_directory()) continue;
    std::string name = entry.path().filename().string();
    if (name.starts_with('.') || !valid_page_id(name)) continue;
    ids.push_back(std::move(name));
  }
  std::sort(ids.begin(), ids.end());
  std::vector<LabeledPage> pages;
  pages.reserve(ids.size());
  for (const auto& id : ids) pages.push_back(load_page(root, id));
  return pages;
}

void save_page(const fs::path& root, const LabeledPage& page) {
  if (!valid_page_id(page.page_id)) throw Error(ErrorKind::Io, "invalid page id '" + page.page_id + "'");
  fs::path dir = root / page.page_id;
  fs::create_directories(dir);
  write_file_atomic(dir / "page.html", page.html);
  write_file_atomic(dir / "labels.json", write_labels(page.labels));
}

Split split_indices(std::size_t n, double ratio, std::uint64_t seed) {
  if (!(ratio > 0 && ratio < 1)) throw Error(ErrorKind::InvalidConfig, "split ratio must be in (0, 1)");
  if (n < 2) throw Error(ErrorKind::TooFewPages, "need at least 2 pages to split, got " + std::to_string(n));
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  std::mt19937_64 rng(seed);
  for (std::size_t i = n - 1; i > 0; --i) std::swap(order[i], order[uniform_below(rng, i + 1)]);

  auto n_train = static_cast<std::size_t>(std::llround(ratio * static_cast<double>(n)));
  n_train = std::clamp<std::size_t>(n_train, 1, n - 1);
  Split split;
  split.train.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n_train));
  split.test.assign(order.begin() + static_cast<std::ptrdiff_t>(n_train), order.end());
  std::sort(split.train.begin(), split.train.end());
  std::sort(split.test.begin(), split.test.end());
  return split;
}

std::pair<std::vector<LabeledPage>, std::vector<LabeledPage>> split_dataset(const std::vector<LabeledPage>& pages,
                                                                            double ratio, std::uint64_t seed) {
  Split split = split_indices(pages.size(), ratio, seed);
  std::pair<std::vector<LabeledPage>, std::vector<LabeledPage>> out;
  for (std::size_t i : split.train) out.first.push_back(pages[i]);
  for (std::size_t i : split.test) out.second.push_back(pages[i]);
  return out;
}

}  // namespace pagesift::dataset
