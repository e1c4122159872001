#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "pagesift/label.hpp"

namespace pagesift::dataset {

/// One entry of labels.json: the tagging tool's record of a labeled element.
struct LabelRecord {
  Label label = Label::NR;
  std::string tag;      // uppercase
  std::string id;       // decimal node id
  std::string content;  // annotated outer HTML

  bool operator==(const LabelRecord&) const = default;
};

struct LabeledPage {
  std::string page_id;
  std::filesystem::path html_path;
  std::string html;
  std::vector<LabelRecord> labels;
  std::vector<std::string> warnings;
};

/// Parses and validates labels.json: an array of objects with exactly the
/// keys label, tag, id, content. Throws Error(MalformedLabels).
std::vector<LabelRecord> parse_labels(std::string_view json);

/// Canonical labels.json text. parse_labels(write_labels(x)) == x and the
/// output is a fixed point of parse/write.
std::string write_labels(std::span<const LabelRecord> labels);

/// Ids of `labels` that resolve to no element of `html`, as warnings.
std::vector<std::string> check_label_ids(std::string_view html, std::span<const LabelRecord> labels);

/// Reads `<root>/<page_id>/{page.html,labels.json}` for every subdirectory,
/// sorted by page id. Throws Error(MissingFile) or Error(MalformedLabels).
std::vector<LabeledPage> load_dataset(const std::filesystem::path& root);
LabeledPage load_page(const std::filesystem::path& root, const std::string& page_id);

/// Writes a page into the dataset layout; each file is replaced atomically.
void save_page(const std::filesystem::path& root, const LabeledPage& page);

/// Writes via a temporary sibling file and rename.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);
std::string read_file(const std::filesystem::path& path);

/// Page ids are directory names: [A-Za-z0-9_.-]+, not "." or "..".
bool valid_page_id(std::string_view id);

struct Split {
  std::vector<std::size_t> train;
  std::vector<std::size_t> test;
};

/// Seeded shuffle of n indices; round(ratio × n) go to train, clamped so both
/// parts are non-empty. Throws Error(TooFewPages) or Error(InvalidConfig).
Split split_indices(std::size_t n, double ratio, std::uint64_t seed);

std::pair<std::vector<LabeledPage>, std::vector<LabeledPage>> split_dataset(const std::vector<LabeledPage>& pages,
                                                                            double ratio, std::uint64_t seed);

/// News-article-shaped pages with every visible candidate labeled: the
/// article's headline, paragraphs and content images R, page furniture NR.
std::vector<LabeledPage> synth_generate(std::size_t n_pages, std::uint64_t seed);

}  // namespace pagesift::dataset
