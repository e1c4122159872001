#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "pagesift/dom.hpp"
#include "pagesift/layout.hpp"

namespace pagesift::features {

/// Column indices of the frozen feature order.
enum Feature : std::size_t {
  kXRel,
  kYRel,
  kWRel,
  kHRel,
  kAreaRel,
  kCenterOffset,
  kDepth,
  kIframeDepth,
  kWordCount,
  kAvgWordLength,
  kTextDensity,
  kLinkDensity,
  kTagRatio,
  kTagCode,
  kNegativeToken,
  kPositiveToken,
  kReserved0,
  kReserved1,
  kReserved2,
  kReserved3,
  kReserved4,
  kReserved5,
  kIsImage,
  kAltLength,
  kHasSrc,
  kFeatureCount
};

inline constexpr std::size_t kWrapWidth = 80;
inline constexpr int kUnknownTagBuckets = 64;

using FeatureVector = std::array<double, kFeatureCount>;

struct FeatureSchema {
  std::string version;
  std::vector<std::string> names;

  bool operator==(const FeatureSchema&) const = default;
};

const FeatureSchema& schema();

/// Row-major dense matrix of doubles.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  double& at(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double at(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
  std::span<const double> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }
  std::span<double> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
  void append_row(std::span<const double> values);
  const std::vector<double>& data() const { return data_; }

  bool operator==(const Matrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

/// Word statistics of normalized text. A word is a maximal non-whitespace run.
struct TextStats {
  std::size_t chars = 0;  // code points
  std::size_t words = 0;
  double avg_word_length = 0;
  double text_density = 0;  // words per wrapped line of kWrapWidth chars
};

TextStats text_stats(std::string_view normalized_text);

/// Integer code of a tag: known tags map above the hash buckets, unknown tags
/// hash into [0, kUnknownTagBuckets).
int tag_code(std::string_view upper_tag);

/// Words under (non-nested) A descendants divided by all words, in [0, 1].
double link_density(const dom::Document& doc, NodeId id);

/// Throws Error(NotACandidate) unless `id` is a visible candidate.
FeatureVector extract_features(const dom::Document& doc, const layout::LayoutTree& layout, NodeId id);

struct ExtractedFeatures {
  std::vector<NodeId> node_ids;
  Matrix matrix;
};

/// Rows follow visible_candidates order. Parallel across candidates.
ExtractedFeatures extract_all(const dom::Document& doc, const layout::LayoutTree& layout);
/// Single-threaded reference of extract_all.
ExtractedFeatures extract_all_serial(const dom::Document& doc, const layout::LayoutTree& layout);

/// CSV with header `node_id,<schema names>` and one row per candidate.
std::string to_csv(const ExtractedFeatures& extracted);

/// Shortest decimal form that parses back to the same double.
std::string format_double(double value);

}  // namespace pagesift::features
