#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "pagesift/label.hpp"

namespace pagesift::dom {

/// Character data owned by an element. Whitespace runs are collapsed to a
/// single space when the chunk is created, so a chunk is never empty.
struct TextChunk {
  std::string text;
};

struct Attribute {
  std::string name;  // lowercase
  std::string value;
};

/// A child slot: either a nested element (by id) or a text chunk.
using Child = std::variant<NodeId, TextChunk>;

struct ElementNode {
  NodeId node_id = 0;
  std::string tag;  // uppercase
  std::vector<Attribute> attributes;
  std::vector<Child> children;
  std::optional<NodeId> parent;
  int depth = 0;
  int iframe_depth = 0;
  // Verbatim body of SCRIPT/STYLE. Kept for serialization, never part of text.
  std::string raw_text;

  const std::string* attribute(std::string_view name) const;
  bool has_attribute(std::string_view name) const { return attribute(name) != nullptr; }
};

/// Parsed element tree. Elements are stored in pre-order, so
/// `nodes()[i].node_id == i` for every element.
class Document {
 public:
  const ElementNode& root() const { return nodes_.front(); }
  const ElementNode& node(NodeId id) const { return nodes_.at(id); }
  bool contains(NodeId id) const { return id < nodes_.size(); }
  std::size_t size() const { return nodes_.size(); }
  std::span<const ElementNode> nodes() const { return nodes_; }

  /// Element children of `id`, in document order.
  std::vector<NodeId> element_children(NodeId id) const;
  /// Number of elements strictly below `id`.
  std::size_t descendant_count(NodeId id) const;
  /// True if `ancestor` is `id` or one of its ancestors.
  bool is_ancestor_or_self(NodeId ancestor, NodeId id) const;

  std::optional<std::string> source_url;
  std::size_t raw_length = 0;

 private:
  friend class TreeBuilder;
  std::vector<ElementNode> nodes_;
  std::vector<NodeId> subtree_end_;  // one past the last pre-order id of each subtree
};

struct ParseConfig {
  std::size_t max_depth = 512;
};

/// Lenient, total HTML parser. Unclosed tags are closed implicitly, HTML and
/// BODY are synthesized when missing, and comments plus SCRIPT/STYLE bodies
/// never produce text chunks. Throws Error(DepthExceeded) when nesting exceeds
/// `config.max_depth`.
Document parse_document(std::string_view html, const ParseConfig& config = {});

/// Replaces invalid UTF-8 sequences with U+FFFD.
std::string sanitize_utf8(std::string_view bytes);

/// Collapses runs of ASCII whitespace into one space and trims both ends.
std::string normalize_whitespace(std::string_view text);

/// Descendant text of `id` in document order, whitespace collapsed and
/// trimmed. Block-level boundaries separate words.
std::string element_text(const Document& doc, NodeId id);

struct AnnotateOptions {
  // Adds an inline green (R) or red (NR) outline to labeled elements.
  bool outline = false;
};

/// Serializes the tree. Labeled elements get a `-relevant`/`-noise` suffix on
/// their first class token (or a `tagged-*` class when they have none) and an
/// `id` equal to their node id. Throws Error(UnknownNodeId).
std::string serialize_annotated(const Document& doc, const LabelMap& labels, const AnnotateOptions& options = {});

inline std::string serialize(const Document& doc) { return serialize_annotated(doc, {}); }

/// Outer HTML of one element with the same annotation rules.
std::string outer_html(const Document& doc, NodeId id, const LabelMap& labels);

/// Code points in a UTF-8 string.
std::size_t utf8_length(std::string_view text);

}  // namespace pagesift::dom
