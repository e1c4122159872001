#include <string>

#include "pagesift/dom.hpp"
#include "pagesift/error.hpp"
#include "pagesift/tags.hpp"

namespace pagesift::dom {

namespace {

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f'; }

void collect_text(const Document& doc, NodeId id, std::string& out) {
  for (const Child& child : doc.node(id).children) {
    if (const auto* chunk = std::get_if<TextChunk>(&child)) {
      out += chunk->text;
      continue;
    }
    NodeId child_id = std::get<NodeId>(child);
    const std::string& tag = doc.node(child_id).tag;
    bool boundary = tag == "BR" || default_display(tag).value_or(Display::Inline) == Display::Block;
    if (boundary) out += ' ';
    collect_text(doc, child_id, out);
    if (boundary) out += ' ';
  }
}

}  // namespace

const std::string* ElementNode::attribute(std::string_view name) const {
  for (const auto& attr : attributes) {
    if (attr.name == name) return &attr.value;
  }
  return nullptr;
}

std::vector<NodeId> Document::element_children(NodeId id) const {
  std::vector<NodeId> out;
  for (const Child& child : node(id).children) {
    if (const auto* element = std::get_if<NodeId>(&child)) out.push_back(*element);
  }
  return out;
}

std::size_t Document::descendant_count(NodeId id) const {
  return subtree_end_.at(id) - id - 1;
}

bool Document::is_ancestor_or_self(NodeId ancestor, NodeId id) const {
  return id >= ancestor && id < subtree_end_.at(ancestor);
}

std::string normalize_whitespace(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  bool pending_space = false;
  for (char c : text) {
    if (is_space(c)) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) out += ' ';
    pending_space = false;
    out += c;
  }
  return out;
}

std::string element_text(const Document& doc, NodeId id) {
  if (!doc.contains(id)) throw Error(ErrorKind::UnknownNodeId, std::to_string(id));
  std::string raw;
  collect_text(doc, id, raw);
  return normalize_whitespace(raw);
}

std::size_t utf8_length(std::string_view text) {
  std::size_t count = 0;
  for (char c : text) {
    if ((static_cast<unsigned char>(c) & 0xC0) != 0x80) ++count;
  }
  return count;
}

}  // namespace pagesift::dom
