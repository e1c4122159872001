#include <string>

#include "pagesift/dom.hpp"
#include "pagesift/error.hpp"
#include "pagesift/tags.hpp"

namespace pagesift::dom {

namespace {

void append_escaped_text(std::string& out, std::string_view text) {
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      default: out += c;
    }
  }
}

void append_escaped_attribute(std::string& out, std::string_view value) {
  for (char c : value) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
}

std::string lowercase(std::string_view tag) {
  std::string out(tag);
  for (char& c : out) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  }
  return out;
}

void add_outline(std::vector<Attribute>& attrs, Label label) {
  std::string_view decl = label == Label::R ? "outline:2px solid green" : "outline:2px solid red";
  for (auto& attr : attrs) {
    if (attr.name != "style") continue;
    std::string value = normalize_whitespace(attr.value);
    if (!value.empty() && value.back() != ';') value += ';';
    attr.value = value + std::string(decl);
    return;
  }
  attrs.push_back({"style", std::string(decl)});
}

std::vector<Attribute> annotated_attributes(const ElementNode& element, Label label, bool outline) {
  std::vector<Attribute> attrs = element.attributes;
  std::string_view suffix = label == Label::R ? "-relevant" : "-noise";

  Attribute* class_attr = nullptr;
  for (auto& attr : attrs) {
    if (attr.name == "class") class_attr = &attr;
  }
  std::string first_token;
  std::string rest;
  if (class_attr) {
    std::string normalized = normalize_whitespace(class_attr->value);
    auto space = normalized.find(' ');
    first_token = normalized.substr(0, space);
    if (space != std::string::npos) rest = normalized.substr(space);
  }
  std::string new_class = first_token.empty() ? "tagged" + std::string(suffix)
                                              : first_token + std::string(suffix) + rest;
  if (class_attr) {
    class_attr->value = std::move(new_class);
  } else {
    attrs.push_back({"class", std::move(new_class)});
  }

  std::string id_value = std::to_string(element.node_id);
  bool has_id = false;
  for (auto& attr : attrs) {
    if (attr.name == "id") {
      attr.value = id_value;
      has_id = true;
    }
  }
  if (!has_id) attrs.push_back({"id", std::move(id_value)});
  if (outline) add_outline(attrs, label);
  return attrs;
}

void write_element(const Document& doc, NodeId id, const LabelMap& labels, bool outline, std::string& out) {
  const ElementNode& element = doc.node(id);
  std::string tag = lowercase(element.tag);
  auto label = labels.find(id);
  const std::vector<Attribute>* attrs = &element.attributes;
  std::vector<Attribute> annotated;
  if (label != labels.end()) {
    annotated = annotated_attributes(element, label->second, outline);
    attrs = &annotated;
  }

  out += '<';
  out += tag;
  for (const auto& attr : *attrs) {
    out += ' ';
    out += attr.name;
    out += "=\"";
    append_escaped_attribute(out, attr.value);
    out += '"';
  }
  out += '>';
  if (is_void_element(element.tag)) return;

  for (const Child& child : element.children) {
    if (const auto* chunk = std::get_if<TextChunk>(&child)) {
      append_escaped_text(out, chunk->text);
    } else {
      write_element(doc, std::get<NodeId>(child), labels, outline, out);
    }
  }
  out += element.raw_text;
  out += "</";
  out += tag;
  out += '>';
}

void check_labels(const Document& doc, const LabelMap& labels) {
  for (const auto& [id, label] : labels) {
    if (!doc.contains(id)) throw Error(ErrorKind::UnknownNodeId, "no element with id " + std::to_string(id));
  }
}

}  // namespace

std::string serialize_annotated(const Document& doc, const LabelMap& labels, const AnnotateOptions& options) {
  check_labels(doc, labels);
  std::string out;
  out.reserve(doc.raw_length + 64);
  write_element(doc, 0, labels, options.outline, out);
  return out;
}

std::string outer_html(const Document& doc, NodeId id, const LabelMap& labels) {
  if (!doc.contains(id)) throw Error(ErrorKind::UnknownNodeId, "no element with id " + std::to_string(id));
  check_labels(doc, labels);
  std::string out;
  write_element(doc, id, labels, false, out);
  return out;
}

}  // namespace pagesift::dom
