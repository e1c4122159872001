#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string_view>

namespace pagesift {

using NodeId = std::uint32_t;

// Ground-truth and predicted class of one element.
enum class Label { R, NR };

constexpr std::string_view to_string(Label label) noexcept {
  return label == Label::R ? "R" : "NR";
}

constexpr std::optional<Label> parse_label(std::string_view text) noexcept {
  if (text == "R") return Label::R;
  if (text == "NR") return Label::NR;
  return std::nullopt;
}

using LabelMap = std::map<NodeId, Label>;

}  // namespace pagesift
