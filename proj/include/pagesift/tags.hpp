#pragma once

#include <optional>
#include <string_view>

namespace pagesift {

enum class Display { Block, Inline, None };

/// Default display class of a known tag; nullopt for unknown tags.
std::optional<Display> default_display(std::string_view upper_tag);

bool is_void_element(std::string_view upper_tag);

/// Dense index of a known tag in the fixed tag table, nullopt if unknown.
std::optional<int> known_tag_index(std::string_view upper_tag);

}  // namespace pagesift
