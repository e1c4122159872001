#pragma once

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "pagesift/dom.hpp"
#include "pagesift/tags.hpp"

namespace pagesift::layout {

struct Viewport {
  int width = 1280;
  int height = 800;

  static constexpr int kMinWidth = 64;
};

/// Parses "WxH" (e.g. "1280x800"). Throws Error(InvalidViewport).
Viewport parse_viewport(std::string_view text);
void validate(const Viewport& vp);

/// Rendered geometry of one element, in CSS px from the page origin.
struct LayoutBox {
  NodeId node_id = 0;
  double x = 0;
  double y = 0;
  double width = 0;
  double height = 0;
  bool visible = false;
  Display display = Display::None;
};

// Style table of the block-flow model. Only inline `style` attributes are
// consulted; stylesheets are ignored.
namespace style {
inline constexpr double kBaseFontSize = 16.0;
inline constexpr double kLineHeightFactor = 1.25;
inline constexpr double kCharWidthFactor = 0.5;
inline constexpr double kBodyMargin = 8.0;
inline constexpr double kListIndent = 40.0;
inline constexpr double kDefaultImageSize = 150.0;

struct Margins {
  double top = 0, right = 0, bottom = 0, left = 0;
};

/// Font size a tag establishes, or `inherited` when it does not set one.
double font_size(std::string_view tag, double inherited);
Margins margins(std::string_view tag);
}  // namespace style

class LayoutTree {
 public:
  const LayoutBox& box(NodeId id) const { return boxes_.at(id); }
  std::span<const LayoutBox> boxes() const { return boxes_; }
  std::size_t size() const { return boxes_.size(); }
  double page_height() const { return boxes_.empty() ? 0.0 : boxes_.front().height; }
  const Viewport& viewport() const { return viewport_; }
  /// Visible non-whitespace characters laid out in the element's own inline
  /// runs (text reached without crossing a nested block).
  std::uint32_t owned_chars(NodeId id) const { return owned_chars_.at(id); }

 private:
  friend class LayoutEngine;
  std::vector<LayoutBox> boxes_;
  std::vector<std::uint32_t> owned_chars_;
  Viewport viewport_;
};

/// Block-flow layout of the whole document at `vp`. Total; throws
/// Error(InvalidViewport) when the viewport is below the minimum.
LayoutTree compute_layout(const dom::Document& doc, const Viewport& vp);

bool is_candidate(const LayoutTree& layout, const dom::Document& doc, NodeId id);

/// Visible block elements owning text plus visible IMGs, in document order.
std::vector<NodeId> visible_candidates(const LayoutTree& layout, const dom::Document& doc);

}  // namespace pagesift::layout
