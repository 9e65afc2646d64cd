#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>

namespace vbs {

/// Enumerator order is the canonical viewpoint order used for tie-breaking.
enum class Viewpoint {
    definition,
    abbreviation,
    exemplification,
    purpose,
    synonym,
    reference,
    product,
    advantage,
    drawback,
    history,
    component,
    function,
    miscellaneous,
};

inline constexpr std::array<Viewpoint, 12> kTargetViewpoints{
    Viewpoint::definition, Viewpoint::abbreviation, Viewpoint::exemplification, Viewpoint::purpose,
    Viewpoint::synonym,    Viewpoint::reference,    Viewpoint::product,         Viewpoint::advantage,
    Viewpoint::drawback,   Viewpoint::history,      Viewpoint::component,       Viewpoint::function,
};

inline constexpr std::array<std::string_view, 13> kViewpointNames{
    "definition", "abbreviation", "exemplification", "purpose", "synonym",  "reference",    "product",
    "advantage",  "drawback",     "history",         "component", "function", "miscellaneous",
};

inline std::string_view to_string(Viewpoint v) { return kViewpointNames[static_cast<std::size_t>(v)]; }

inline std::optional<Viewpoint> parse_viewpoint(std::string_view name) {
    for (std::size_t i = 0; i < kViewpointNames.size(); ++i)
        if (kViewpointNames[i] == name) return static_cast<Viewpoint>(i);
    return std::nullopt;
}

} // namespace vbs
