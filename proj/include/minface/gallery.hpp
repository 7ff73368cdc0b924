#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "minface/surface.hpp"

namespace minface {

struct GalleryEntry {
    std::string name;
    std::string note;
    SurfaceData data;
};

/// Built-in example surfaces: enneper, enneper-conj, ce-quasiumbilic, kchange.
const std::vector<GalleryEntry>& gallery();

/// Throws Error{Spec} for an unknown name.
const GalleryEntry& gallery_entry(std::string_view name);

}  // namespace minface
