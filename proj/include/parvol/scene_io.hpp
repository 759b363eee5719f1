#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "parvol/geom_core.hpp"

namespace parvol {

struct SceneFile {
    Scene scene;
    std::optional<StructuringBody> body;  // absent when the document has no "B"
};

/// Parses a scene document. Throws ParseError for malformed JSON and ValidationError
/// for documents that violate a geometric invariant.
SceneFile parse_scene(const std::string& text);
SceneFile load_scene(const std::string& path);

std::string scene_to_json(const Scene& scene, const std::optional<StructuringBody>& body, int indent = -1);

/// FNV-1a hash of the canonical (compact) JSON form, as 16 hex digits.
std::string scene_hash(const Scene& scene, const std::optional<StructuringBody>& body);

}  // namespace parvol
