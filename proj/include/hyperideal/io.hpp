#pragma once

// JSON documents read and written by the command-line tool.

#include "hyperideal/circles.hpp"
#include "hyperideal/realization.hpp"

#include <json.hpp>

#include <map>
#include <string>
#include <vector>

namespace hyperideal {

inline constexpr const char* kToolName = "hyperideal";
inline constexpr const char* kToolVersion = "1.0.0";

/// Combinatorics, ideal set and exterior angles keyed by "min-max" vertex ids.
struct CellulationDocument {
    std::vector<int> vertices;
    std::vector<std::vector<int>> faces;
    std::vector<int> ideal;
    std::map<std::string, double> angles;

    /// Throws Error(Parse) on malformed JSON or a wrong shape.
    static CellulationDocument parse(const std::string& text);
    static CellulationDocument from_json(const nlohmann::json& j);
    nlohmann::json to_json() const;
};

struct Instance {
    Cellulation sigma;
    AngleAssignation angles;
};

/// Builds the cellulation and checks ids and edge keys against it. With
/// require_angles false the angle map is ignored and every w is zero.
/// Throws Error(Parse) and the cellulation construction errors.
Instance to_instance(const CellulationDocument& doc, bool require_angles = true);
CellulationDocument to_document(const Cellulation& sigma, const AngleAssignation& a);

/// Vertex positions and classes, face cycles with outward normals, target and
/// measured angles per edge key, volume, diagnostics and tool version.
nlohmann::json realization_to_json(const Realization& r);
/// Restores sigma, vertices, targets, recorded normals and recorded angles;
/// measure_realization() on the result recomputes the latter two.
Realization realization_from_json(const nlohmann::json& j);

/// Circles with axis, radius, disk side, color and provenance (face index or
/// vertex id); arcs with circle indices, kind, edge key, product and angle.
nlohmann::json config_to_json(const CircleConfig& c, const Cellulation& sigma);
CircleConfig config_from_json(const nlohmann::json& j, const Cellulation& sigma);

/// Edge key "a-b" split into its two ids; throws Error(Parse).
std::pair<int, int> parse_edge_key(const std::string& key);

}  // namespace hyperideal
