#pragma once

#include "relspace/directional_stats.hpp"
#include "relspace/geometry.hpp"
#include "relspace/grounding.hpp"
#include "relspace/planner.hpp"
#include "relspace/relation_models.hpp"

#include <json.hpp>

#include <filesystem>
#include <string>
#include <vector>

namespace relspace {

using Json = nlohmann::json;

// JSON mappings for the file formats. Doubles are written in shortest
// round-trip form, so every value survives a write/read cycle bit-exactly.

void to_json(Json& j, const ObjectModel& m);
void from_json(const Json& j, ObjectModel& m);
void to_json(Json& j, const Scene& s);
void from_json(const Json& j, Scene& s);
void to_json(Json& j, const Aabb& b);
void from_json(const Json& j, Aabb& b);
void to_json(Json& j, const RelationCommand& c);
void from_json(const Json& j, RelationCommand& c);
void to_json(Json& j, const Demonstration& d);
void from_json(const Json& j, Demonstration& d);
void to_json(Json& j, const CylindricalDistribution& d);
void from_json(const Json& j, CylindricalDistribution& d);
void to_json(Json& j, const RelationModel& m);
void from_json(const Json& j, RelationModel& m);
void to_json(Json& j, const Workspace& w);
void from_json(const Json& j, Workspace& w);

Json vec_to_json(const Vec3& v);
Vec3 vec3_from_json(const Json& j);

/// Object catalog file: an array of {id, name, extents_m}.
ObjectCatalog catalog_from_json(const Json& j);
Json catalog_to_json(const ObjectCatalog& catalog);

/// Grounding catalog file: {objects:{id:[names]}, relations:{id:[names]}},
/// with an optional display_names:{id:name} map.
GroundingCatalog grounding_from_json(const Json& j);
Json grounding_to_json(const GroundingCatalog& catalog);

Json read_json_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);
std::string read_text_file(const std::filesystem::path& path);

std::vector<Demonstration> read_demos_jsonl(const std::filesystem::path& path);
void write_demos_jsonl(const std::filesystem::path& path, const std::vector<Demonstration>& demos);

}  // namespace relspace
