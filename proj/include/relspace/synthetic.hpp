#pragma once

#include "relspace/directional_stats.hpp"
#include "relspace/geometry.hpp"
#include "relspace/grounding.hpp"
#include "relspace/planner.hpp"
#include "relspace/relation_models.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace relspace {

/// Everything a planner needs besides the scene and the model.
struct Environment {
  ObjectCatalog catalog;
  GroundingCatalog grounding;
  Workspace workspace;
  PlanConfig config;
};

/// Kitchen-table world used by the synthetic scenarios: a 1.4 m x 1.0 m
/// table with its top at z = 0 and a dozen household box objects.
Environment default_environment();

/// Breakfast layout on the default table, used when the service starts
/// without a scene file.
Scene default_scene();

/// Per-relation ground-truth distributions the synthetic demonstrator draws
/// placements from.
const std::map<std::string, CylindricalDistribution>& default_ground_truth();

struct GenerationOptions {
  std::size_t count = 10;
  std::size_t clutter = 0;
  std::uint64_t seed = 0;
  std::size_t max_attempts = 1000;
};

/// Number of reference objects the synthetic demonstrator uses for a relation.
std::size_t reference_count(const std::string& relation_id);

/// Random initial scenes with `clutter` distractors; the target's final
/// position is drawn from `ground_truth`, mapped through the reference frame,
/// snapped onto its support and redrawn until feasible. Throws
/// InfeasibleGeneration after `max_attempts` rejected draws for one
/// demonstration.
std::vector<Demonstration> generate_synthetic_demos(const RelationSymbol& relation,
                                                    const CylindricalDistribution& ground_truth,
                                                    const Environment& env,
                                                    const GenerationOptions& options);

}  // namespace relspace
