#pragma once

#include "relspace/geometry.hpp"
#include "relspace/planner.hpp"
#include "relspace/relation_models.hpp"

#include <string>

namespace relspace {

/// Fixed-offset placement for one of the twelve standard relations.
///
/// p_v is the mean of the reference positions (the single reference when
/// there is one) and p_u the target's position in `scene`. Offsets are the
/// formula values: 20 cm for the directional relations, 10 cm up for
/// on_top_of, 10 cm / 50 cm towards u for close_to / far_from, 10 cm from
/// the reference mid point for among.
Vec3 baseline_place(const std::string& relation_id, const Scene& scene,
                    const RelationCommand& command);

/// Runs the single baseline placement through the feasibility check. No
/// sampling and no fallback: the result has exactly one candidate.
PlanResult baseline_plan(const Scene& scene, const ObjectCatalog& catalog,
                         const RelationCommand& command, const Workspace& workspace,
                         const PlanConfig& config);

}  // namespace relspace
