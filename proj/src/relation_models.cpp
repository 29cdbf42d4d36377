#include "relspace/relation_models.hpp"

#include "relspace/error.hpp"

#include <algorithm>
#include <set>

namespace relspace {

const std::vector<RelationSymbol>& standard_relations() {
  static const std::vector<RelationSymbol> relations = {
      {"right_of", "right"},        {"left_of", "left"},
      {"behind", "behind"},         {"in_front_of", "in front"},
      {"on_top_of", "on top"},      {"close_to", "close"},
      {"far_from", "far"},          {"between", "between"},
      {"among", "among"},           {"closer", "closer"},
      {"farther_from", "farther"},  {"other_side_of", "other side"},
  };
  return relations;
}

const RelationSymbol& standard_relation(const std::string& id) {
  for (const auto& r : standard_relations()) {
    if (r.id == id) return r;
  }
  throw Error(ErrorKind::InvalidArgument, "unknown relation '" + id + "'");
}

void RelationCommand::validate() const {
  if (references.empty()) throw Error(ErrorKind::EmptyReferenceSet, "command has no reference objects");
  std::set<std::string> unique(references.begin(), references.end());
  if (unique.size() != references.size()) {
    throw Error(ErrorKind::InvalidArgument, "duplicate reference objects");
  }
  if (unique.contains(target)) {
    throw Error(ErrorKind::InvalidArgument, "target '" + target + "' is also a reference");
  }
}

void Demonstration::validate(const ObjectCatalog& catalog) const {
  command.validate();
  scene_before.validate(catalog);
  scene_after.validate(catalog);
  auto require = [&](const std::string& id) {
    if (!scene_before.contains(id) || !scene_after.contains(id)) {
      throw Error(ErrorKind::UnknownObject, "object '" + id + "' missing from a demonstration scene");
    }
  };
  require(command.target);
  for (const auto& ref : command.references) require(ref);
  if (!(scene_after.timestamp > scene_before.timestamp)) {
    throw Error(ErrorKind::InvalidArgument, "scene_after must be later than scene_before");
  }
}

CylCoords demonstration_to_cyl(const Demonstration& demo, const ObjectCatalog& catalog) {
  const RelationFrame frame =
      build_relation_frame(demo.scene_before, catalog, demo.command.references);
  return to_cylindrical(frame, demo.scene_after.pose(demo.command.target).position);
}

std::array<CylCoords, kAugmentationCopies + 1> augment_first_sample(const CylCoords& c, Rng& rng) {
  std::normal_distribution<double> noise(0.0, kAugmentationSigma);
  std::array<CylCoords, kAugmentationCopies + 1> out;
  out[0] = c;
  for (std::size_t i = 1; i < out.size(); ++i) {
    const double er = noise(rng);
    const double ephi = noise(rng);
    const double eh = noise(rng);
    out[i].r = std::max(0.0, c.r + er);
    out[i].phi = wrap_angle(c.phi + ephi);
    out[i].h = c.h + eh;
  }
  return out;
}

std::uint64_t augmentation_seed(std::uint64_t master, const std::string& relation_id,
                                std::size_t demo_index) {
  return derive_seed(master, {fnv1a(relation_id), static_cast<std::uint64_t>(demo_index)});
}

namespace {

void absorb(RelationModel& model, const CylCoords& c) {
  model.gaussian_acc = accumulate_gaussian(model.gaussian_acc, Vec2(c.r, c.h));
  model.vonmises_acc = accumulate_vonmises(model.vonmises_acc, c.phi);
}

// The coordinates that a sequence of demonstrations contributes, with the
// augmentation copies inserted after the first one.
std::vector<CylCoords> expand_with_augmentation(const RelationSymbol& relation,
                                                std::span<const CylCoords> samples,
                                                std::uint64_t seed) {
  std::vector<CylCoords> out;
  out.reserve(samples.size() + kAugmentationCopies);
  for (std::size_t i = 0; i < samples.size(); ++i) {
    if (i == 0) {
      Rng rng(augmentation_seed(seed, relation.id, 0));
      for (const auto& c : augment_first_sample(samples[0], rng)) out.push_back(c);
    } else {
      out.push_back(samples[i]);
    }
  }
  return out;
}

}  // namespace

RelationModel update_incremental(RelationModel model, const CylCoords& sample, std::uint64_t seed) {
  if (model.demo_count == 0) {
    Rng rng(augmentation_seed(seed, model.relation.id, 0));
    for (const auto& c : augment_first_sample(sample, rng)) absorb(model, c);
  } else {
    absorb(model, sample);
  }
  model.demo_count += 1;
  model.theta = finalize(model.gaussian_acc, model.vonmises_acc);
  return model;
}

RelationModel update_incremental(RelationModel model, const Demonstration& demo,
                                 const ObjectCatalog& catalog, std::uint64_t seed) {
  if (demo.command.relation.id != model.relation.id) {
    throw Error(ErrorKind::RelationMismatch, "demonstration of '" + demo.command.relation.id +
                                                 "' given to model of '" + model.relation.id + "'");
  }
  return update_incremental(std::move(model), demonstration_to_cyl(demo, catalog), seed);
}

RelationModel update_batch(const RelationSymbol& relation, std::span<const CylCoords> samples,
                           std::uint64_t seed) {
  if (samples.empty()) throw Error(ErrorKind::EmptySampleSet, "no samples for '" + relation.id + "'");
  const auto all = expand_with_augmentation(relation, samples, seed);

  RelationModel model;
  model.relation = relation;
  std::vector<Vec2> rh;
  std::vector<double> angles;
  rh.reserve(all.size());
  angles.reserve(all.size());
  for (const auto& c : all) {
    rh.emplace_back(c.r, c.h);
    angles.push_back(c.phi);
    absorb(model, c);
  }
  model.demo_count = samples.size();
  model.theta = CylindricalDistribution{mle_gaussian(rh), mle_vonmises(angles)};
  return model;
}

RelationModel update_batch(std::span<const Demonstration> demos, const ObjectCatalog& catalog,
                           std::uint64_t seed) {
  if (demos.empty()) throw Error(ErrorKind::EmptySampleSet, "no demonstrations");
  const RelationSymbol& relation = demos.front().command.relation;
  std::vector<CylCoords> samples;
  samples.reserve(demos.size());
  for (const auto& d : demos) {
    if (d.command.relation.id != relation.id) {
      throw Error(ErrorKind::RelationMismatch, "batch mixes '" + relation.id + "' and '" +
                                                   d.command.relation.id + "'");
    }
    samples.push_back(demonstration_to_cyl(d, catalog));
  }
  return update_batch(relation, samples, seed);
}

}  // namespace relspace
