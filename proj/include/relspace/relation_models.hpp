#pragma once

#include "relspace/directional_stats.hpp"
#include "relspace/geometry.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace relspace {

struct RelationSymbol {
  std::string id;
  std::string display_name;

  friend bool operator==(const RelationSymbol&, const RelationSymbol&) = default;
};

/// The twelve relations used throughout the evaluation, in table order.
const std::vector<RelationSymbol>& standard_relations();
const RelationSymbol& standard_relation(const std::string& id);

struct RelationCommand {
  RelationSymbol relation;
  std::string target;
  std::vector<std::string> references;

  /// Throws InvalidArgument when references are empty, duplicated, or include the target.
  void validate() const;

  friend bool operator==(const RelationCommand&, const RelationCommand&) = default;
};

struct Demonstration {
  Scene scene_before;
  RelationCommand command;
  Scene scene_after;

  void validate(const ObjectCatalog& catalog) const;
};

inline constexpr double kAugmentationSigma = 1e-3;
inline constexpr std::size_t kAugmentationCopies = 2;
inline constexpr std::uint64_t kDefaultAugmentationSeed = 0x5eed5eedULL;

/// Generative model of one spatial relation. `theta` is present once at
/// least one demonstration has been absorbed; the accumulators then hold
/// demo_count + kAugmentationCopies samples.
struct RelationModel {
  RelationSymbol relation;
  GaussianAccumulator gaussian_acc;
  VonMisesAccumulator vonmises_acc;
  std::optional<CylindricalDistribution> theta;
  std::size_t demo_count = 0;
};

/// Target position after the demonstration, in the frame of the references
/// before it.
CylCoords demonstration_to_cyl(const Demonstration& demo, const ObjectCatalog& catalog);

std::array<CylCoords, kAugmentationCopies + 1> augment_first_sample(const CylCoords& c, Rng& rng);

/// Seed for the augmentation of a given demonstration of a relation.
std::uint64_t augmentation_seed(std::uint64_t master, const std::string& relation_id,
                                std::size_t demo_index);

/// Folds one cylindrical sample into the model. Reads nothing but the model
/// and the sample.
RelationModel update_incremental(RelationModel model, const CylCoords& sample,
                                 std::uint64_t seed = kDefaultAugmentationSeed);

RelationModel update_incremental(RelationModel model, const Demonstration& demo,
                                 const ObjectCatalog& catalog,
                                 std::uint64_t seed = kDefaultAugmentationSeed);

/// Re-estimates the model from all samples with a two-pass MLE. The
/// accumulators are filled too, so the result can keep learning incrementally.
RelationModel update_batch(const RelationSymbol& relation, std::span<const CylCoords> samples,
                           std::uint64_t seed = kDefaultAugmentationSeed);

RelationModel update_batch(std::span<const Demonstration> demos, const ObjectCatalog& catalog,
                           std::uint64_t seed = kDefaultAugmentationSeed);

}  // namespace relspace
