#pragma once

#include "relspace/geometry.hpp"
#include "relspace/grounding.hpp"
#include "relspace/relation_models.hpp"

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace relspace {

struct SampleRecord {
  double captured_at = 0.0;
  Demonstration demo;
};

/// Append-only demonstrations, one entity per relation.
class SampleSegment {
 public:
  void store(const Demonstration& demo, double captured_at);
  [[nodiscard]] std::vector<Demonstration> query(const std::string& relation_id) const;
  [[nodiscard]] const std::map<std::string, std::vector<SampleRecord>>& entities() const { return entities_; }

 private:
  friend class Memory;
  std::map<std::string, std::vector<SampleRecord>> entities_;
};

struct RelationEntity {
  RelationSymbol symbol;
  std::vector<std::string> names;
  std::optional<RelationModel> model;
};

/// Prior knowledge about each relation plus its current geometric model.
class RelationSegment {
 public:
  [[nodiscard]] const RelationEntity* find(const std::string& relation_id) const;
  [[nodiscard]] const RelationModel* model(const std::string& relation_id) const;
  [[nodiscard]] const std::map<std::string, RelationEntity>& entities() const { return entities_; }

  /// Incremental update: sees the current model and the new demonstration only.
  void update(const Demonstration& demo, const ObjectCatalog& catalog, std::uint64_t seed);

  void replace_model(const std::string& relation_id, RelationModel model);

 private:
  friend class Memory;
  RelationEntity& entity(const std::string& relation_id);
  std::map<std::string, RelationEntity> entities_;
};

struct CommandRecord {
  double timestamp = 0.0;
  RelationCommand command;
};

class CommandSegment {
 public:
  void append(double timestamp, const RelationCommand& command);
  [[nodiscard]] const CommandRecord* latest() const;
  [[nodiscard]] const std::vector<CommandRecord>& records() const { return records_; }

 private:
  friend class Memory;
  std::vector<CommandRecord> records_;
};

enum class UpdateMode { Incremental, Batch };

/// The robot's long-term memory. Optionally bound to a directory, in which
/// case every mutation is written through before the call returns:
///
///   <dir>/relations.json          relation entities and models
///   <dir>/samples/<relation>.jsonl one stored demonstration per line
///   <dir>/commands.jsonl           one command per line
///   <dir>/manifest.json            CRC-32 of each file above
class Memory {
 public:
  Memory() = default;
  explicit Memory(const std::vector<RelationSymbol>& relations,
                  std::uint64_t augmentation_seed = kDefaultAugmentationSeed);
  Memory(const GroundingCatalog& catalog, std::uint64_t augmentation_seed = kDefaultAugmentationSeed);

  [[nodiscard]] const SampleSegment& samples() const { return samples_; }
  [[nodiscard]] const RelationSegment& relations() const { return relations_; }
  [[nodiscard]] const CommandSegment& commands() const { return commands_; }
  [[nodiscard]] std::uint64_t augmentation_seed() const { return augmentation_seed_; }

  void store_sample(const Demonstration& demo);
  [[nodiscard]] std::vector<Demonstration> query_samples(const std::string& relation_id) const;
  void record_command(double timestamp, const RelationCommand& command);

  /// Stores the demonstration, then updates the relation's model. In batch
  /// mode the model is re-estimated from every stored sample.
  void learn(const Demonstration& demo, const ObjectCatalog& catalog,
             UpdateMode mode = UpdateMode::Incremental);

  [[nodiscard]] const RelationModel* model(const std::string& relation_id) const {
    return relations_.model(relation_id);
  }
  [[nodiscard]] std::size_t demo_count(const std::string& relation_id) const;

  void snapshot(const std::filesystem::path& dir) const;
  static Memory restore(const std::filesystem::path& dir);

  /// Writes a full snapshot to `dir` and keeps it current from now on.
  void bind(const std::filesystem::path& dir);
  [[nodiscard]] const std::optional<std::filesystem::path>& bound_directory() const { return root_; }

  /// CRC-32 over the serialized segments.
  [[nodiscard]] std::uint32_t fingerprint() const;

  friend bool operator==(const Memory& a, const Memory& b);

 private:
  [[nodiscard]] std::map<std::string, std::string> serialize() const;
  void persist(const std::string& relative_path, const std::string& content, bool append);

  SampleSegment samples_;
  RelationSegment relations_;
  CommandSegment commands_;
  std::uint64_t augmentation_seed_ = kDefaultAugmentationSeed;
  std::optional<std::filesystem::path> root_;
  std::map<std::string, std::uint32_t> manifest_;
};

}  // namespace relspace
