#pragma once

#include "relspace/geometry.hpp"
#include "relspace/relation_models.hpp"

#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace relspace {

/// Surface strings for objects and relations, normalized to lowercase
/// single-spaced words. Construction rejects empty strings and strings that
/// contain a string of a different id of the same kind.
class GroundingCatalog {
 public:
  using NameTable = std::map<std::string, std::vector<std::string>>;

  GroundingCatalog() = default;
  GroundingCatalog(NameTable objects, NameTable relations,
                   std::map<std::string, std::string> display_names = {});

  [[nodiscard]] const NameTable& objects() const { return objects_; }
  [[nodiscard]] const NameTable& relations() const { return relations_; }
  [[nodiscard]] const std::map<std::string, std::string>& display_names() const { return display_names_; }

  /// Symbol with its display name; falls back to the first surface string.
  [[nodiscard]] RelationSymbol relation(const std::string& id) const;
  [[nodiscard]] std::vector<RelationSymbol> relation_symbols() const;

 private:
  NameTable objects_;
  NameTable relations_;
  std::map<std::string, std::string> display_names_;
};

/// Lowercases, maps punctuation to spaces and collapses whitespace.
std::string normalize_text(std::string_view text);

/// Parses a command: one relation phrase, then the first object mention is
/// the target and the remaining mentions (phrase order, repeats dropped) are
/// the references. Longest matching phrase wins on overlap.
RelationCommand ground(std::string_view command_text, const GroundingCatalog& catalog,
                       const Scene& scene);

enum class QueryKind { NoModel, InsufficientModel, Thanks };

std::string verbalize_query(QueryKind kind, const RelationSymbol& relation);

/// Renders a command from the sentence templates used to script interactions.
/// `variant` selects the verb and relation phrasing deterministically.
std::string verbalize_command(const RelationCommand& command, const GroundingCatalog& catalog,
                              std::size_t variant = 0);

/// Number of distinct sentences verbalize_command can produce for a relation.
std::size_t command_variant_count(const GroundingCatalog& catalog, const std::string& relation_id);

}  // namespace relspace
