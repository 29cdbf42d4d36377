#include "relspace/grounding.hpp"

#include "relspace/error.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <set>
#include <sstream>

namespace relspace {
namespace {

std::vector<std::string> split_words(const std::string& normalized) {
  std::vector<std::string> words;
  std::istringstream in(normalized);
  for (std::string w; in >> w;) words.push_back(std::move(w));
  return words;
}

GroundingCatalog::NameTable normalize_table(GroundingCatalog::NameTable table, const char* kind) {
  for (auto& [id, names] : table) {
    if (names.empty()) {
      throw Error(ErrorKind::InvalidArgument, std::string(kind) + " '" + id + "' has no surface strings");
    }
    for (auto& name : names) {
      name = normalize_text(name);
      if (name.empty()) {
        throw Error(ErrorKind::InvalidArgument, std::string(kind) + " '" + id + "' has an empty surface string");
      }
    }
  }
  for (const auto& [id_a, names_a] : table) {
    for (const auto& [id_b, names_b] : table) {
      if (id_a == id_b) continue;
      for (const auto& a : names_a) {
        for (const auto& b : names_b) {
          if (a.find(b) != std::string::npos) {
            throw Error(ErrorKind::InvalidArgument, std::string(kind) + " name '" + a + "' of '" + id_a +
                                                        "' contains '" + b + "' of '" + id_b + "'");
          }
        }
      }
    }
  }
  return table;
}

enum class MentionKind { Object, Relation };

struct Mention {
  MentionKind kind;
  std::string id;
  std::size_t begin;
  std::size_t end;

  [[nodiscard]] std::size_t length() const { return end - begin; }
  [[nodiscard]] bool overlaps(const Mention& o) const { return begin < o.end && o.begin < end; }
};

void collect(const std::vector<std::string>& words, const GroundingCatalog::NameTable& table,
             MentionKind kind, std::vector<Mention>& out) {
  for (const auto& [id, names] : table) {
    for (const auto& name : names) {
      const auto phrase = split_words(name);
      if (phrase.empty() || phrase.size() > words.size()) continue;
      for (std::size_t i = 0; i + phrase.size() <= words.size(); ++i) {
        if (std::equal(phrase.begin(), phrase.end(), words.begin() + static_cast<std::ptrdiff_t>(i))) {
          out.push_back({kind, id, i, i + phrase.size()});
        }
      }
    }
  }
}

// Longest span wins; equal-length overlapping spans of different entities
// cannot be resolved.
std::vector<Mention> resolve_overlaps(std::vector<Mention> mentions) {
  std::stable_sort(mentions.begin(), mentions.end(), [](const Mention& a, const Mention& b) {
    if (a.length() != b.length()) return a.length() > b.length();
    return a.begin < b.begin;
  });
  std::vector<Mention> kept;
  for (const auto& m : mentions) {
    bool skip = false;
    for (const auto& k : kept) {
      if (!m.overlaps(k)) continue;
      if (k.length() == m.length() && (k.id != m.id || k.kind != m.kind)) {
        throw Error(ErrorKind::AmbiguousMatch,
                    "'" + m.id + "' and '" + k.id + "' match overlapping phrases");
      }
      skip = true;
      break;
    }
    if (!skip) kept.push_back(m);
  }
  std::sort(kept.begin(), kept.end(), [](const Mention& a, const Mention& b) { return a.begin < b.begin; });
  return kept;
}

}  // namespace

std::string normalize_text(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  bool pending_space = false;
  for (char raw : text) {
    const auto ch = static_cast<unsigned char>(raw);
    if (std::isalnum(ch) != 0) {
      if (pending_space && !out.empty()) out.push_back(' ');
      pending_space = false;
      out.push_back(static_cast<char>(std::tolower(ch)));
    } else {
      pending_space = true;
    }
  }
  return out;
}

GroundingCatalog::GroundingCatalog(NameTable objects, NameTable relations,
                                   std::map<std::string, std::string> display_names)
    : objects_(normalize_table(std::move(objects), "object")),
      relations_(normalize_table(std::move(relations), "relation")),
      display_names_(std::move(display_names)) {}

RelationSymbol GroundingCatalog::relation(const std::string& id) const {
  auto names = relations_.find(id);
  if (names == relations_.end()) throw Error(ErrorKind::InvalidArgument, "unknown relation '" + id + "'");
  auto display = display_names_.find(id);
  return {id, display != display_names_.end() ? display->second : names->second.front()};
}

std::vector<RelationSymbol> GroundingCatalog::relation_symbols() const {
  std::vector<RelationSymbol> out;
  for (const auto& [id, _] : relations_) out.push_back(relation(id));
  return out;
}

RelationCommand ground(std::string_view command_text, const GroundingCatalog& catalog,
                       const Scene& scene) {
  const auto words = split_words(normalize_text(command_text));
  if (words.empty()) throw Error(ErrorKind::NoRelationMatch, "empty command");

  std::vector<Mention> mentions;
  collect(words, catalog.relations(), MentionKind::Relation, mentions);
  collect(words, catalog.objects(), MentionKind::Object, mentions);
  mentions = resolve_overlaps(std::move(mentions));

  std::vector<std::string> relation_ids;
  std::vector<std::string> object_ids;
  for (const auto& m : mentions) {
    auto& list = m.kind == MentionKind::Relation ? relation_ids : object_ids;
    if (std::find(list.begin(), list.end(), m.id) == list.end()) list.push_back(m.id);
  }

  if (relation_ids.empty()) throw Error(ErrorKind::NoRelationMatch, "no relation phrase in command");
  if (relation_ids.size() > 1) {
    throw Error(ErrorKind::AmbiguousMatch,
                "command mentions relations '" + relation_ids[0] + "' and '" + relation_ids[1] + "'");
  }
  if (object_ids.empty()) throw Error(ErrorKind::NoTargetMatch, "no object mentioned");
  if (object_ids.size() < 2) {
    throw Error(ErrorKind::InsufficientReferences, "no reference object mentioned");
  }
  for (const auto& id : object_ids) {
    if (!scene.contains(id)) throw Error(ErrorKind::ObjectNotInScene, "object '" + id + "' is not in the scene");
  }

  RelationCommand command;
  command.relation = catalog.relation(relation_ids.front());
  command.target = object_ids.front();
  command.references.assign(object_ids.begin() + 1, object_ids.end());
  return command;
}

std::string verbalize_query(QueryKind kind, const RelationSymbol& relation) {
  switch (kind) {
    case QueryKind::NoModel:
      return "I am sorry, I don't know what '" + relation.display_name +
             "' means yet, can you show me what to do?";
    case QueryKind::InsufficientModel:
      return "Sorry, I cannot do it with my current knowledge. Can you show me what I should do?";
    case QueryKind::Thanks:
      return "Thanks, I think I now know the meaning of '" + relation.display_name + "' a bit better.";
  }
  return {};
}

namespace {
constexpr std::array<const char*, 3> kVerbs = {"Put", "Place", "Move"};
}

std::size_t command_variant_count(const GroundingCatalog& catalog, const std::string& relation_id) {
  auto it = catalog.relations().find(relation_id);
  if (it == catalog.relations().end()) throw Error(ErrorKind::InvalidArgument, "unknown relation '" + relation_id + "'");
  return kVerbs.size() * it->second.size();
}

std::string verbalize_command(const RelationCommand& command, const GroundingCatalog& catalog,
                              std::size_t variant) {
  auto object_name = [&](const std::string& id) -> const std::string& {
    auto it = catalog.objects().find(id);
    if (it == catalog.objects().end()) throw Error(ErrorKind::UnknownObject, "no name for object '" + id + "'");
    return it->second.front();
  };
  auto phrases = catalog.relations().find(command.relation.id);
  if (phrases == catalog.relations().end()) {
    throw Error(ErrorKind::InvalidArgument, "unknown relation '" + command.relation.id + "'");
  }
  const std::string& verb = kVerbs[variant % kVerbs.size()];
  const std::string& phrase = phrases->second[(variant / kVerbs.size()) % phrases->second.size()];

  std::string sentence = verb + " the " + object_name(command.target) + " " + phrase + " ";
  const auto& refs = command.references;
  for (std::size_t i = 0; i < refs.size(); ++i) {
    if (i > 0) sentence += (i + 1 == refs.size()) ? " and " : ", ";
    sentence += "the " + object_name(refs[i]);
  }
  sentence += ".";
  return sentence;
}

}  // namespace relspace
