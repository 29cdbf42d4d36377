#include "relspace/memory.hpp"

#include "relspace/error.hpp"
#include "relspace/serialization.hpp"

#include <zlib.h>

#include <fstream>
#include <sstream>

namespace relspace {
namespace {

namespace fs = std::filesystem;

constexpr int kSnapshotFormat = 1;

std::uint32_t crc_of(const std::string& data, std::uint32_t crc = 0) {
  return static_cast<std::uint32_t>(
      ::crc32(crc, reinterpret_cast<const Bytef*>(data.data()), static_cast<uInt>(data.size())));
}

std::string samples_path(const std::string& relation_id) { return "samples/" + relation_id + ".jsonl"; }

std::string sample_line(const SampleRecord& record) {
  return Json{{"captured_at", record.captured_at}, {"demo", record.demo}}.dump() + "\n";
}

std::string command_line(const CommandRecord& record) {
  return Json{{"timestamp", record.timestamp}, {"command", record.command}}.dump() + "\n";
}

std::vector<Json> parse_lines(const std::string& text) {
  std::vector<Json> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) {
    if (!line.empty()) out.push_back(Json::parse(line));
  }
  return out;
}

[[noreturn]] void corrupt(const std::string& what) { throw Error(ErrorKind::CorruptSnapshot, what); }

}  // namespace

void SampleSegment::store(const Demonstration& demo, double captured_at) {
  entities_[demo.command.relation.id].push_back({captured_at, demo});
}

std::vector<Demonstration> SampleSegment::query(const std::string& relation_id) const {
  std::vector<Demonstration> out;
  auto it = entities_.find(relation_id);
  if (it == entities_.end()) return out;
  out.reserve(it->second.size());
  for (const auto& record : it->second) out.push_back(record.demo);
  return out;
}

const RelationEntity* RelationSegment::find(const std::string& relation_id) const {
  auto it = entities_.find(relation_id);
  return it == entities_.end() ? nullptr : &it->second;
}

const RelationModel* RelationSegment::model(const std::string& relation_id) const {
  const auto* e = find(relation_id);
  return e != nullptr && e->model ? &*e->model : nullptr;
}

RelationEntity& RelationSegment::entity(const std::string& relation_id) {
  auto [it, inserted] = entities_.try_emplace(relation_id);
  if (inserted) it->second.symbol = {relation_id, relation_id};
  return it->second;
}

void RelationSegment::update(const Demonstration& demo, const ObjectCatalog& catalog, std::uint64_t seed) {
  RelationEntity& e = entity(demo.command.relation.id);
  RelationModel current;
  if (e.model) {
    current = *e.model;
  } else {
    current.relation = e.symbol;
  }
  e.model = update_incremental(std::move(current), demo, catalog, seed);
}

void RelationSegment::replace_model(const std::string& relation_id, RelationModel model) {
  entity(relation_id).model = std::move(model);
}

void CommandSegment::append(double timestamp, const RelationCommand& command) {
  records_.push_back({timestamp, command});
}

const CommandRecord* CommandSegment::latest() const {
  return records_.empty() ? nullptr : &records_.back();
}

Memory::Memory(const std::vector<RelationSymbol>& relations, std::uint64_t augmentation_seed)
    : augmentation_seed_(augmentation_seed) {
  for (const auto& symbol : relations) {
    RelationEntity& e = relations_.entity(symbol.id);
    e.symbol = symbol;
  }
}

Memory::Memory(const GroundingCatalog& catalog, std::uint64_t augmentation_seed)
    : Memory(catalog.relation_symbols(), augmentation_seed) {
  for (const auto& [id, names] : catalog.relations()) relations_.entity(id).names = names;
}

void Memory::store_sample(const Demonstration& demo) {
  demo.command.validate();
  if (!(demo.scene_after.timestamp > demo.scene_before.timestamp)) {
    throw Error(ErrorKind::InvalidArgument, "scene_after must be later than scene_before");
  }
  SampleRecord record{demo.scene_after.timestamp, demo};
  samples_.store(demo, record.captured_at);
  if (root_) persist(samples_path(demo.command.relation.id), sample_line(record), true);
}

std::vector<Demonstration> Memory::query_samples(const std::string& relation_id) const {
  return samples_.query(relation_id);
}

void Memory::record_command(double timestamp, const RelationCommand& command) {
  CommandRecord record{timestamp, command};
  commands_.append(timestamp, command);
  if (root_) persist("commands.jsonl", command_line(record), true);
}

void Memory::learn(const Demonstration& demo, const ObjectCatalog& catalog, UpdateMode mode) {
  demo.validate(catalog);
  store_sample(demo);
  const std::string& id = demo.command.relation.id;
  if (mode == UpdateMode::Incremental) {
    relations_.update(demo, catalog, augmentation_seed_);
  } else {
    RelationModel model = update_batch(query_samples(id), catalog, augmentation_seed_);
    model.relation = relations_.entity(id).symbol;
    relations_.replace_model(id, std::move(model));
  }
  if (root_) persist("relations.json", serialize().at("relations.json"), false);
}

std::size_t Memory::demo_count(const std::string& relation_id) const {
  const auto* m = model(relation_id);
  return m != nullptr ? m->demo_count : 0;
}

std::map<std::string, std::string> Memory::serialize() const {
  std::map<std::string, std::string> files;

  Json relations = Json::array();
  for (const auto& [id, e] : relations_.entities()) {
    relations.push_back({{"id", id},
                         {"display_name", e.symbol.display_name},
                         {"names", e.names},
                         {"model", e.model ? Json(*e.model) : Json(nullptr)}});
  }
  files["relations.json"] =
      Json{{"augmentation_seed", augmentation_seed_}, {"relations", std::move(relations)}}.dump(2) + "\n";

  std::string commands;
  for (const auto& record : commands_.records()) commands += command_line(record);
  files["commands.jsonl"] = std::move(commands);

  for (const auto& [id, records] : samples_.entities()) {
    std::string text;
    for (const auto& record : records) text += sample_line(record);
    files[samples_path(id)] = std::move(text);
  }
  return files;
}

void Memory::snapshot(const fs::path& dir) const {
  try {
    fs::create_directories(dir);
    fs::remove_all(dir / "samples");
    Json manifest{{"format", kSnapshotFormat}, {"files", Json::object()}};
    for (const auto& [path, content] : serialize()) {
      write_text_file(dir / path, content);
      manifest["files"][path] = crc_of(content);
    }
    write_text_file(dir / "manifest.json", manifest.dump(2) + "\n");
  } catch (const fs::filesystem_error& e) {
    throw Error(ErrorKind::StorageFailure, e.what());
  }
}

Memory Memory::restore(const fs::path& dir) {
  if (!fs::is_directory(dir)) throw Error(ErrorKind::StorageFailure, "'" + dir.string() + "' is not a directory");
  if (!fs::exists(dir / "manifest.json")) corrupt("missing manifest.json");

  Memory memory;
  try {
    const Json manifest = Json::parse(read_text_file(dir / "manifest.json"));
    if (manifest.value("format", 0) != kSnapshotFormat) corrupt("unsupported snapshot format");

    std::map<std::string, std::string> files;
    for (const auto& [path, crc] : manifest.at("files").items()) {
      if (!fs::exists(dir / path)) corrupt("missing " + path);
      std::string content = read_text_file(dir / path);
      if (crc_of(content) != crc.get<std::uint32_t>()) corrupt("checksum mismatch in " + path);
      files.emplace(path, std::move(content));
    }
    if (!files.contains("relations.json")) corrupt("manifest lists no relations.json");

    const Json relations = Json::parse(files.at("relations.json"));
    memory.augmentation_seed_ = relations.at("augmentation_seed").get<std::uint64_t>();
    for (const auto& item : relations.at("relations")) {
      RelationEntity& e = memory.relations_.entity(item.at("id").get<std::string>());
      e.symbol.display_name = item.at("display_name").get<std::string>();
      e.names = item.at("names").get<std::vector<std::string>>();
      if (!item.at("model").is_null()) e.model = item.at("model").get<RelationModel>();
    }

    if (auto it = files.find("commands.jsonl"); it != files.end()) {
      for (const auto& line : parse_lines(it->second)) {
        memory.commands_.append(line.at("timestamp").get<double>(), line.at("command").get<RelationCommand>());
      }
    }
    for (const auto& [path, content] : files) {
      if (!path.starts_with("samples/")) continue;
      for (const auto& line : parse_lines(content)) {
        const auto demo = line.at("demo").get<Demonstration>();
        memory.samples_.store(demo, line.at("captured_at").get<double>());
      }
    }
  } catch (const Json::exception& e) {
    corrupt(e.what());
  }
  return memory;
}

void Memory::bind(const fs::path& dir) {
  snapshot(dir);
  root_ = dir;
  manifest_.clear();
  for (const auto& [path, content] : serialize()) manifest_[path] = crc_of(content);
}

void Memory::persist(const std::string& relative_path, const std::string& content, bool append) {
  const fs::path path = *root_ / relative_path;
  try {
    fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary | (append ? std::ios::app : std::ios::trunc));
    if (!out) throw Error(ErrorKind::StorageFailure, "cannot open '" + path.string() + "'");
    out << content;
    out.flush();
    if (!out) throw Error(ErrorKind::StorageFailure, "write to '" + path.string() + "' failed");
  } catch (const fs::filesystem_error& e) {
    throw Error(ErrorKind::StorageFailure, e.what());
  }
  auto& crc = manifest_[relative_path];
  crc = append ? crc_of(content, crc) : crc_of(content);

  Json manifest{{"format", kSnapshotFormat}, {"files", Json::object()}};
  for (const auto& [p, c] : manifest_) manifest["files"][p] = c;
  write_text_file(*root_ / "manifest.json", manifest.dump(2) + "\n");
}

std::uint32_t Memory::fingerprint() const {
  std::uint32_t crc = 0;
  for (const auto& [path, content] : serialize()) {
    crc = crc_of(path, crc);
    crc = crc_of(content, crc);
  }
  return crc;
}

bool operator==(const Memory& a, const Memory& b) {
  return a.augmentation_seed_ == b.augmentation_seed_ && a.serialize() == b.serialize();
}

}  // namespace relspace
