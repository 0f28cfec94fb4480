#include "cradle/pmem/store.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <mutex>
#include <sstream>

#include "cradle/core/hash.hpp"
#include "cradle/core/text.hpp"
#include "cradle/skill/parser.hpp"

namespace cradle::pmem {
namespace {

constexpr const char* kHeaderPrefix = "skillstore v1 dim=";

std::string encode_embedding(const std::vector<double>& v) {
  std::vector<std::uint8_t> bytes(v.size() * sizeof(double));
  std::memcpy(bytes.data(), v.data(), bytes.size());
  return base64_encode(bytes);
}

std::vector<double> decode_embedding(const std::string& text, int dim) {
  auto bytes = base64_decode(text);
  if (bytes.size() != static_cast<std::size_t>(dim) * sizeof(double))
    raise(errc::corrupt_entry, "embedding payload has wrong size");
  std::vector<double> v(static_cast<std::size_t>(dim));
  std::memcpy(v.data(), bytes.data(), bytes.size());
  return v;
}

std::string serialize_params(const std::vector<skill::Param>& params) {
  std::string out;
  for (std::size_t i = 0; i < params.size(); ++i) {
    if (i) out += ",";
    out += params[i].name;
    out += ":";
    out += skill::param_kind_name(params[i].kind);
  }
  return out;
}

std::vector<skill::Param> parse_params(const std::string& text) {
  std::vector<skill::Param> params;
  if (trim(text).empty()) return params;
  for (const auto& piece : split(text, ',')) {
    auto kv = split(piece, ':');
    if (kv.size() != 2) raise(errc::corrupt_entry, "bad native params: " + text);
    skill::Param p;
    p.name = kv[0];
    if (kv[1] == "number") p.kind = skill::ParamKind::number;
    else if (kv[1] == "string") p.kind = skill::ParamKind::string;
    else if (kv[1] == "point") p.kind = skill::ParamKind::point;
    else if (kv[1] == "label") p.kind = skill::ParamKind::label;
    else raise(errc::corrupt_entry, "bad param kind: " + kv[1]);
    params.push_back(std::move(p));
  }
  return params;
}

}  // namespace

const char* skill_source_name(SkillSource s) {
  switch (s) {
    case SkillSource::predefined: return "predefined";
    case SkillSource::generated: return "generated";
    case SkillSource::composed: return "composed";
  }
  return "?";
}

SkillSource parse_skill_source(const std::string& name) {
  if (name == "predefined") return SkillSource::predefined;
  if (name == "generated") return SkillSource::generated;
  if (name == "composed") return SkillSource::composed;
  raise(errc::corrupt_entry, "unknown skill source: " + name);
}

const std::string& SkillEntry::name() const {
  if (const auto* s = std::get_if<skill::SkillScript>(&impl)) return s->name;
  return std::get<skill::NativeSkill>(impl).name;
}

double cosine(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size())
    raise(errc::dimension_mismatch, "cosine of different dimensions");
  double dot = 0, na = 0, nb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  if (na == 0.0 || nb == 0.0) return 0.0;
  return dot / (std::sqrt(na) * std::sqrt(nb));
}

SkillStore::SkillStore(int dim) : dim_(dim) {
  if (dim <= 0) raise(errc::config_error, "embedding dimension must be positive");
}

SkillStore::SkillStore(SkillStore&& other) noexcept : dim_(other.dim_) {
  std::unique_lock lock(other.mutex_);
  entries_ = std::move(other.entries_);
}

std::vector<double> SkillStore::normalized(std::vector<double> v, int dim) {
  if (static_cast<int>(v.size()) != dim)
    raise(errc::dimension_mismatch,
          "embedding has dimension " + std::to_string(v.size()) + ", store uses " +
              std::to_string(dim));
  double norm = 0;
  for (double x : v) norm += x * x;
  norm = std::sqrt(norm);
  if (norm == 0.0)
    raise(errc::dimension_mismatch, "zero embedding cannot be normalized");
  for (auto& x : v) x /= norm;
  return v;
}

std::size_t SkillStore::size() const {
  std::shared_lock lock(mutex_);
  return entries_.size();
}

std::vector<std::string> SkillStore::names() const {
  std::shared_lock lock(mutex_);
  std::vector<std::string> out;
  out.reserve(entries_.size());
  for (const auto& [name, _] : entries_) out.push_back(name);
  return out;
}

void SkillStore::add(SkillEntry entry) {
  entry.embedding = normalized(std::move(entry.embedding), dim_);
  std::unique_lock lock(mutex_);
  const std::string name = entry.name();  // copy; the entry is moved below
  if (entries_.count(name))
    raise(errc::duplicate_name, "skill '" + name + "' already exists");
  entries_[name] = std::make_shared<SkillEntry>(std::move(entry));
}

void SkillStore::update(const std::string& name, skill::SkillScript new_script,
                        llm::Provider& provider) {
  std::shared_ptr<SkillEntry> existing;
  {
    std::shared_lock lock(mutex_);
    auto it = entries_.find(name);
    if (it == entries_.end())
      raise(errc::not_found, "skill '" + name + "' not found");
    existing = it->second;
  }
  if (new_script.name != name)
    raise(errc::config_error, "update cannot rename a skill");

  SkillEntry updated = *existing;
  bool doc_changed = new_script.doc != existing->doc;
  updated.doc = new_script.doc;
  updated.impl = std::move(new_script);
  if (doc_changed) {
    auto vectors = provider.embed({updated.doc});
    updated.embedding = normalized(vectors.at(0), dim_);
  }
  std::unique_lock lock(mutex_);
  entries_[name] = std::make_shared<SkillEntry>(std::move(updated));
}

std::vector<RetrievedSkill> SkillStore::retrieve(const std::string& task_text,
                                                 int k,
                                                 llm::Provider& provider) const {
  if (k < 1) raise(errc::config_error, "k must be >= 1");
  auto task_vectors = provider.embed({task_text});
  std::vector<double> task = normalized(task_vectors.at(0), dim_);

  std::shared_lock lock(mutex_);
  std::vector<RetrievedSkill> scored;
  scored.reserve(entries_.size());
  for (const auto& [name, entry] : entries_) {
    double dot = 0;
    for (std::size_t i = 0; i < task.size(); ++i)
      dot += task[i] * entry->embedding[i];
    scored.push_back(RetrievedSkill{entry.get(), dot});
  }
  std::stable_sort(scored.begin(), scored.end(),
                   [](const RetrievedSkill& a, const RetrievedSkill& b) {
                     if (a.similarity != b.similarity)
                       return a.similarity > b.similarity;
                     return a.entry->name() < b.entry->name();
                   });
  if (static_cast<int>(scored.size()) > k) scored.resize(static_cast<std::size_t>(k));
  return scored;
}

const SkillEntry* SkillStore::find(const std::string& name) const {
  std::shared_lock lock(mutex_);
  auto it = entries_.find(name);
  return it == entries_.end() ? nullptr : it->second.get();
}

const skill::SkillScript* SkillStore::find_script(const std::string& name) const {
  const SkillEntry* e = find(name);
  if (!e) return nullptr;
  return std::get_if<skill::SkillScript>(&e->impl);
}

const skill::NativeSkill* SkillStore::find_native(const std::string& name) const {
  const SkillEntry* e = find(name);
  if (!e) return nullptr;
  return std::get_if<skill::NativeSkill>(&e->impl);
}

void SkillStore::persist(const std::string& path) const {
  std::shared_lock lock(mutex_);
  std::ostringstream out;
  out << kHeaderPrefix << dim_ << "\n";
  for (const auto& [name, entry] : entries_) {
    out << "entry " << name << "\n";
    out << "doc " << escape_line(entry->doc) << "\n";
    out << "source " << skill_source_name(entry->source) << "\n";
    out << "created " << entry->created_at << "\n";
    out << "embedding " << encode_embedding(entry->embedding) << "\n";
    if (entry->is_native()) {
      const auto& native = std::get<skill::NativeSkill>(entry->impl);
      out << "native " << serialize_params(native.params) << "\n";
    } else {
      out << "```skill\n";
      out << skill::serialize(std::get<skill::SkillScript>(entry->impl));
      out << "```\n";
    }
  }
  write_text_file(path, out.str());
}

SkillStore SkillStore::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) raise(errc::io_error, "cannot open: " + path);
  std::string header;
  if (!std::getline(in, header) || !starts_with(header, kHeaderPrefix))
    raise(errc::format_version_mismatch, "bad store header in " + path);
  int dim = 0;
  try {
    dim = std::stoi(header.substr(std::strlen(kHeaderPrefix)));
  } catch (const std::exception&) {
    raise(errc::format_version_mismatch, "bad dimension in header");
  }
  SkillStore store(dim);

  std::string line;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    if (!starts_with(line, "entry "))
      raise(errc::corrupt_entry, "expected entry line, got: " + line);
    std::string name = line.substr(6);

    auto read_field = [&](const std::string& prefix) {
      std::string l;
      if (!std::getline(in, l) || !starts_with(l, prefix + " "))
        raise(errc::corrupt_entry, "truncated entry '" + name + "'");
      return l.substr(prefix.size() + 1);
    };

    SkillEntry entry;
    entry.doc = unescape_line(read_field("doc"));
    entry.source = parse_skill_source(read_field("source"));
    entry.created_at = std::stoll(read_field("created"));
    entry.embedding = decode_embedding(read_field("embedding"), dim);

    std::string impl_line;
    if (!std::getline(in, impl_line))
      raise(errc::corrupt_entry, "truncated entry '" + name + "'");
    if (starts_with(impl_line, "native")) {
      skill::NativeSkill native;
      native.name = name;
      native.doc = entry.doc;
      std::string params = trim(impl_line.size() > 6 ? impl_line.substr(6) : "");
      native.params = parse_params(params);
      // implementations are rebound by the runtime after load
      native.expand = [name](const std::vector<skill::Value>&,
                             const skill::CompileContext&)
          -> std::vector<io::ActionPrimitive> {
        raise(errc::not_found, "native skill '" + name + "' is not bound");
      };
      entry.impl = std::move(native);
    } else if (impl_line == "```skill") {
      std::string script_text;
      bool closed = false;
      while (std::getline(in, line)) {
        if (line == "```") {
          closed = true;
          break;
        }
        script_text += line;
        script_text += "\n";
      }
      if (!closed) raise(errc::corrupt_entry, "unterminated script block");
      entry.impl = skill::parse(script_text);
    } else {
      raise(errc::corrupt_entry, "bad impl line: " + impl_line);
    }

    store.add(std::move(entry));
  }
  return store;
}

bool SkillStore::equals(const SkillStore& other) const {
  std::shared_lock lock_a(mutex_, std::defer_lock);
  std::shared_lock lock_b(other.mutex_, std::defer_lock);
  if (this != &other) {
    lock_a.lock();
    lock_b.lock();
  }
  if (dim_ != other.dim_ || entries_.size() != other.entries_.size()) return false;
  for (const auto& [name, entry] : entries_) {
    auto it = other.entries_.find(name);
    if (it == other.entries_.end()) return false;
    const SkillEntry& b = *it->second;
    if (entry->doc != b.doc || entry->source != b.source ||
        entry->created_at != b.created_at)
      return false;
    if (entry->embedding.size() != b.embedding.size()) return false;
    for (std::size_t i = 0; i < entry->embedding.size(); ++i)
      if (std::abs(entry->embedding[i] - b.embedding[i]) > 1e-12) return false;
    if (entry->is_native() != b.is_native()) return false;
    if (!entry->is_native()) {
      if (!skill::script_equal(std::get<skill::SkillScript>(entry->impl),
                               std::get<skill::SkillScript>(b.impl)))
        return false;
    }
  }
  return true;
}

void SkillStore::add_script(skill::SkillScript script, llm::Provider& provider,
                            SkillSource source, std::int64_t created_at) {
  SkillEntry entry;
  entry.doc = script.doc;
  entry.source = source;
  entry.created_at = created_at;
  auto vectors = provider.embed({script.doc});
  entry.embedding = vectors.at(0);
  entry.impl = std::move(script);
  add(std::move(entry));
}

void SkillStore::add_native(skill::NativeSkill native, llm::Provider& provider,
                            std::int64_t created_at) {
  SkillEntry entry;
  entry.doc = native.doc;
  entry.source = SkillSource::predefined;
  entry.created_at = created_at;
  auto vectors = provider.embed({native.doc});
  entry.embedding = vectors.at(0);
  entry.impl = std::move(native);
  add(std::move(entry));
}

}  // namespace cradle::pmem
