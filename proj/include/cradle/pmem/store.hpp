#pragma once

#include <map>
#include <memory>
#include <shared_mutex>
#include <string>
#include <variant>
#include <vector>

#include "cradle/llm/provider.hpp"
#include "cradle/skill/compile.hpp"

namespace cradle::pmem {

enum class SkillSource { predefined, generated, composed };

const char* skill_source_name(SkillSource s);
SkillSource parse_skill_source(const std::string& name);

struct SkillEntry {
  std::variant<skill::SkillScript, skill::NativeSkill> impl;
  std::string doc;                 // equals the script/native doc
  std::vector<double> embedding;   // unit norm, store dimension
  SkillSource source = SkillSource::generated;
  std::int64_t created_at = 0;     // iteration

  const std::string& name() const;
  bool is_native() const { return std::holds_alternative<skill::NativeSkill>(impl); }
};

struct RetrievedSkill {
  const SkillEntry* entry;
  double similarity;
};

/// Skill store with embedding retrieval. Embeddings are normalized at
/// insertion, so cosine similarity reduces to a dot product. Reads may run
/// concurrently; writes are serialized.
class SkillStore : public skill::Registry {
 public:
  explicit SkillStore(int dim);
  SkillStore(SkillStore&& other) noexcept;
  SkillStore& operator=(SkillStore&&) = delete;

  int dim() const { return dim_; }
  std::size_t size() const;
  std::vector<std::string> names() const;  // sorted

  void add(SkillEntry entry);

  /// Replaces the script of an existing entry; doc and embedding are
  /// recomputed through the provider (cache hit when the doc is unchanged).
  void update(const std::string& name, skill::SkillScript new_script,
              llm::Provider& provider);

  /// Top-k entries by cosine similarity to the task embedding, ties broken
  /// by lexicographic name.
  std::vector<RetrievedSkill> retrieve(const std::string& task_text, int k,
                                       llm::Provider& provider) const;

  const SkillEntry* find(const std::string& name) const;

  // skill::Registry
  const skill::SkillScript* find_script(const std::string& name) const override;
  const skill::NativeSkill* find_native(const std::string& name) const override;

  void persist(const std::string& path) const;
  static SkillStore load(const std::string& path);

  /// Structural equality (native entries compare by name/doc).
  bool equals(const SkillStore& other) const;

  /// Convenience: validate + embed + add a parsed script.
  void add_script(skill::SkillScript script, llm::Provider& provider,
                  SkillSource source, std::int64_t created_at);

  void add_native(skill::NativeSkill native, llm::Provider& provider,
                  std::int64_t created_at = 0);

 private:
  static std::vector<double> normalized(std::vector<double> v, int dim);

  int dim_;
  mutable std::shared_mutex mutex_;
  std::map<std::string, std::shared_ptr<SkillEntry>> entries_;
};

double cosine(const std::vector<double>& a, const std::vector<double>& b);

}  // namespace cradle::pmem
