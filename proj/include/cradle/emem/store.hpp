#pragma once

#include <cstdint>
#include <deque>
#include <string>
#include <vector>

#include "cradle/llm/provider.hpp"
#include "cradle/pipeline/task.hpp"
#include "cradle/skill/ast.hpp"

namespace cradle::emem {

struct EpisodicRecord {
  std::int64_t iteration = 0;
  std::vector<std::int64_t> screenshot_refs;  // frame ids
  std::string info_text;                      // gathered description
  pipeline::TaskSpec task;
  std::vector<skill::SkillCall> action;
  pipeline::ReflectionOutcome reflection;
  std::string reasoning;

  /// One-line digest used when assembling summary prompts.
  std::string digest() const;
};

struct LongTermSummary {
  std::string text;
  int sentence_cap = 8;
  std::int64_t last_updated_iteration = -1;
};

/// Short-term ring of the last k interaction records plus the recurrent
/// long-term text summary.
class EpisodicStore {
 public:
  explicit EpisodicStore(int k = 5, int sentence_cap = 8);

  int k() const { return k_; }
  std::size_t size() const { return ring_.size(); }

  /// Iterations must be strictly increasing; the oldest record is forgotten
  /// once more than k are stored.
  void append(EpisodicRecord record);

  /// The min(n, size) newest records, oldest first.
  std::vector<const EpisodicRecord*> recent(int n) const;

  const LongTermSummary& summary() const { return summary_; }

  /// Recurrent update: (old summary, records since last update) -> provider
  /// -> new summary, truncated to the sentence cap. On provider failure the
  /// old summary is kept and the error propagates.
  const LongTermSummary& update_summary(llm::Provider& provider);

  /// Prompt text the next update would send (exposed for tests/tools).
  std::string summary_prompt() const;

 private:
  int k_;
  std::deque<EpisodicRecord> ring_;
  LongTermSummary summary_;
};

}  // namespace cradle::emem
