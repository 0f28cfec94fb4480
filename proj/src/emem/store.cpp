#include "cradle/emem/store.hpp"

#include <sstream>

#include "cradle/core/error.hpp"
#include "cradle/core/text.hpp"

namespace cradle::emem {

std::string EpisodicRecord::digest() const {
  std::ostringstream ss;
  ss << "iter " << iteration << ": task='" << task.description << "'";
  if (!action.empty()) {
    ss << " action=";
    for (std::size_t i = 0; i < action.size(); ++i) {
      if (i) ss << "; ";
      ss << skill::to_string(action[i]);
    }
  }
  ss << " ok=" << (reflection.last_action_ok ? "yes" : "no");
  if (!reflection.failure_analysis.empty())
    ss << " analysis='" << reflection.failure_analysis << "'";
  if (!info_text.empty()) ss << " info='" << info_text << "'";
  return ss.str();
}

EpisodicStore::EpisodicStore(int k, int sentence_cap) : k_(k) {
  if (k < 1) raise(errc::config_error, "episodic k must be >= 1");
  summary_.sentence_cap = sentence_cap;
}

void EpisodicStore::append(EpisodicRecord record) {
  if (!ring_.empty() && record.iteration <= ring_.back().iteration)
    raise(errc::non_monotone_iteration,
          "iteration " + std::to_string(record.iteration) +
              " not greater than stored " + std::to_string(ring_.back().iteration));
  ring_.push_back(std::move(record));
  while (ring_.size() > static_cast<std::size_t>(k_)) ring_.pop_front();
}

std::vector<const EpisodicRecord*> EpisodicStore::recent(int n) const {
  std::vector<const EpisodicRecord*> out;
  if (n <= 0) return out;
  std::size_t count = std::min<std::size_t>(static_cast<std::size_t>(n), ring_.size());
  for (std::size_t i = ring_.size() - count; i < ring_.size(); ++i)
    out.push_back(&ring_[i]);
  return out;
}

std::string EpisodicStore::summary_prompt() const {
  std::ostringstream prompt;
  prompt << "Current long-term summary:\n";
  prompt << (summary_.text.empty() ? "(none)" : summary_.text) << "\n\n";
  prompt << "Recent interactions:\n";
  for (const auto& r : ring_) {
    if (r.iteration <= summary_.last_updated_iteration) continue;
    prompt << "- " << r.digest() << "\n";
  }
  prompt << "\nRewrite the summary, keeping tasks, entities and behaviours in "
            "time order, in at most "
         << summary_.sentence_cap << " sentences.";
  return prompt.str();
}

const LongTermSummary& EpisodicStore::update_summary(llm::Provider& provider) {
  bool fresh = false;
  for (const auto& r : ring_)
    if (r.iteration > summary_.last_updated_iteration) fresh = true;
  if (!fresh)
    raise(errc::config_error, "no records since the last summary update");

  llm::CompletionRequest req;
  req.messages.push_back(llm::Message::text(llm::Role::user, summary_prompt()));
  // on failure the old summary stays in place and the error surfaces
  std::string response = provider.complete(req);

  summary_.text = truncate_sentences(trim(response), summary_.sentence_cap);
  summary_.last_updated_iteration = ring_.back().iteration;
  return summary_;
}

}  // namespace cradle::emem
