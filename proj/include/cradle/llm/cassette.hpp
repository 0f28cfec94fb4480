#pragma once

#include <map>
#include <mutex>
#include <string>

#include "cradle/llm/provider.hpp"

namespace cradle::llm {

enum class CassetteMode {
  strict,  // miss is an error
  record,  // miss forwards to the inner provider and records the reply
};

/// Record/replay provider keyed by request digest. The file is JSON-lines of
/// {"digest": ..., "response": ...} for completions and
/// {"digest": ..., "embedding": [...]} for embeddings.
class CassetteProvider : public Provider {
 public:
  /// strict mode needs no inner provider; record mode requires one.
  CassetteProvider(std::string path, CassetteMode mode, Provider* inner = nullptr);

  std::string complete(const CompletionRequest& req) override;
  std::vector<std::vector<double>> embed(const std::vector<std::string>& texts) override;

  std::size_t entries() const;
  CassetteMode mode() const { return mode_; }

 private:
  void load_file();
  void append_line(const std::string& line);
  std::string embed_digest(const std::string& text) const;

  std::string path_;
  CassetteMode mode_;
  Provider* inner_;
  mutable std::mutex mutex_;
  std::map<std::string, std::string> responses_;
  std::map<std::string, std::vector<double>> embeddings_;
};

}  // namespace cradle::llm
