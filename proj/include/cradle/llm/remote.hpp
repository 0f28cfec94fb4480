#pragma once

#include <functional>
#include <string>

#include "cradle/llm/provider.hpp"

namespace cradle::llm {

inline constexpr const char* kProviderKeyEnvVar = "CRADLE_PROVIDER_KEY";

struct RemoteConfig {
  std::string base_url;  // e.g. "https://api.openai.com" or a local server
  std::string chat_path = "/v1/chat/completions";
  std::string embeddings_path = "/v1/embeddings";
  std::string embed_model = "text-embedding-ada-002";
  std::string api_key;          // falls back to CRADLE_PROVIDER_KEY
  int timeout_seconds = 120;
  int max_retries = 3;          // backoff 1s, 2s, 4s before each retry
};

/// OpenAI-compatible chat-completions + embeddings client. Transient
/// failures (429, 5xx, transport errors) retry with exponential backoff;
/// the sleeper is injectable so tests never wait on wall time.
class RemoteProvider : public Provider {
 public:
  using Sleeper = std::function<void(double seconds)>;

  explicit RemoteProvider(RemoteConfig config, Sleeper sleeper = nullptr);

  std::string complete(const CompletionRequest& req) override;
  std::vector<std::vector<double>> embed(const std::vector<std::string>& texts) override;

  /// Request payload as sent on the wire (exposed for tests).
  std::string chat_payload(const CompletionRequest& req) const;

 private:
  struct HttpResult {
    int status = 0;
    std::string body;
    bool transport_error = false;
  };

  HttpResult post_with_retry(const std::string& path, const std::string& payload);

  RemoteConfig config_;
  Sleeper sleeper_;
};

}  // namespace cradle::llm
