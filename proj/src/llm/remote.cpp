#include "cradle/llm/remote.hpp"

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <thread>

#include "cradle/core/error.hpp"
#include "cradle/core/hash.hpp"
#include "cradle/core/png.hpp"
#include "httplib.h"
#include "nlohmann/json.hpp"

namespace cradle::llm {

using nlohmann::json;

RemoteProvider::RemoteProvider(RemoteConfig config, Sleeper sleeper)
    : config_(std::move(config)), sleeper_(std::move(sleeper)) {
  if (config_.api_key.empty()) {
    if (const char* key = std::getenv(kProviderKeyEnvVar)) config_.api_key = key;
  }
  if (!sleeper_) {
    sleeper_ = [](double seconds) {
      std::this_thread::sleep_for(std::chrono::duration<double>(seconds));
    };
  }
}

std::string RemoteProvider::chat_payload(const CompletionRequest& req) const {
  json messages = json::array();
  for (const auto& m : req.messages) {
    json content = json::array();
    for (const auto& p : m.parts) {
      if (const auto* t = std::get_if<TextPart>(&p)) {
        content.push_back({{"type", "text"}, {"text", t->text}});
      } else {
        const auto& img = std::get<ImagePart>(p);
        std::string b64 = base64_encode(encode_png(img.image));
        content.push_back(
            {{"type", "image_url"},
             {"image_url",
              {{"url", "data:image/png;base64," + b64}, {"detail", img.detail}}}});
      }
    }
    messages.push_back({{"role", role_name(m.role)}, {"content", content}});
  }
  json payload = {{"model", req.model},
                  {"messages", messages},
                  {"temperature", req.temperature},
                  {"max_tokens", req.max_tokens}};
  return payload.dump();
}

RemoteProvider::HttpResult RemoteProvider::post_with_retry(
    const std::string& path, const std::string& payload) {
  httplib::Client client(config_.base_url);
  client.set_connection_timeout(config_.timeout_seconds, 0);
  client.set_read_timeout(config_.timeout_seconds, 0);
  httplib::Headers headers;
  if (!config_.api_key.empty())
    headers.emplace("Authorization", "Bearer " + config_.api_key);

  HttpResult result;
  double backoff = 1.0;
  for (int attempt = 0; attempt <= config_.max_retries; ++attempt) {
    if (attempt > 0) {
      sleeper_(backoff);
      backoff *= 2.0;
    }
    auto res = client.Post(path, headers, payload, "application/json");
    if (!res) {
      result.transport_error = true;
      result.status = 0;
      continue;  // retry transport failures
    }
    result.transport_error = false;
    result.status = res->status;
    result.body = res->body;
    bool transient = res->status == 429 || res->status >= 500;
    if (!transient) return result;
  }
  return result;
}

std::string RemoteProvider::complete(const CompletionRequest& req) {
  check_request(req);
  HttpResult res = post_with_retry(config_.chat_path, chat_payload(req));
  if (res.transport_error)
    raise(errc::timeout, "transport failure talking to " + config_.base_url);
  if (res.status == 429)
    raise(errc::rate_limited, "rate limited after retries");
  if (res.status < 200 || res.status >= 300)
    raise(errc::provider_failure,
          "HTTP " + std::to_string(res.status) + ": " + res.body);

  json j = json::parse(res.body, nullptr, false);
  if (j.is_discarded())
    raise(errc::malformed_response, "response is not JSON");
  try {
    return j.at("choices").at(0).at("message").at("content").get<std::string>();
  } catch (const json::exception&) {
    raise(errc::malformed_response, "response lacks choices[0].message.content");
  }
}

std::vector<std::vector<double>> RemoteProvider::embed(
    const std::vector<std::string>& texts) {
  if (texts.empty()) raise(errc::provider_failure, "embed of empty batch");
  json payload = {{"model", config_.embed_model}, {"input", texts}};
  HttpResult res = post_with_retry(config_.embeddings_path, payload.dump());
  if (res.transport_error)
    raise(errc::timeout, "transport failure talking to " + config_.base_url);
  if (res.status == 429) raise(errc::rate_limited, "rate limited after retries");
  if (res.status < 200 || res.status >= 300)
    raise(errc::provider_failure, "HTTP " + std::to_string(res.status));

  json j = json::parse(res.body, nullptr, false);
  if (j.is_discarded()) raise(errc::malformed_response, "response is not JSON");
  std::vector<std::vector<double>> out;
  try {
    for (const auto& item : j.at("data")) {
      auto v = item.at("embedding").get<std::vector<double>>();
      double norm = 0;
      for (double x : v) norm += x * x;
      norm = std::sqrt(norm);
      if (norm > 0)
        for (auto& x : v) x /= norm;
      out.push_back(std::move(v));
    }
  } catch (const json::exception&) {
    raise(errc::malformed_response, "response lacks data[].embedding");
  }
  if (out.size() != texts.size())
    raise(errc::malformed_response, "embedding count mismatch");
  return out;
}

}  // namespace cradle::llm
