#include "cradle/llm/cassette.hpp"

#include <filesystem>
#include <fstream>

#include "cradle/core/error.hpp"
#include "cradle/core/hash.hpp"
#include "cradle/core/text.hpp"
#include "nlohmann/json.hpp"

namespace cradle::llm {

using nlohmann::json;

CassetteProvider::CassetteProvider(std::string path, CassetteMode mode,
                                   Provider* inner)
    : path_(std::move(path)), mode_(mode), inner_(inner) {
  if (mode_ == CassetteMode::record && !inner_)
    raise(errc::config_error, "record mode needs an inner provider");
  load_file();
}

void CassetteProvider::load_file() {
  if (!std::filesystem::exists(path_)) {
    if (mode_ == CassetteMode::strict)
      raise(errc::config_error, "cassette file not found: " + path_);
    return;
  }
  std::ifstream in(path_);
  std::string line;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    json j = json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.contains("digest"))
      raise(errc::corrupt_entry, "bad cassette line in " + path_);
    std::string digest = j["digest"].get<std::string>();
    if (j.contains("response")) {
      responses_[digest] = j["response"].get<std::string>();
    } else if (j.contains("embedding")) {
      embeddings_[digest] = j["embedding"].get<std::vector<double>>();
    } else {
      raise(errc::corrupt_entry, "cassette line lacks payload in " + path_);
    }
  }
}

void CassetteProvider::append_line(const std::string& line) {
  std::ofstream out(path_, std::ios::app);
  if (!out) raise(errc::io_error, "cannot append to cassette " + path_);
  out << line << "\n";
}

std::string CassetteProvider::embed_digest(const std::string& text) const {
  Sha256 h;
  h.update("embed\x1f");
  h.update(text);
  return h.hex_digest();
}

std::string CassetteProvider::complete(const CompletionRequest& req) {
  check_request(req);
  std::string digest = request_digest(req);
  {
    std::lock_guard<std::mutex> lock(mutex_);
    auto it = responses_.find(digest);
    if (it != responses_.end()) return it->second;
  }
  if (mode_ == CassetteMode::strict)
    raise(errc::cassette_miss, "no recorded response for digest " + digest);

  std::string response = inner_->complete(req);
  {
    std::lock_guard<std::mutex> lock(mutex_);
    responses_[digest] = response;
    json j = {{"digest", digest}, {"response", response}};
    append_line(j.dump());
  }
  return response;
}

std::vector<std::vector<double>> CassetteProvider::embed(
    const std::vector<std::string>& texts) {
  std::vector<std::vector<double>> out(texts.size());
  std::vector<std::size_t> misses;
  {
    std::lock_guard<std::mutex> lock(mutex_);
    for (std::size_t i = 0; i < texts.size(); ++i) {
      auto it = embeddings_.find(embed_digest(texts[i]));
      if (it != embeddings_.end()) out[i] = it->second;
      else misses.push_back(i);
    }
  }
  if (misses.empty()) return out;
  if (mode_ == CassetteMode::strict)
    raise(errc::cassette_miss, "no recorded embedding");

  std::vector<std::string> miss_texts;
  for (auto i : misses) miss_texts.push_back(texts[i]);
  auto fresh = inner_->embed(miss_texts);
  {
    std::lock_guard<std::mutex> lock(mutex_);
    for (std::size_t k = 0; k < misses.size(); ++k) {
      out[misses[k]] = fresh[k];
      std::string digest = embed_digest(miss_texts[k]);
      embeddings_[digest] = fresh[k];
      json j = {{"digest", digest}, {"embedding", fresh[k]}};
      append_line(j.dump());
    }
  }
  return out;
}

std::size_t CassetteProvider::entries() const {
  std::lock_guard<std::mutex> lock(mutex_);
  return responses_.size() + embeddings_.size();
}

}  // namespace cradle::llm
