#pragma once

#include <deque>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "cradle/core/image.hpp"

namespace cradle::llm {

enum class Role { system, user, assistant };

const char* role_name(Role r);

struct TextPart {
  std::string text;
};

struct ImagePart {
  Image image;
  std::string detail = "auto";   // provider-side resolution hint
  std::int64_t frame_id = -1;    // observation frame reference, if any
};

using Part = std::variant<TextPart, ImagePart>;

struct Message {
  Role role = Role::user;
  std::vector<Part> parts;

  static Message text(Role role, std::string body) {
    return Message{role, {TextPart{std::move(body)}}};
  }
};

struct CompletionRequest {
  std::string model = "gpt-4o-2024-05-13";
  std::vector<Message> messages;
  double temperature = 0.0;
  int max_tokens = 1024;
};

/// Validates the Message/CompletionRequest invariants (non-empty parts,
/// images only in user messages, temperature range). Throws on violation.
void check_request(const CompletionRequest& req);

/// Stable request fingerprint: SHA-256 over model, temperature and message
/// content. Image parts contribute their decoded pixels, not encoding bytes,
/// so cassettes survive re-encodes.
std::string request_digest(const CompletionRequest& req);

/// All provider text flattened into one string (useful for routing/tests).
std::string request_text(const CompletionRequest& req);

class Provider {
 public:
  virtual ~Provider() = default;
  virtual std::string complete(const CompletionRequest& req) = 0;
  virtual std::vector<std::vector<double>> embed(const std::vector<std::string>& texts) = 0;
};

/// Deterministic text-hash embedder (unit-norm, fixed dimension).
class HashEmbedder {
 public:
  explicit HashEmbedder(int dim = 8) : dim_(dim) {}
  int dim() const { return dim_; }
  std::vector<double> embed_one(const std::string& text) const;
  std::vector<std::vector<double>> embed(const std::vector<std::string>& texts) const;

 private:
  int dim_;
};

/// Fully scripted provider: responses come from routed queues. A route
/// matches when its needle occurs in the request text; unmatched requests
/// drain the default queue. Embeddings are hash-based.
class ScriptedProvider : public Provider {
 public:
  explicit ScriptedProvider(int embed_dim = 8) : embedder_(embed_dim) {}

  void push_response(std::string response) {
    default_queue_.push_back(std::move(response));
  }
  void route(std::string needle, std::vector<std::string> responses);

  std::string complete(const CompletionRequest& req) override;
  std::vector<std::vector<double>> embed(const std::vector<std::string>& texts) override;

  std::size_t remaining() const;
  const std::vector<CompletionRequest>& seen() const { return seen_; }

 private:
  struct Route {
    std::string needle;
    std::deque<std::string> queue;
  };
  HashEmbedder embedder_;
  std::vector<Route> routes_;
  std::deque<std::string> default_queue_;
  std::vector<CompletionRequest> seen_;
};

// --- structured output sections ---

enum class FieldKind { boolean, text, list, code };

struct SectionField {
  std::string label;
  FieldKind kind = FieldKind::text;
  bool required = true;
};

struct SectionSchema {
  std::vector<SectionField> fields;

  /// Loads a `.schema` file: one `label kind [optional]` entry per line.
  static SectionSchema load(const std::string& path);
  static SectionSchema parse(const std::string& text);
};

struct SectionValues {
  std::map<std::string, bool> bools;
  std::map<std::string, std::string> texts;
  std::map<std::string, std::vector<std::string>> lists;
  std::map<std::string, std::vector<std::string>> code_blocks;

  bool get_bool(const std::string& label) const;
  const std::string& get_text(const std::string& label) const;
  const std::vector<std::string>& get_list(const std::string& label) const;
  const std::vector<std::string>& get_code(const std::string& label) const;
  bool has(const std::string& label) const;
};

/// Splits `<Label>: ...` sections per the schema. Order-insensitive; a
/// missing required field raises MissingField, a bad boolean UnparsableBool.
SectionValues parse_sections(const std::string& text, const SectionSchema& schema);

}  // namespace cradle::llm
