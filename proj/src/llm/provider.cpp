#include "cradle/llm/provider.hpp"

#include <cmath>
#include <cstring>

#include "cradle/core/error.hpp"
#include "cradle/core/hash.hpp"
#include "cradle/core/text.hpp"
#include "cradle/skill/parser.hpp"

namespace cradle::llm {

const char* role_name(Role r) {
  switch (r) {
    case Role::system: return "system";
    case Role::user: return "user";
    case Role::assistant: return "assistant";
  }
  return "?";
}

void check_request(const CompletionRequest& req) {
  if (req.temperature < 0.0 || req.temperature > 2.0)
    raise(errc::config_error, "temperature must lie in [0,2]");
  for (const auto& m : req.messages) {
    if (m.parts.empty()) raise(errc::config_error, "message without parts");
    if (m.role != Role::user) {
      for (const auto& p : m.parts)
        if (std::holds_alternative<ImagePart>(p))
          raise(errc::config_error, "images are only allowed in user messages");
    }
  }
}

std::string request_digest(const CompletionRequest& req) {
  Sha256 h;
  h.update(req.model);
  h.update("\x1f");
  char temp[32];
  std::snprintf(temp, sizeof(temp), "%.6f", req.temperature);
  h.update(temp, std::strlen(temp));
  for (const auto& m : req.messages) {
    h.update("\x1e");
    h.update(role_name(m.role), std::strlen(role_name(m.role)));
    for (const auto& p : m.parts) {
      if (const auto* t = std::get_if<TextPart>(&p)) {
        h.update("\x1dT");
        h.update(t->text);
      } else {
        const auto& img = std::get<ImagePart>(p);
        h.update("\x1dI");
        int dims[2] = {img.image.width(), img.image.height()};
        h.update(dims, sizeof(dims));
        h.update(img.image.data().data(), img.image.data().size());
      }
    }
  }
  return h.hex_digest();
}

std::string request_text(const CompletionRequest& req) {
  std::string out;
  for (const auto& m : req.messages) {
    for (const auto& p : m.parts) {
      if (const auto* t = std::get_if<TextPart>(&p)) {
        out += t->text;
        out += "\n";
      }
    }
  }
  return out;
}

std::vector<double> HashEmbedder::embed_one(const std::string& text) const {
  // splitmix64 stream seeded by the text hash
  std::uint64_t state = fnv1a64(text);
  auto next = [&state]() {
    state += 0x9e3779b97f4a7c15ull;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  };
  std::vector<double> v(static_cast<std::size_t>(dim_));
  for (auto& x : v) {
    x = (static_cast<double>(next() >> 11) / 9007199254740992.0) * 2.0 - 1.0;
  }
  double norm = 0;
  for (double x : v) norm += x * x;
  norm = std::sqrt(norm);
  if (norm == 0.0) {
    v[0] = 1.0;
    return v;
  }
  for (auto& x : v) x /= norm;
  return v;
}

std::vector<std::vector<double>> HashEmbedder::embed(
    const std::vector<std::string>& texts) const {
  std::vector<std::vector<double>> out;
  out.reserve(texts.size());
  for (const auto& t : texts) out.push_back(embed_one(t));
  return out;
}

void ScriptedProvider::route(std::string needle, std::vector<std::string> responses) {
  Route r;
  r.needle = std::move(needle);
  for (auto& resp : responses) r.queue.push_back(std::move(resp));
  routes_.push_back(std::move(r));
}

std::string ScriptedProvider::complete(const CompletionRequest& req) {
  check_request(req);
  seen_.push_back(req);
  std::string text = request_text(req);
  for (auto& r : routes_) {
    if (!r.queue.empty() && text.find(r.needle) != std::string::npos) {
      std::string out = std::move(r.queue.front());
      r.queue.pop_front();
      return out;
    }
  }
  if (default_queue_.empty())
    raise(errc::provider_failure, "scripted provider exhausted");
  std::string out = std::move(default_queue_.front());
  default_queue_.pop_front();
  return out;
}

std::vector<std::vector<double>> ScriptedProvider::embed(
    const std::vector<std::string>& texts) {
  if (texts.empty()) raise(errc::provider_failure, "embed of empty batch");
  return embedder_.embed(texts);
}

std::size_t ScriptedProvider::remaining() const {
  std::size_t n = default_queue_.size();
  for (const auto& r : routes_) n += r.queue.size();
  return n;
}

SectionSchema SectionSchema::parse(const std::string& text) {
  SectionSchema schema;
  for (const auto& raw : split_lines(text)) {
    std::string line = trim(raw);
    if (line.empty() || line[0] == '#') continue;
    auto parts = split(line, ' ');
    if (parts.size() < 2)
      raise(errc::config_error, "bad schema line: " + line);
    SectionField f;
    f.label = parts[0];
    std::string kind = parts[1];
    if (kind == "bool") f.kind = FieldKind::boolean;
    else if (kind == "text") f.kind = FieldKind::text;
    else if (kind == "list") f.kind = FieldKind::list;
    else if (kind == "code") f.kind = FieldKind::code;
    else raise(errc::config_error, "unknown field kind: " + kind);
    if (parts.size() > 2 && parts[2] == "optional") f.required = false;
    schema.fields.push_back(std::move(f));
  }
  return schema;
}

SectionSchema SectionSchema::load(const std::string& path) {
  return parse(read_text_file(path));
}

bool SectionValues::has(const std::string& label) const {
  return bools.count(label) || texts.count(label) || lists.count(label) ||
         code_blocks.count(label);
}

bool SectionValues::get_bool(const std::string& label) const {
  auto it = bools.find(label);
  if (it == bools.end()) raise(errc::missing_field, "no bool field " + label);
  return it->second;
}

const std::string& SectionValues::get_text(const std::string& label) const {
  auto it = texts.find(label);
  if (it == texts.end()) raise(errc::missing_field, "no text field " + label);
  return it->second;
}

const std::vector<std::string>& SectionValues::get_list(const std::string& label) const {
  auto it = lists.find(label);
  if (it == lists.end()) raise(errc::missing_field, "no list field " + label);
  return it->second;
}

const std::vector<std::string>& SectionValues::get_code(const std::string& label) const {
  auto it = code_blocks.find(label);
  if (it == code_blocks.end()) raise(errc::missing_field, "no code field " + label);
  return it->second;
}

SectionValues parse_sections(const std::string& text, const SectionSchema& schema) {
  auto lines = split_lines(text);

  // locate the first line carrying each known label
  auto label_of_line = [&](const std::string& line) -> const SectionField* {
    for (const auto& f : schema.fields) {
      if (line.size() >= f.label.size() + 1 &&
          to_lower(line.substr(0, f.label.size())) == to_lower(f.label) &&
          line[f.label.size()] == ':')
        return &f;
    }
    return nullptr;
  };

  struct Span {
    const SectionField* field;
    std::string content;
  };
  std::vector<Span> spans;
  const SectionField* open = nullptr;
  std::string content;
  for (const auto& line : lines) {
    if (const SectionField* f = label_of_line(trim(line))) {
      if (open) spans.push_back({open, content});
      open = f;
      content = trim(line).substr(f->label.size() + 1);
      content = trim(content);
      continue;
    }
    if (open) {
      content += "\n";
      content += line;
    }
  }
  if (open) spans.push_back({open, content});

  SectionValues out;
  for (const auto& span : spans) {
    const SectionField& f = *span.field;
    std::string body = trim(span.content);
    switch (f.kind) {
      case FieldKind::boolean: {
        std::string v = to_lower(body);
        if (v == "true") out.bools[f.label] = true;
        else if (v == "false") out.bools[f.label] = false;
        else
          raise(errc::unparsable_bool,
                f.label + ": expected true/false, got '" + body + "'");
        break;
      }
      case FieldKind::text:
        out.texts[f.label] = body;
        break;
      case FieldKind::list: {
        std::vector<std::string> items;
        for (const auto& raw : split_lines(body)) {
          std::string item = trim(raw);
          if (item.empty()) continue;
          if (item[0] == '-' || item[0] == '*') item = trim(item.substr(1));
          items.push_back(item);
        }
        out.lists[f.label] = std::move(items);
        break;
      }
      case FieldKind::code:
        out.code_blocks[f.label] = skill::extract_code_blocks(body);
        break;
    }
  }

  for (const auto& f : schema.fields) {
    if (f.required && !out.has(f.label))
      raise(errc::missing_field, "missing required field '" + f.label + "'");
  }
  return out;
}

}  // namespace cradle::llm
