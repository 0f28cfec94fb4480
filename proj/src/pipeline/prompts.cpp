#include "cradle/pipeline/prompts.hpp"

#include <filesystem>

#include "cradle/core/error.hpp"
#include "cradle/core/text.hpp"

namespace cradle::pipeline {
namespace fs = std::filesystem;

PromptTemplate PromptTemplate::parse(const std::string& text) {
  PromptTemplate t;
  std::string literal;
  std::size_t i = 0;
  auto flush = [&]() {
    if (!literal.empty()) {
      t.segments_.push_back({Segment::Kind::literal, literal});
      literal.clear();
    }
  };
  while (i < text.size()) {
    if (text[i] == '{') {
      auto end = text.find('}', i);
      if (end == std::string::npos) {
        literal.push_back(text[i++]);
        continue;
      }
      std::string name = text.substr(i + 1, end - i - 1);
      if (name.empty() || name.find_first_of(" \t\n") != std::string::npos) {
        // not a placeholder, keep the brace literally
        literal.push_back(text[i++]);
        continue;
      }
      flush();
      t.segments_.push_back({Segment::Kind::variable, name});
      t.placeholders_.push_back(name);
      i = end + 1;
      continue;
    }
    if (text.compare(i, 7, "<image:") == 0) {
      auto end = text.find('>', i);
      if (end != std::string::npos) {
        flush();
        t.segments_.push_back({Segment::Kind::image, text.substr(i + 7, end - i - 7)});
        i = end + 1;
        continue;
      }
    }
    literal.push_back(text[i++]);
  }
  flush();
  return t;
}

PromptTemplate PromptTemplate::load(const std::string& path) {
  return parse(read_text_file(path));
}

std::vector<llm::Part> PromptTemplate::render(
    const std::map<std::string, std::string>& vars,
    const std::map<std::string, std::vector<Image>>& images) const {
  std::vector<llm::Part> parts;
  std::string text;
  auto flush_text = [&]() {
    if (!text.empty()) {
      parts.push_back(llm::TextPart{text});
      text.clear();
    }
  };
  for (const auto& seg : segments_) {
    switch (seg.kind) {
      case Segment::Kind::literal:
        text += seg.value;
        break;
      case Segment::Kind::variable: {
        auto it = vars.find(seg.value);
        if (it == vars.end())
          raise(errc::config_error, "no value for placeholder {" + seg.value + "}");
        text += it->second;
        break;
      }
      case Segment::Kind::image: {
        auto it = images.find(seg.value);
        if (it == images.end())
          raise(errc::config_error, "no images for slot <image:" + seg.value + ">");
        flush_text();
        for (const auto& img : it->second)
          parts.push_back(llm::ImagePart{img, "auto", -1});
        break;
      }
    }
  }
  flush_text();
  if (parts.empty()) parts.push_back(llm::TextPart{""});
  return parts;
}

namespace {

StagePrompt load_stage(const fs::path& dir, const std::string& stage) {
  fs::path prompt_path = dir / (stage + ".txt");
  fs::path schema_path = dir / (stage + ".schema");
  if (!fs::exists(prompt_path))
    raise(errc::config_error, "missing prompt file: " + prompt_path.string());
  if (!fs::exists(schema_path))
    raise(errc::config_error, "missing schema file: " + schema_path.string());
  StagePrompt sp{PromptTemplate::load(prompt_path.string()),
                 llm::SectionSchema::load(schema_path.string())};
  return sp;
}

}  // namespace

PromptSet PromptSet::load(const std::string& dir) {
  fs::path d(dir);
  PromptSet set{
      load_stage(d, "gather_text"),   load_stage(d, "gather_describe"),
      load_stage(d, "reflect"),       load_stage(d, "infer_task"),
      load_stage(d, "curate"),        load_stage(d, "plan"),
      load_stage(d, "toolbar_tooltip"), load_stage(d, "toolbar_skill"),
  };
  return set;
}

}  // namespace cradle::pipeline
