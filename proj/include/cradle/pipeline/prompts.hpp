#pragma once

#include <map>
#include <string>
#include <vector>

#include "cradle/llm/provider.hpp"

namespace cradle::pipeline {

/// Prompt template: plain text with `{name}` placeholders and
/// `<image:slot>` markers that expand into image parts.
class PromptTemplate {
 public:
  static PromptTemplate parse(const std::string& text);
  static PromptTemplate load(const std::string& path);

  /// Renders into message parts; each image slot pulls from `images` (one
  /// slot may expand to several images, e.g. reflection frames).
  std::vector<llm::Part> render(
      const std::map<std::string, std::string>& vars,
      const std::map<std::string, std::vector<Image>>& images) const;

  const std::vector<std::string>& placeholders() const { return placeholders_; }

 private:
  struct Segment {
    enum class Kind { literal, variable, image };
    Kind kind;
    std::string value;
  };
  std::vector<Segment> segments_;
  std::vector<std::string> placeholders_;
};

/// One reasoning stage's prompt plus the schema its response must follow.
struct StagePrompt {
  PromptTemplate prompt;
  llm::SectionSchema schema;
};

/// All prompts a run profile references, loaded from a prompts directory:
/// <stage>.txt plus <stage>.schema.
struct PromptSet {
  StagePrompt gather_text;
  StagePrompt gather_describe;
  StagePrompt reflect;
  StagePrompt infer_task;
  StagePrompt curate;
  StagePrompt plan;
  StagePrompt toolbar_tooltip;
  StagePrompt toolbar_skill;

  static PromptSet load(const std::string& dir);
};

}  // namespace cradle::pipeline
