#pragma once

#include <string>
#include <vector>

#include "cradle/skill/ast.hpp"

namespace cradle::skill {

// Grammar:
//   skill NAME "(" [param {"," param}] ")" doc STRING "{" stmt+ "}"
//   param := NAME ":" ("number"|"string"|"point"|"label")
//   stmt  := PRIM "(" args ")" ";"
//          | "call" NAME "(" args ")" ";"
//          | "repeat" INT "{" stmt+ "}"
//   expr  := term [("+"|"-"|"*"|"/") term]        (at most one operator)
//   term  := NUMBER | STRING | NAME | "(" expr "," expr ")"
// "#" starts a comment that runs to end of line.

/// Parses exactly one skill definition. Throws SyntaxError (with line/col in
/// the message) on malformed input.
SkillScript parse(const std::string& text);

/// Parses a file that may contain several skill definitions.
std::vector<SkillScript> parse_many(const std::string& text);

/// Canonical text form; parse(serialize(s)) reproduces s.
std::string serialize(const SkillScript& script);

/// Contents of every ``` fenced block tagged `skill`, in document order.
std::vector<std::string> extract_code_blocks(const std::string& llm_text);

/// Parses a planner call like `move_forward(2)` or
/// `click_at_position((10, 20))`. Arguments must be literals.
SkillCall parse_call(const std::string& text);

}  // namespace cradle::skill
