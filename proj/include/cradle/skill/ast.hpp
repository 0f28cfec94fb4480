#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <variant>
#include <vector>

namespace cradle::skill {

enum class ParamKind { number, string, point, label };

const char* param_kind_name(ParamKind kind);

struct Param {
  std::string name;
  ParamKind kind = ParamKind::number;
  bool operator==(const Param&) const = default;
};

struct PointVal {
  double x = 0.0;
  double y = 0.0;
  bool operator==(const PointVal&) const = default;
};

/// Runtime value of an argument. Label arguments travel as integral numbers
/// and are checked against the label kind at call sites.
using Value = std::variant<double, std::string, PointVal>;

std::string to_string(const Value& v);

struct Expr;
using ExprPtr = std::shared_ptr<Expr>;

struct NumberLit {
  double value = 0.0;
};
struct StringLit {
  std::string value;
};
struct ParamRef {
  std::string name;
};
struct PointLit {
  ExprPtr x;
  ExprPtr y;
};
struct BinOp {
  char op = '+';  // one of + - * /
  ExprPtr lhs;
  ExprPtr rhs;
};

struct Expr {
  std::variant<NumberLit, StringLit, ParamRef, PointLit, BinOp> node;
  int line = 0;
  int col = 0;
};

bool expr_equal(const Expr& a, const Expr& b);

struct Statement {
  enum class Kind { primitive, call, repeat };

  Kind kind = Kind::primitive;
  std::string target;      // primitive name or callee name
  std::vector<Expr> args;  // for primitive/call
  std::int64_t count = 0;  // for repeat
  std::vector<Statement> body;
  int line = 0;
  int col = 0;
};

bool statement_equal(const Statement& a, const Statement& b);

inline constexpr std::int64_t kMaxRepeatCount = 1000;

struct SkillScript {
  std::string name;
  std::vector<Param> params;
  std::string doc;  // mandatory, non-empty
  std::vector<Statement> body;
};

bool script_equal(const SkillScript& a, const SkillScript& b);

/// A planner-issued instantiation of a registered skill.
struct SkillCall {
  std::string name;
  std::vector<Value> args;
};

std::string to_string(const SkillCall& call);

}  // namespace cradle::skill
