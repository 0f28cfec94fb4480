#include "cradle/skill/ast.hpp"

#include <sstream>

namespace cradle::skill {

const char* param_kind_name(ParamKind kind) {
  switch (kind) {
    case ParamKind::number: return "number";
    case ParamKind::string: return "string";
    case ParamKind::point: return "point";
    case ParamKind::label: return "label";
  }
  return "?";
}

namespace {

std::string format_number(double v) {
  std::ostringstream ss;
  ss.precision(15);
  ss << v;
  return ss.str();
}

}  // namespace

std::string to_string(const Value& v) {
  if (const auto* d = std::get_if<double>(&v)) return format_number(*d);
  if (const auto* s = std::get_if<std::string>(&v)) return "\"" + *s + "\"";
  const auto& p = std::get<PointVal>(v);
  return "(" + format_number(p.x) + ", " + format_number(p.y) + ")";
}

bool expr_equal(const Expr& a, const Expr& b) {
  if (a.node.index() != b.node.index()) return false;
  if (const auto* n = std::get_if<NumberLit>(&a.node))
    return n->value == std::get<NumberLit>(b.node).value;
  if (const auto* s = std::get_if<StringLit>(&a.node))
    return s->value == std::get<StringLit>(b.node).value;
  if (const auto* p = std::get_if<ParamRef>(&a.node))
    return p->name == std::get<ParamRef>(b.node).name;
  if (const auto* pt = std::get_if<PointLit>(&a.node)) {
    const auto& other = std::get<PointLit>(b.node);
    return expr_equal(*pt->x, *other.x) && expr_equal(*pt->y, *other.y);
  }
  const auto& op = std::get<BinOp>(a.node);
  const auto& other = std::get<BinOp>(b.node);
  return op.op == other.op && expr_equal(*op.lhs, *other.lhs) &&
         expr_equal(*op.rhs, *other.rhs);
}

bool statement_equal(const Statement& a, const Statement& b) {
  if (a.kind != b.kind || a.target != b.target || a.count != b.count) return false;
  if (a.args.size() != b.args.size() || a.body.size() != b.body.size())
    return false;
  for (std::size_t i = 0; i < a.args.size(); ++i)
    if (!expr_equal(a.args[i], b.args[i])) return false;
  for (std::size_t i = 0; i < a.body.size(); ++i)
    if (!statement_equal(a.body[i], b.body[i])) return false;
  return true;
}

bool script_equal(const SkillScript& a, const SkillScript& b) {
  if (a.name != b.name || a.doc != b.doc || a.params != b.params) return false;
  if (a.body.size() != b.body.size()) return false;
  for (std::size_t i = 0; i < a.body.size(); ++i)
    if (!statement_equal(a.body[i], b.body[i])) return false;
  return true;
}

std::string to_string(const SkillCall& call) {
  std::string out = call.name + "(";
  for (std::size_t i = 0; i < call.args.size(); ++i) {
    if (i) out += ", ";
    out += to_string(call.args[i]);
  }
  return out + ")";
}

}  // namespace cradle::skill
