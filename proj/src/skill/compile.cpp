#include "cradle/skill/compile.hpp"

#include <cmath>
#include <map>
#include <set>

#include "cradle/aug/ops.hpp"
#include "cradle/core/text.hpp"
#include "cradle/io/executor.hpp"

namespace cradle::skill {
namespace {

constexpr double kLabelMoveSpeed = 0.0;      // label-targeted moves are instant
constexpr double kLabelClickDuration = 0.1;  // seconds

struct PrimSpec {
  std::vector<ParamKind> kinds;
  std::size_t min_arity;                 // optional trailing args
  std::vector<std::size_t> duration_positions;
};

const std::map<std::string, PrimSpec>& prim_table() {
  using K = ParamKind;
  static const std::map<std::string, PrimSpec> table = {
      {"key_press", {{K::string, K::number}, 2, {1}}},
      {"key_hold", {{K::string}, 1, {}}},
      {"key_release", {{K::string}, 1, {}}},
      {"key_combo", {{K::string, K::number, K::string}, 2, {1}}},
      {"hotkey", {{K::string, K::number, K::string}, 2, {1}}},
      {"type_text", {{K::string, K::number}, 2, {1}}},
      {"button_click", {{K::string, K::number}, 2, {1}}},
      {"button_hold", {{K::string}, 1, {}}},
      {"button_release", {{K::string}, 1, {}}},
      {"mouse_move", {{K::point, K::number, K::string, K::string}, 3, {1}}},
      {"mouse_drag", {{K::point}, 1, {}}},
      {"scroll", {{K::number, K::number}, 2, {1}}},
      {"wait", {{K::number}, 1, {0}}},
      {"click_on_label", {{K::label}, 1, {}}},
      {"double_click_on_label", {{K::label}, 1, {}}},
      {"hover_over_label", {{K::label}, 1, {}}},
      {"mouse_drag_to_label", {{K::label}, 1, {}}},
  };
  return table;
}

ParamKind value_kind(const Value& v) {
  if (std::holds_alternative<double>(v)) return ParamKind::number;
  if (std::holds_alternative<std::string>(v)) return ParamKind::string;
  return ParamKind::point;
}

bool kind_accepts(ParamKind expected, const Value& v) {
  switch (expected) {
    case ParamKind::number:
      return std::holds_alternative<double>(v);
    case ParamKind::string:
      return std::holds_alternative<std::string>(v);
    case ParamKind::point:
      return std::holds_alternative<PointVal>(v);
    case ParamKind::label: {
      const double* d = std::get_if<double>(&v);
      return d && *d >= 1.0 && std::floor(*d) == *d;
    }
  }
  return false;
}

/// Static kind of an expression; nullopt when it depends on a param we can
/// only check against the declared kind.
std::optional<ParamKind> static_kind(const Expr& e,
                                     const std::vector<Param>& params) {
  if (std::holds_alternative<NumberLit>(e.node)) return ParamKind::number;
  if (std::holds_alternative<StringLit>(e.node)) return ParamKind::string;
  if (std::holds_alternative<PointLit>(e.node)) return ParamKind::point;
  if (const auto* ref = std::get_if<ParamRef>(&e.node)) {
    for (const auto& p : params)
      if (p.name == ref->name) return p.kind;
    return std::nullopt;  // unknown param, reported separately
  }
  return ParamKind::number;  // BinOp is numeric
}

bool kind_compatible(ParamKind expected, ParamKind actual) {
  if (expected == actual) return true;
  // labels travel as numbers; value-level checks enforce integrality
  if (expected == ParamKind::label && actual == ParamKind::number) return true;
  if (expected == ParamKind::number && actual == ParamKind::label) return true;
  return false;
}

class Evaluator {
 public:
  Evaluator(const Registry& registry, const CompileContext& ctx)
      : registry_(registry), ctx_(ctx) {}

  std::vector<io::ActionPrimitive> run(const SkillCall& call) {
    expand_call(call.name, call.args, 0);
    return std::move(out_);
  }

 private:
  using Bindings = std::map<std::string, Value>;

  void expand_call(const std::string& name, const std::vector<Value>& args,
                   int depth) {
    if (depth > 64)
      raise(errc::recursion_rejected, "call depth limit exceeded at '" + name + "'");
    if (const NativeSkill* native = registry_.find_native(name)) {
      check_args(native->params, args, name);
      auto prims = native->expand(args, ctx_);
      out_.insert(out_.end(), prims.begin(), prims.end());
      return;
    }
    const SkillScript* script = registry_.find_script(name);
    if (!script) raise(errc::unknown_callee, "unknown skill '" + name + "'");
    check_args(script->params, args, name);
    Bindings bindings;
    for (std::size_t i = 0; i < script->params.size(); ++i)
      bindings[script->params[i].name] = args[i];
    for (const auto& stmt : script->body) expand_statement(stmt, bindings, depth);
  }

  void check_args(const std::vector<Param>& params, const std::vector<Value>& args,
                  const std::string& name) {
    if (params.size() != args.size())
      raise(errc::arity_mismatch,
            "call to '" + name + "' expects " + std::to_string(params.size()) +
                " arguments, got " + std::to_string(args.size()));
    for (std::size_t i = 0; i < args.size(); ++i) {
      if (!kind_accepts(params[i].kind, args[i]))
        raise(errc::kind_mismatch,
              "argument " + std::to_string(i + 1) + " of '" + name +
                  "' must be of kind " + param_kind_name(params[i].kind));
    }
  }

  void expand_statement(const Statement& stmt, const Bindings& bindings,
                        int depth) {
    switch (stmt.kind) {
      case Statement::Kind::primitive:
        emit_primitive(stmt, bindings);
        break;
      case Statement::Kind::call: {
        std::vector<Value> args;
        args.reserve(stmt.args.size());
        for (const auto& e : stmt.args) args.push_back(eval(e, bindings));
        expand_call(stmt.target, args, depth + 1);
        break;
      }
      case Statement::Kind::repeat:
        if (stmt.count < 1 || stmt.count > kMaxRepeatCount)
          raise(errc::repeat_out_of_range, "repeat count out of range");
        for (std::int64_t i = 0; i < stmt.count; ++i)
          for (const auto& inner : stmt.body)
            expand_statement(inner, bindings, depth);
        break;
    }
  }

  Value eval(const Expr& e, const Bindings& bindings) {
    if (const auto* n = std::get_if<NumberLit>(&e.node)) return Value{n->value};
    if (const auto* s = std::get_if<StringLit>(&e.node)) return Value{s->value};
    if (const auto* ref = std::get_if<ParamRef>(&e.node)) {
      auto it = bindings.find(ref->name);
      if (it == bindings.end())
        raise(errc::unknown_callee, "unbound parameter '" + ref->name + "'");
      return it->second;
    }
    if (const auto* pt = std::get_if<PointLit>(&e.node)) {
      double x = as_number(eval(*pt->x, bindings));
      double y = as_number(eval(*pt->y, bindings));
      return Value{PointVal{x, y}};
    }
    const auto& op = std::get<BinOp>(e.node);
    double lhs = as_number(eval(*op.lhs, bindings));
    double rhs = as_number(eval(*op.rhs, bindings));
    double result = 0;
    switch (op.op) {
      case '+': result = lhs + rhs; break;
      case '-': result = lhs - rhs; break;
      case '*': result = lhs * rhs; break;
      case '/': result = lhs / rhs; break;
    }
    if (!std::isfinite(result))
      raise(errc::expression_overflow, "arithmetic produced a non-finite value");
    return Value{result};
  }

  double as_number(const Value& v) {
    const double* d = std::get_if<double>(&v);
    if (!d) raise(errc::kind_mismatch, "expected a number");
    return *d;
  }

  std::string as_string(const Value& v) {
    const std::string* s = std::get_if<std::string>(&v);
    if (!s) raise(errc::kind_mismatch, "expected a string");
    return *s;
  }

  PointVal as_point(const Value& v) {
    const PointVal* p = std::get_if<PointVal>(&v);
    if (!p) raise(errc::kind_mismatch, "expected a point");
    return *p;
  }

  Point label_centroid(double label_value) {
    int id = static_cast<int>(label_value);
    if (!ctx_.marks)
      raise(errc::label_not_found, "no mark set available for label lookup");
    const aug::Mark* mark = ctx_.marks->find(id);
    if (!mark)
      raise(errc::label_not_found, "label " + std::to_string(id) + " not in mark set");
    return aug::centroid(mark->rect);
  }

  std::vector<std::string> split_combo(const std::string& joined) {
    std::vector<std::string> keys;
    std::string cur;
    for (char c : joined) {
      if (c == '+') {
        keys.push_back(cur);
        cur.clear();
      } else {
        cur.push_back(c);
      }
    }
    keys.push_back(cur);
    return keys;
  }

  io::WaitMode wait_mode(const std::vector<Value>& args, std::size_t pos) {
    if (args.size() <= pos) return io::WaitMode::sync;
    std::string w = as_string(args[pos]);
    if (w == "sync") return io::WaitMode::sync;
    if (w == "async") return io::WaitMode::async;
    raise(errc::kind_mismatch, "wait mode must be sync or async");
  }

  void emit_primitive(const Statement& stmt, const Bindings& bindings) {
    auto it = prim_table().find(stmt.target);
    if (it == prim_table().end())
      raise(errc::unknown_callee, "unknown primitive '" + stmt.target + "'");
    const PrimSpec& spec = it->second;
    if (stmt.args.size() < spec.min_arity || stmt.args.size() > spec.kinds.size())
      raise(errc::arity_mismatch, "primitive '" + stmt.target + "' arity");

    std::vector<Value> args;
    args.reserve(stmt.args.size());
    for (const auto& e : stmt.args) args.push_back(eval(e, bindings));
    for (std::size_t i = 0; i < args.size(); ++i) {
      if (!kind_accepts(spec.kinds[i], args[i]))
        raise(errc::kind_mismatch,
              "argument " + std::to_string(i + 1) + " of '" + stmt.target + "'");
    }

    const std::string& prim = stmt.target;
    if (prim == "key_press") {
      out_.push_back(io::KeyPress{as_string(args[0]), as_number(args[1])});
    } else if (prim == "key_hold") {
      out_.push_back(io::KeyHold{as_string(args[0])});
    } else if (prim == "key_release") {
      out_.push_back(io::KeyRelease{as_string(args[0])});
    } else if (prim == "key_combo") {
      out_.push_back(io::KeyCombo{split_combo(as_string(args[0])),
                                  as_number(args[1]), wait_mode(args, 2)});
    } else if (prim == "hotkey") {
      out_.push_back(io::Hotkey{split_combo(as_string(args[0])),
                                as_number(args[1]), wait_mode(args, 2)});
    } else if (prim == "type_text") {
      out_.push_back(io::TypeText{as_string(args[0]), as_number(args[1])});
    } else if (prim == "button_click") {
      out_.push_back(io::ButtonClick{parse_button_arg(args[0]), as_number(args[1])});
    } else if (prim == "button_hold") {
      out_.push_back(io::ButtonHold{parse_button_arg(args[0])});
    } else if (prim == "button_release") {
      out_.push_back(io::ButtonRelease{parse_button_arg(args[0])});
    } else if (prim == "mouse_move") {
      PointVal pos = as_point(args[0]);
      double speed = as_number(args[1]);
      std::string mode = as_string(args[2]);
      // tween argument (args[3]) is accepted and executed as identity
      if (mode == "relative") {
        Point abs = io::resolve_coordinates(pos.x, pos.y, io::CoordMode::relative,
                                            ctx_.screen);
        out_.push_back(io::MouseMove{static_cast<double>(abs.x),
                                     static_cast<double>(abs.y), speed,
                                     io::CoordMode::absolute});
      } else if (mode == "absolute") {
        out_.push_back(io::MouseMove{pos.x, pos.y, speed, io::CoordMode::absolute});
      } else {
        raise(errc::kind_mismatch, "coords must be relative or absolute");
      }
    } else if (prim == "mouse_drag") {
      PointVal pos = as_point(args[0]);
      out_.push_back(io::MouseDrag{pos.x, pos.y});
    } else if (prim == "scroll") {
      out_.push_back(io::Scroll{static_cast<int>(as_number(args[0])),
                                as_number(args[1])});
    } else if (prim == "wait") {
      out_.push_back(io::Wait{as_number(args[0])});
    } else if (prim == "click_on_label") {
      Point c = label_centroid(as_number(args[0]));
      out_.push_back(io::MouseMove{double(c.x), double(c.y), kLabelMoveSpeed,
                                   io::CoordMode::absolute});
      out_.push_back(io::ButtonClick{io::Button::left, kLabelClickDuration});
    } else if (prim == "double_click_on_label") {
      Point c = label_centroid(as_number(args[0]));
      out_.push_back(io::MouseMove{double(c.x), double(c.y), kLabelMoveSpeed,
                                   io::CoordMode::absolute});
      out_.push_back(io::ButtonClick{io::Button::left, kLabelClickDuration});
      out_.push_back(io::ButtonClick{io::Button::left, kLabelClickDuration});
    } else if (prim == "hover_over_label") {
      Point c = label_centroid(as_number(args[0]));
      out_.push_back(io::MouseMove{double(c.x), double(c.y), kLabelMoveSpeed,
                                   io::CoordMode::absolute});
    } else if (prim == "mouse_drag_to_label") {
      Point c = label_centroid(as_number(args[0]));
      out_.push_back(io::MouseDrag{double(c.x), double(c.y)});
    } else {
      raise(errc::unknown_callee, "unhandled primitive '" + prim + "'");
    }
  }

  io::Button parse_button_arg(const Value& v) {
    auto b = io::parse_button(as_string(v));
    if (!b) raise(errc::kind_mismatch, "button must be left, middle or right");
    return *b;
  }

  const Registry& registry_;
  const CompileContext& ctx_;
  std::vector<io::ActionPrimitive> out_;
};

// --- validation ---

void collect_callees(const std::vector<Statement>& body,
                     std::set<std::string>& out) {
  for (const auto& s : body) {
    if (s.kind == Statement::Kind::call) out.insert(s.target);
    if (s.kind == Statement::Kind::repeat) collect_callees(s.body, out);
  }
}

bool reaches(const std::string& from, const std::string& target,
             const Registry& registry, std::set<std::string>& visited) {
  if (!visited.insert(from).second) return false;
  const SkillScript* script = registry.find_script(from);
  if (!script) return false;
  std::set<std::string> callees;
  collect_callees(script->body, callees);
  for (const auto& c : callees) {
    if (c == target) return true;
    if (reaches(c, target, registry, visited)) return true;
  }
  return false;
}

/// Folds literal-only numeric expressions; nullopt when params intervene.
std::optional<double> fold_literal(const Expr& e) {
  if (const auto* n = std::get_if<NumberLit>(&e.node)) return n->value;
  if (const auto* op = std::get_if<BinOp>(&e.node)) {
    auto lhs = fold_literal(*op->lhs);
    auto rhs = fold_literal(*op->rhs);
    if (!lhs || !rhs) return std::nullopt;
    switch (op->op) {
      case '+': return *lhs + *rhs;
      case '-': return *lhs - *rhs;
      case '*': return *lhs * *rhs;
      case '/': return *rhs == 0.0 ? std::nullopt : std::optional(*lhs / *rhs);
    }
  }
  return std::nullopt;
}

void validate_statements(const SkillScript& script, const Registry& registry,
                         const std::vector<Statement>& body,
                         std::vector<ValidationError>& errors,
                         double duration_ceiling) {
  for (const auto& s : body) {
    if (s.kind == Statement::Kind::repeat) {
      if (s.count < 1 || s.count > kMaxRepeatCount)
        errors.push_back({errc::repeat_out_of_range,
                          "repeat count out of range", s.line, s.col});
      validate_statements(script, registry, s.body, errors, duration_ceiling);
      continue;
    }

    if (s.kind == Statement::Kind::primitive) {
      auto it = prim_table().find(s.target);
      if (it == prim_table().end()) {
        errors.push_back({errc::unknown_callee,
                          "unknown primitive '" + s.target + "'", s.line, s.col});
        continue;
      }
      const PrimSpec& spec = it->second;
      if (s.args.size() < spec.min_arity || s.args.size() > spec.kinds.size()) {
        errors.push_back({errc::arity_mismatch,
                          "primitive '" + s.target + "' expects " +
                              std::to_string(spec.min_arity) + ".." +
                              std::to_string(spec.kinds.size()) + " arguments",
                          s.line, s.col});
        continue;
      }
      for (std::size_t i = 0; i < s.args.size(); ++i) {
        auto actual = static_kind(s.args[i], script.params);
        if (actual && !kind_compatible(spec.kinds[i], *actual)) {
          errors.push_back({errc::kind_mismatch,
                            "argument " + std::to_string(i + 1) + " of '" +
                                s.target + "' must be " +
                                param_kind_name(spec.kinds[i]),
                            s.line, s.col});
        }
        if (!actual) {
          errors.push_back({errc::unknown_callee,
                            "unknown parameter in argument " + std::to_string(i + 1),
                            s.line, s.col});
        }
      }
      for (std::size_t pos : spec.duration_positions) {
        if (pos >= s.args.size()) continue;
        if (auto v = fold_literal(s.args[pos])) {
          if (*v < 0.0 || *v > duration_ceiling)
            errors.push_back({errc::duration_out_of_range,
                              "literal duration outside [0, " +
                                  std::to_string(duration_ceiling) + "]",
                              s.line, s.col});
        }
      }
      // key/button literals are checked here so bad names fail at validation
      if ((s.target == "key_press" || s.target == "key_hold" ||
           s.target == "key_release") &&
          !s.args.empty()) {
        if (const auto* lit = std::get_if<StringLit>(&s.args[0].node)) {
          if (!io::is_canonical_key(lit->value))
            errors.push_back({errc::unknown_key,
                              "unknown key '" + lit->value + "'", s.line, s.col});
        }
      }
      if ((s.target == "key_combo" || s.target == "hotkey") && !s.args.empty()) {
        if (const auto* lit = std::get_if<StringLit>(&s.args[0].node)) {
          std::string cur;
          std::vector<std::string> keys;
          for (char c : lit->value + "+") {
            if (c == '+') {
              keys.push_back(cur);
              cur.clear();
            } else {
              cur.push_back(c);
            }
          }
          std::set<std::string> seen;
          for (const auto& k : keys) {
            if (!io::is_canonical_key(k))
              errors.push_back({errc::unknown_key, "unknown key '" + k + "'",
                                s.line, s.col});
            else if (!seen.insert(k).second)
              errors.push_back({errc::unknown_key,
                                "duplicate key '" + k + "' in combo", s.line,
                                s.col});
          }
        }
      }
      continue;
    }

    // call statement
    if (s.target == script.name) {
      errors.push_back({errc::recursion_rejected,
                        "skill '" + script.name + "' calls itself", s.line, s.col});
      continue;
    }
    auto sig = signature_of(registry, s.target);
    if (!sig) {
      errors.push_back({errc::unknown_callee,
                        "unknown callee '" + s.target + "'", s.line, s.col});
      continue;
    }
    if (sig->size() != s.args.size()) {
      errors.push_back({errc::arity_mismatch,
                        "call to '" + s.target + "' expects " +
                            std::to_string(sig->size()) + " arguments",
                        s.line, s.col});
      continue;
    }
    for (std::size_t i = 0; i < s.args.size(); ++i) {
      auto actual = static_kind(s.args[i], script.params);
      if (actual && !kind_compatible((*sig)[i], *actual)) {
        errors.push_back({errc::kind_mismatch,
                          "argument " + std::to_string(i + 1) + " of call to '" +
                              s.target + "' must be " +
                              param_kind_name((*sig)[i]),
                          s.line, s.col});
      }
      if (!actual) {
        errors.push_back({errc::unknown_callee,
                          "unknown parameter in argument " + std::to_string(i + 1),
                          s.line, s.col});
      }
    }
    // indirect recursion through the registry
    std::set<std::string> visited;
    if (reaches(s.target, script.name, registry, visited)) {
      errors.push_back({errc::recursion_rejected,
                        "call to '" + s.target + "' reaches '" + script.name +
                            "' again",
                        s.line, s.col});
    }
  }
}

}  // namespace

const SkillScript* VectorRegistry::find_script(const std::string& name) const {
  for (const auto& s : scripts_)
    if (s.name == name) return &s;
  return nullptr;
}

const NativeSkill* VectorRegistry::find_native(const std::string& name) const {
  for (const auto& n : natives_)
    if (n.name == name) return &n;
  return nullptr;
}

bool is_known_primitive(const std::string& name) {
  return prim_table().count(name) > 0;
}

std::optional<std::vector<ParamKind>> signature_of(const Registry& registry,
                                                   const std::string& name) {
  std::vector<ParamKind> kinds;
  if (const SkillScript* s = registry.find_script(name)) {
    for (const auto& p : s->params) kinds.push_back(p.kind);
    return kinds;
  }
  if (const NativeSkill* n = registry.find_native(name)) {
    for (const auto& p : n->params) kinds.push_back(p.kind);
    return kinds;
  }
  return std::nullopt;
}

std::optional<ValidationError> check_call(const Registry& registry,
                                          const SkillCall& call) {
  auto sig = signature_of(registry, call.name);
  if (!sig)
    return ValidationError{errc::unknown_callee,
                           "unknown skill '" + call.name + "'", 0, 0};
  if (sig->size() != call.args.size())
    return ValidationError{errc::arity_mismatch,
                           "call to '" + call.name + "' expects " +
                               std::to_string(sig->size()) + " arguments, got " +
                               std::to_string(call.args.size()),
                           0, 0};
  for (std::size_t i = 0; i < call.args.size(); ++i) {
    if (!kind_accepts((*sig)[i], call.args[i]))
      return ValidationError{errc::kind_mismatch,
                             "argument " + std::to_string(i + 1) + " of '" +
                                 call.name + "' must be " +
                                 param_kind_name((*sig)[i]) + ", got " +
                                 param_kind_name(value_kind(call.args[i])),
                             0, 0};
  }
  return std::nullopt;
}

std::vector<ValidationError> validate(const SkillScript& script,
                                      const Registry& registry) {
  std::vector<ValidationError> errors;

  if (registry.contains(script.name))
    errors.push_back({errc::duplicate_name,
                      "a skill named '" + script.name + "' already exists", 0, 0});
  if (trim(script.doc).empty())
    errors.push_back({errc::syntax_error, "doc must be non-empty", 0, 0});
  if (script.body.empty())
    errors.push_back({errc::syntax_error, "body must be non-empty", 0, 0});

  std::set<std::string> param_names;
  for (const auto& p : script.params) {
    if (!param_names.insert(p.name).second)
      errors.push_back({errc::syntax_error,
                        "duplicate parameter '" + p.name + "'", 0, 0});
  }

  validate_statements(script, registry, script.body, errors, 30.0);
  return errors;
}

std::vector<io::ActionPrimitive> compile(const SkillCall& call,
                                         const Registry& registry,
                                         const CompileContext& ctx) {
  Evaluator evaluator(registry, ctx);
  return evaluator.run(call);
}

}  // namespace cradle::skill
