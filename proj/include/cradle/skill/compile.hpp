#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "cradle/aug/marks.hpp"
#include "cradle/io/primitives.hpp"
#include "cradle/skill/ast.hpp"

namespace cradle::skill {

struct CompileContext {
  io::ScreenGeometry screen;
  const aug::MarkSet* marks = nullptr;  // label resolution source
  double duration_ceiling = 30.0;
};

/// Skill implemented by the runtime itself rather than by a script. The
/// composite behaviours that need internal perception (minimap following and
/// the like) register through this hook.
struct NativeSkill {
  std::string name;
  std::vector<Param> params;
  std::string doc;
  std::function<std::vector<io::ActionPrimitive>(const std::vector<Value>&,
                                                 const CompileContext&)>
      expand;
};

/// What validate/compile need to know about the surrounding skill library.
class Registry {
 public:
  virtual ~Registry() = default;
  virtual const SkillScript* find_script(const std::string& name) const = 0;
  virtual const NativeSkill* find_native(const std::string& name) const = 0;
  bool contains(const std::string& name) const {
    return find_script(name) != nullptr || find_native(name) != nullptr;
  }
};

/// Registry over plain vectors, for validation pipelines and tests.
class VectorRegistry : public Registry {
 public:
  const SkillScript* find_script(const std::string& name) const override;
  const NativeSkill* find_native(const std::string& name) const override;

  void add_script(SkillScript script) { scripts_.push_back(std::move(script)); }
  void add_native(NativeSkill native) { natives_.push_back(std::move(native)); }

 private:
  std::vector<SkillScript> scripts_;
  std::vector<NativeSkill> natives_;
};

struct ValidationError {
  errc code;
  std::string message;
  int line = 0;
  int col = 0;
};

/// Static checks against the registry: duplicate name, unknown primitive or
/// callee, arity/kind mismatches, recursion (direct or via the call graph),
/// repeat bounds and literal durations within the io ceiling. Returns the
/// issues instead of throwing.
std::vector<ValidationError> validate(const SkillScript& script,
                                      const Registry& registry);

/// True when the primitive name exists in the DSL surface.
bool is_known_primitive(const std::string& name);

/// Expected parameter kinds of a skill (script or native).
std::optional<std::vector<ParamKind>> signature_of(const Registry& registry,
                                                   const std::string& name);

/// Checks a call's arity and argument kinds against the registry entry.
std::optional<ValidationError> check_call(const Registry& registry,
                                          const SkillCall& call);

/// Inlines callee bodies depth-first, unrolls repeats, substitutes
/// parameters, resolves label arguments through ctx.marks and relative
/// points through the io-env mapping. The result contains primitives only.
std::vector<io::ActionPrimitive> compile(const SkillCall& call,
                                         const Registry& registry,
                                         const CompileContext& ctx);

}  // namespace cradle::skill
