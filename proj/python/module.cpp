#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "cradle/aug/ops.hpp"
#include "cradle/cli/trajectory.hpp"
#include "cradle/core/png.hpp"
#include "cradle/harness/metrics.hpp"
#include "cradle/io/executor.hpp"
#include "cradle/llm/provider.hpp"
#include "cradle/obs/ops.hpp"
#include "cradle/pipeline/profile.hpp"
#include "cradle/pmem/store.hpp"
#include "cradle/skill/compile.hpp"
#include "cradle/skill/parser.hpp"

namespace py = pybind11;
using namespace cradle;

namespace {

py::dict trade_metrics_dict(const std::vector<std::tuple<double, double, double>>& items,
                            int failed) {
  harness::TradeLedger ledger;
  ledger.failed_count = failed;
  for (const auto& [b, s, v] : items)
    ledger.transactions.push_back(harness::Transaction{b, s, v});
  auto pct = harness::trade_metrics(ledger).as_percentages();
  py::dict out;
  for (const auto& [k, v] : pct) out[py::str(k)] = v;
  return out;
}

std::vector<std::string> lint_skills(const std::string& text) {
  std::vector<std::string> issues;
  try {
    auto scripts = skill::parse_many(text);
    skill::VectorRegistry registry;
    for (auto& script : scripts) {
      for (const auto& err : skill::validate(script, registry))
        issues.push_back(script.name + ": " + errc_name(err.code) + ": " +
                         err.message);
      registry.add_script(std::move(script));
    }
  } catch (const Error& e) {
    issues.push_back(e.what());
  }
  return issues;
}

std::vector<std::string> compile_skill_text(const std::string& skill_text,
                                            const std::string& call_text) {
  skill::VectorRegistry registry;
  for (auto& script : skill::parse_many(skill_text))
    registry.add_script(std::move(script));
  skill::SkillCall call = skill::parse_call(call_text);
  skill::CompileContext ctx;
  std::vector<std::string> out;
  for (const auto& prim : skill::compile(call, registry, ctx))
    out.push_back(io::to_string(prim));
  return out;
}

}  // namespace

PYBIND11_MODULE(pycradle, m) {
  m.doc() = "Python bindings for the cradle computer-control runtime";

  py::register_exception<Error>(m, "CradleError");

  m.def("version", [] { return std::string("0.1.0"); });

  // io
  m.def(
      "resolve_coordinates",
      [](double x, double y, const std::string& mode, int w, int h) {
        io::CoordMode m_ = mode == "relative" ? io::CoordMode::relative
                                              : io::CoordMode::absolute;
        Point p = io::resolve_coordinates(x, y, m_, io::ScreenGeometry{w, h});
        return py::make_tuple(p.x, p.y);
      },
      py::arg("x"), py::arg("y"), py::arg("mode"), py::arg("width"),
      py::arg("height"),
      "Map relative/absolute coordinates onto an integral pixel.");

  // observation
  m.def("sample_indices", &obs::sample_indices, py::arg("n"), py::arg("max_n"),
        "Uniform sampling indices over an n-frame clip.");

  // harness
  m.def("efficiency", &harness::efficiency, py::arg("expected_steps"),
        py::arg("actual_steps"), "100 * expected / actual.");
  m.def("trade_metrics", &trade_metrics_dict, py::arg("transactions"),
        py::arg("failed") = 0,
        "Nine trade metrics (percent, 2 decimals) from (buy, sell, valuation) "
        "tuples.");
  m.def("summarize_run", [](const std::string& path) {
    harness::RunSummary s = harness::summarize_run(path);
    py::dict out;
    out["steps"] = s.steps;
    out["success"] = s.success;
    out["reason"] = s.reason;
    out["total_ticks"] = s.total_ticks;
    return out;
  });

  // skills
  m.def("lint_skills", &lint_skills, py::arg("text"),
        "Parse and validate skill scripts; returns a list of issues.");
  m.def("compile_skill", &compile_skill_text, py::arg("skills"), py::arg("call"),
        "Compile a call against skill definitions; returns primitive strings.");
  m.def("extract_code_blocks", &skill::extract_code_blocks, py::arg("text"));

  // augmentation
  m.def("centroid", [](int x0, int y0, int x1, int y1) {
    Point p = aug::centroid(Rect{x0, y0, x1, y1});
    return py::make_tuple(p.x, p.y);
  });
  m.def(
      "segment_marks_png",
      [](const std::string& png_path) {
        Image img = read_png_file(png_path);
        aug::ColorComponentSegmenter segmenter;
        aug::MarkSet marks = aug::segment_to_marks(img, segmenter);
        py::list out;
        for (const auto& mk : marks.marks)
          out.append(py::make_tuple(mk.id, mk.rect.x0, mk.rect.y0, mk.rect.x1,
                                    mk.rect.y1));
        return out;
      },
      py::arg("png_path"), "Segment a PNG into numbered marks.");

  // memory
  m.def(
      "retrieve_skills",
      [](const std::string& store_path, const std::string& task, int k) {
        pmem::SkillStore store = pmem::SkillStore::load(store_path);
        llm::ScriptedProvider provider(store.dim());
        py::list out;
        for (const auto& r : store.retrieve(task, k, provider))
          out.append(py::make_tuple(r.entry->name(), r.similarity));
        return out;
      },
      py::arg("store_path"), py::arg("task"), py::arg("k"),
      "Top-k skills from a persisted store for a task description.");

  // cli-level helpers
  m.def("replay_trajectory", [](const std::string& trajectory,
                                const std::string& scenario) {
    cli::ReplayResult r = cli::replay_trajectory(trajectory, scenario);
    return py::make_tuple(r.ok, r.message);
  });
  m.def("load_profile", [](const std::string& path) {
    pipeline::Profile p = pipeline::load_profile(path);
    pipeline::validate_profile(p);
    py::dict out;
    out["name"] = p.name;
    out["mode"] = pipeline::mode_name(p.mode);
    out["max_steps"] = p.max_steps;
    out["actions_per_step"] = p.actions_per_step;
    out["fps"] = p.fps;
    return out;
  });
}
