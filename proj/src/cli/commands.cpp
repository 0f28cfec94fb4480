#include "cradle/cli/commands.hpp"

#include <filesystem>
#include <iostream>
#include <memory>

#include "cradle/aug/ops.hpp"
#include "cradle/cli/trajectory.hpp"
#include "cradle/core/png.hpp"
#include "cradle/core/text.hpp"
#include "cradle/harness/metrics.hpp"
#include "cradle/llm/cassette.hpp"
#include "cradle/llm/remote.hpp"
#include "cradle/pipeline/runner.hpp"
#include "cradle/pmem/store.hpp"
#include "cradle/skill/parser.hpp"

namespace cradle::cli {
namespace fs = std::filesystem;

namespace {

/// Embedding-only provider backed by the deterministic text hash.
class HashEmbedProvider : public llm::Provider {
 public:
  explicit HashEmbedProvider(int dim) : embedder_(dim) {}
  std::string complete(const llm::CompletionRequest&) override {
    raise(errc::provider_failure, "embedding provider cannot complete");
  }
  std::vector<std::vector<double>> embed(const std::vector<std::string>& texts) override {
    return embedder_.embed(texts);
  }

 private:
  llm::HashEmbedder embedder_;
};

/// Routes completions and embeddings to two underlying providers.
class SplitProvider : public llm::Provider {
 public:
  SplitProvider(llm::Provider& completions, llm::Provider& embeddings)
      : completions_(completions), embeddings_(embeddings) {}
  std::string complete(const llm::CompletionRequest& req) override {
    return completions_.complete(req);
  }
  std::vector<std::vector<double>> embed(const std::vector<std::string>& texts) override {
    return embeddings_.embed(texts);
  }

 private:
  llm::Provider& completions_;
  llm::Provider& embeddings_;
};

/// Owns the provider graph a profile describes.
struct ProviderStack {
  std::unique_ptr<llm::Provider> embeddings;
  std::unique_ptr<llm::Provider> remote;
  std::unique_ptr<llm::Provider> completions;
  std::unique_ptr<llm::Provider> front;

  llm::Provider& provider() { return *front; }
};

ProviderStack build_providers(const pipeline::Profile& profile) {
  ProviderStack stack;

  if (starts_with(profile.embed, "hash:")) {
    stack.embeddings = std::make_unique<HashEmbedProvider>(profile.embed_dim());
  } else if (profile.embed == "remote") {
    llm::RemoteConfig cfg;
    if (!starts_with(profile.provider, "remote:"))
      raise(errc::config_error, "embed=remote needs provider=remote:<url>");
    cfg.base_url = profile.provider.substr(7);
    stack.embeddings = std::make_unique<llm::RemoteProvider>(cfg);
  } else {
    raise(errc::config_error, "unknown embed setting '" + profile.embed + "'");
  }

  if (profile.provider == "cassette") {
    if (profile.cassette.empty())
      raise(errc::config_error, "cassette provider needs a cassette path");
    if (profile.cassette_mode == "strict") {
      stack.completions = std::make_unique<llm::CassetteProvider>(
          profile.cassette, llm::CassetteMode::strict);
    } else if (profile.cassette_mode == "record") {
      raise(errc::config_error,
            "record mode needs a remote provider behind the cassette; use "
            "provider = remote:<url> with cassette set");
    } else {
      raise(errc::config_error, "cassette_mode must be strict|record");
    }
  } else if (starts_with(profile.provider, "remote:")) {
    llm::RemoteConfig cfg;
    cfg.base_url = profile.provider.substr(7);
    stack.remote = std::make_unique<llm::RemoteProvider>(cfg);
    if (!profile.cassette.empty() && profile.cassette_mode == "record") {
      stack.completions = std::make_unique<llm::CassetteProvider>(
          profile.cassette, llm::CassetteMode::record, stack.remote.get());
    } else {
      stack.completions = std::move(stack.remote);
    }
  } else {
    raise(errc::config_error,
          "provider must be 'cassette' or 'remote:<base-url>', got '" +
              profile.provider + "'");
  }

  stack.front =
      std::make_unique<SplitProvider>(*stack.completions, *stack.embeddings);
  return stack;
}

int config_error(const std::string& message) {
  std::cerr << "error: " << message << "\n";
  return 2;
}

}  // namespace

int cmd_run(const RunOptions& options) {
  pipeline::Profile profile;
  try {
    profile = pipeline::load_profile(options.profile_path);
    if (options.max_steps) profile.max_steps = *options.max_steps;
    if (options.cassette) profile.cassette = *options.cassette;
    if (options.cassette_mode) profile.cassette_mode = *options.cassette_mode;
    pipeline::validate_profile(profile);
  } catch (const Error& e) {
    return config_error(e.what());
  } catch (const std::exception& e) {
    return config_error(e.what());
  }

  try {
    ProviderStack providers = build_providers(profile);
    pipeline::Runner runner(profile, providers.provider());
    pipeline::RunOutcome outcome = runner.run();
    write_trajectory(options.trajectory_out, profile, outcome);
    if (options.skills_out) runner.store().persist(*options.skills_out);
    if (!options.quiet) {
      std::cout << "run " << (outcome.success ? "succeeded" : "failed") << " ("
                << outcome.reason << ") after " << outcome.steps_used
                << " steps; trajectory: " << options.trajectory_out << "\n";
    }
    return outcome.success ? 0 : 1;
  } catch (const Error& e) {
    if (e.code() == errc::config_error) return config_error(e.what());
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

int cmd_replay(const std::string& trajectory_path, const std::string& scenario_path) {
  if (!fs::exists(trajectory_path))
    return config_error("trajectory not found: " + trajectory_path);
  if (!fs::exists(scenario_path))
    return config_error("scenario not found: " + scenario_path);
  try {
    ReplayResult result = replay_trajectory(trajectory_path, scenario_path);
    std::cout << result.message << "\n";
    return result.ok ? 0 : 1;
  } catch (const Error& e) {
    if (e.code() == errc::trajectory_parse_error ||
        e.code() == errc::scenario_parse_error || e.code() == errc::io_error)
      return config_error(e.what());
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

int cmd_skills_list(const std::string& store_path) {
  try {
    pmem::SkillStore store = pmem::SkillStore::load(store_path);
    for (const auto& name : store.names()) {
      const pmem::SkillEntry* e = store.find(name);
      std::cout << name << " - " << e->doc << "\n";
    }
    return 0;
  } catch (const Error& e) {
    return config_error(e.what());
  }
}

int cmd_skills_show(const std::string& store_path, const std::string& name) {
  try {
    pmem::SkillStore store = pmem::SkillStore::load(store_path);
    const pmem::SkillEntry* e = store.find(name);
    if (!e) {
      std::cerr << "NotFound: no skill named '" << name << "'\n";
      return 1;
    }
    std::cout << "name:   " << name << "\n";
    std::cout << "doc:    " << e->doc << "\n";
    std::cout << "source: " << pmem::skill_source_name(e->source) << "\n";
    if (e->is_native()) {
      std::cout << "native skill (runtime-implemented)\n";
    } else {
      std::cout << skill::serialize(std::get<skill::SkillScript>(e->impl));
    }
    return 0;
  } catch (const Error& e) {
    return config_error(e.what());
  }
}

int cmd_skills_lint(const std::string& script_path) {
  std::string text;
  try {
    text = read_text_file(script_path);
  } catch (const Error& e) {
    return config_error(e.what());
  }
  try {
    auto scripts = skill::parse_many(text);
    skill::VectorRegistry registry;
    int issues = 0;
    for (auto& script : scripts) {
      auto errors = skill::validate(script, registry);
      for (const auto& err : errors) {
        std::cerr << script.name << ": " << errc_name(err.code) << ": "
                  << err.message << "\n";
        ++issues;
      }
      registry.add_script(std::move(script));
    }
    if (issues == 0) {
      std::cout << scripts.size() << " skill(s) OK\n";
      return 0;
    }
    return 1;
  } catch (const Error& e) {
    std::cerr << errc_name(e.code()) << ": " << e.what() << "\n";
    return 1;
  }
}

int cmd_metrics(const MetricsOptions& options) {
  try {
    if (!options.ledger_path.empty()) {
      harness::TradeLedger ledger = harness::read_ledger_csv(options.ledger_path);
      harness::TradeMetrics metrics = harness::trade_metrics(ledger);
      std::cout << (options.as_json ? harness::format_metrics_json(metrics)
                                    : harness::format_metrics_text(metrics));
      if (options.as_json) std::cout << "\n";
      return 0;
    }
    if (!options.trajectories.empty()) {
      harness::RunSet runset;
      runset.task_id = "cli";
      double total_steps = 0;
      for (const auto& path : options.trajectories) {
        harness::RunSummary s = harness::summarize_run(path);
        runset.runs.push_back(
            harness::RunResult{s.steps, s.success, s.reason});
        total_steps += s.steps;
      }
      harness::SuccessStats stats = harness::success_stats(runset);
      std::cout << "success: " << stats.to_string() << "\n";
      if (options.expected_steps && stats.mean_steps) {
        double eff = harness::efficiency(*options.expected_steps, *stats.mean_steps);
        std::cout.setf(std::ios::fixed);
        std::cout.precision(2);
        std::cout << "efficiency: " << eff << "%\n";
      }
      return 0;
    }
    return config_error("metrics needs --ledger or --trajectory");
  } catch (const Error& e) {
    if (e.code() == errc::io_error || e.code() == errc::config_error)
      return config_error(e.what());
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

int cmd_augment(const AugmentOptions& options) {
  try {
    Image input = read_png_file(options.input_png);
    fs::path out_dir(options.output_dir);
    fs::create_directories(out_dir);
    std::string stem = fs::path(options.input_png).stem().string();

    if (options.grid) {
      auto result = aug::draw_grid(input, aug::GridSpec{});
      write_png_file(result.image, (out_dir / (stem + "_grid.png")).string());
    }
    if (options.bands) {
      write_png_file(aug::draw_side_bands(input),
                     (out_dir / (stem + "_bands.png")).string());
    }
    if (options.som) {
      aug::ColorComponentSegmenter segmenter;
      aug::MarkSet marks = aug::segment_to_marks(input, segmenter);
      write_png_file(aug::render_marks(input, marks, aug::MarkStyle::standard),
                     (out_dir / (stem + "_som.png")).string());
      write_text_file((out_dir / (stem + "_marks.txt")).string(),
                      aug::serialize_marks(marks));
    }
    if (options.pointer) {
      write_png_file(
          aug::draw_pointer(input, Point{options.pointer->first,
                                         options.pointer->second}),
          (out_dir / (stem + "_pointer.png")).string());
    }
    if (!options.match_templates_dir.empty()) {
      auto templates = aug::load_templates(options.match_templates_dir);
      for (const auto& d : aug::match_templates(input, templates)) {
        std::cout << d.name << " " << d.rect.x0 << " " << d.rect.y0 << " "
                  << d.rect.x1 << " " << d.rect.y1 << " " << d.score << "\n";
      }
    }
    return 0;
  } catch (const Error& e) {
    return config_error(e.what());
  }
}

}  // namespace cradle::cli
