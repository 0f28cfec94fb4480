#include "cradle/pipeline/profile.hpp"

#include <filesystem>
#include <sstream>

#include "cradle/core/error.hpp"
#include "cradle/core/text.hpp"

namespace cradle::pipeline {
namespace fs = std::filesystem;

const char* mode_name(Mode m) { return m == Mode::games ? "games" : "software"; }

int Profile::embed_dim() const {
  if (starts_with(embed, "hash:")) return std::stoi(embed.substr(5));
  return 1536;  // remote embedding endpoints define their own dimension
}

namespace {

std::string resolve(const std::string& base_dir, const std::string& path) {
  if (path.empty() || base_dir.empty()) return path;
  fs::path p(path);
  if (p.is_absolute()) return path;
  return (fs::path(base_dir) / p).lexically_normal().string();
}

std::optional<Rect> parse_rect(const std::string& value) {
  std::istringstream ss(value);
  Rect r;
  if (!(ss >> r.x0 >> r.y0 >> r.x1 >> r.y1))
    raise(errc::config_error, "rect needs four integers: " + value);
  return r;
}

std::string rect_to_string(const Rect& r) {
  std::ostringstream ss;
  ss << r.x0 << " " << r.y0 << " " << r.x1 << " " << r.y1;
  return ss.str();
}

}  // namespace

Profile parse_profile(const std::string& text, const std::string& base_dir) {
  Profile p;
  for (const auto& raw : split_lines(text)) {
    std::string line = trim(raw);
    if (line.empty() || line[0] == '#' || line[0] == '[') continue;
    auto eq = line.find('=');
    if (eq == std::string::npos)
      raise(errc::config_error, "expected key = value, got: " + line);
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));

    try {
      if (key == "name") p.name = value;
      else if (key == "scenario") p.scenario = resolve(base_dir, value);
      else if (key == "mode") {
        if (value == "games") p.mode = Mode::games;
        else if (value == "software") p.mode = Mode::software;
        else raise(errc::config_error, "mode must be games|software");
      } else if (key == "fps") p.fps = std::stod(value);
      else if (key == "ticks_per_second") p.ticks_per_second = std::stoi(value);
      else if (key == "max_steps") p.max_steps = std::stoi(value);
      else if (key == "actions_per_step") p.actions_per_step = std::stoi(value);
      else if (key == "pause") p.pause = value;
      else if (key == "episodic_k") p.episodic_k = std::stoi(value);
      else if (key == "top_k") p.top_k = std::stoi(value);
      else if (key == "short_task_window") p.short_task_window = std::stoi(value);
      else if (key == "reflection_frames") p.reflection_frames = std::stoi(value);
      else if (key == "sentence_cap") p.sentence_cap = std::stoi(value);
      else if (key == "summary_stride") p.summary_stride = std::stoi(value);
      else if (key == "ring_capacity") p.ring_capacity = std::stoi(value);
      else if (key == "downscale_width") p.downscale_width = std::stoi(value);
      else if (key == "keyframe_threshold") p.keyframe_threshold = std::stod(value);
      else if (key == "keyframe_region") p.keyframe_region = parse_rect(value);
      else if (key == "augmentation") {
        p.augmentation.clear();
        if (value != "none")
          for (const auto& a : split(value, ','))
            if (!trim(a).empty()) p.augmentation.insert(trim(a));
      } else if (key == "toolbar_exploration") p.toolbar_exploration = value == "true";
      else if (key == "toolbar_region") p.toolbar_region = parse_rect(value);
      else if (key == "prompts_dir") p.prompts_dir = resolve(base_dir, value);
      else if (key == "presets") {
        p.presets.clear();
        for (const auto& path : split(value, ';'))
          if (!trim(path).empty()) p.presets.push_back(resolve(base_dir, trim(path)));
      } else if (key == "initial_task") p.initial_task = value;
      else if (key == "provider") p.provider = value;
      else if (key == "cassette") p.cassette = resolve(base_dir, value);
      else if (key == "cassette_mode") p.cassette_mode = value;
      else if (key == "model") p.model = value;
      else if (key == "temperature") p.temperature = std::stod(value);
      else if (key == "embed") p.embed = value;
      else if (key == "max_tokens") p.max_tokens = std::stoi(value);
      else raise(errc::config_error, "unknown profile key '" + key + "'");
    } catch (const Error&) {
      throw;
    } catch (const std::exception& e) {
      raise(errc::config_error, "bad value for '" + key + "': " + e.what());
    }
  }
  return p;
}

Profile load_profile(const std::string& path) {
  fs::path p(path);
  return parse_profile(read_text_file(path), p.parent_path().string());
}

std::string serialize_profile(const Profile& p) {
  std::ostringstream out;
  out << "name = " << p.name << "\n";
  if (!p.scenario.empty()) out << "scenario = " << p.scenario << "\n";
  out << "mode = " << mode_name(p.mode) << "\n";
  out << "fps = " << p.fps << "\n";
  out << "ticks_per_second = " << p.ticks_per_second << "\n";
  out << "max_steps = " << p.max_steps << "\n";
  out << "actions_per_step = " << p.actions_per_step << "\n";
  out << "pause = " << p.pause << "\n";
  out << "episodic_k = " << p.episodic_k << "\n";
  out << "top_k = " << p.top_k << "\n";
  out << "short_task_window = " << p.short_task_window << "\n";
  out << "reflection_frames = " << p.reflection_frames << "\n";
  out << "sentence_cap = " << p.sentence_cap << "\n";
  out << "summary_stride = " << p.summary_stride << "\n";
  out << "ring_capacity = " << p.ring_capacity << "\n";
  out << "downscale_width = " << p.downscale_width << "\n";
  out << "keyframe_threshold = " << p.keyframe_threshold << "\n";
  if (p.keyframe_region)
    out << "keyframe_region = " << rect_to_string(*p.keyframe_region) << "\n";
  if (!p.augmentation.empty()) {
    out << "augmentation = ";
    bool first = true;
    for (const auto& a : p.augmentation) {
      if (!first) out << ",";
      out << a;
      first = false;
    }
    out << "\n";
  }
  out << "toolbar_exploration = " << (p.toolbar_exploration ? "true" : "false")
      << "\n";
  if (p.toolbar_region)
    out << "toolbar_region = " << rect_to_string(*p.toolbar_region) << "\n";
  if (!p.prompts_dir.empty()) out << "prompts_dir = " << p.prompts_dir << "\n";
  if (!p.presets.empty()) {
    out << "presets = ";
    for (std::size_t i = 0; i < p.presets.size(); ++i) {
      if (i) out << ";";
      out << p.presets[i];
    }
    out << "\n";
  }
  out << "initial_task = " << p.initial_task << "\n";
  if (!p.provider.empty()) out << "provider = " << p.provider << "\n";
  if (!p.cassette.empty()) out << "cassette = " << p.cassette << "\n";
  out << "cassette_mode = " << p.cassette_mode << "\n";
  out << "model = " << p.model << "\n";
  out << "temperature = " << p.temperature << "\n";
  out << "embed = " << p.embed << "\n";
  out << "max_tokens = " << p.max_tokens << "\n";
  return out.str();
}

void validate_profile(const Profile& p) {
  if (p.max_steps < 1) raise(errc::config_error, "max_steps must be >= 1");
  if (p.actions_per_step < 1 || p.actions_per_step > 2)
    raise(errc::config_error, "actions_per_step must be 1 or 2");
  if (p.mode == Mode::games && p.actions_per_step != 1)
    raise(errc::config_error, "games mode executes exactly one action per step");
  if (!(p.fps > 0.0) || p.fps > 60.0)
    raise(errc::config_error, "fps must lie in (0, 60]");
  if (p.ticks_per_second < 1)
    raise(errc::config_error, "ticks_per_second must be positive");
  if (p.episodic_k < 1) raise(errc::config_error, "episodic_k must be >= 1");
  if (p.top_k < 1) raise(errc::config_error, "top_k must be >= 1");
  if (p.short_task_window < 1)
    raise(errc::config_error, "short_task_window must be >= 1");
  if (p.reflection_frames < 1)
    raise(errc::config_error, "reflection_frames must be >= 1");
  if (p.temperature < 0.0 || p.temperature > 2.0)
    raise(errc::config_error, "temperature must lie in [0,2]");
  if (!(p.keyframe_threshold > 0.0 && p.keyframe_threshold < 1.0))
    raise(errc::config_error, "keyframe_threshold must lie in (0,1)");
  if (starts_with(p.embed, "hash:") && p.embed_dim() < 1)
    raise(errc::config_error, "embedding dimension must be positive");

  for (const auto& path : p.presets) {
    if (!fs::exists(path))
      raise(errc::config_error, "preset file does not exist: " + path);
  }
  if (!p.scenario.empty() && !fs::exists(p.scenario))
    raise(errc::config_error, "scenario does not exist: " + p.scenario);
  if (!p.prompts_dir.empty() && !fs::exists(p.prompts_dir))
    raise(errc::config_error, "prompts_dir does not exist: " + p.prompts_dir);
}

}  // namespace cradle::pipeline
