#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "cradle/core/image.hpp"

namespace cradle::pipeline {

enum class Mode { games, software };

const char* mode_name(Mode m);

/// Per-environment run profile. Text format: `key = value` lines with `#`
/// comments; relative paths resolve against the profile file's directory.
struct Profile {
  std::string name = "default";
  std::string scenario;  // simenv scenario path
  Mode mode = Mode::games;

  double fps = 2.0;
  int ticks_per_second = 20;
  int max_steps = 10;
  int actions_per_step = 1;  // 1 in games mode, up to 2 in software mode
  std::string pause = "key-toggle:esc";
  int episodic_k = 5;
  int top_k = 10;
  int short_task_window = 3;
  int reflection_frames = 8;  // software profiles use first+last (2)
  int sentence_cap = 8;
  int summary_stride = 1;
  int ring_capacity = 600;
  int downscale_width = 512;
  double keyframe_threshold = 0.05;
  std::optional<Rect> keyframe_region;  // full frame when absent
  std::set<std::string> augmentation;   // grid | bands | som | pointer
  bool toolbar_exploration = false;
  std::optional<Rect> toolbar_region;

  std::string prompts_dir;
  std::vector<std::string> presets;  // skill files loaded as predefined

  std::string initial_task = "explore the environment";

  std::string provider;       // cassette | remote:<base-url>
  std::string cassette;       // cassette path (when provider = cassette)
  std::string cassette_mode = "strict";  // strict | record
  std::string model = "gpt-4o-2024-05-13";
  double temperature = 0.0;
  std::string embed = "hash:8";  // hash:<dim> | remote
  int max_tokens = 1024;

  bool operator==(const Profile&) const = default;

  int embed_dim() const;
};

Profile parse_profile(const std::string& text, const std::string& base_dir);
Profile load_profile(const std::string& path);
std::string serialize_profile(const Profile& p);

/// Range/extent checks plus existence of referenced files.
void validate_profile(const Profile& p);

}  // namespace cradle::pipeline
