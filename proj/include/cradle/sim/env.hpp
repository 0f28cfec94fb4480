#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "cradle/core/clock.hpp"
#include "cradle/core/image.hpp"
#include "cradle/io/events.hpp"
#include "cradle/obs/capture.hpp"

namespace cradle::sim {

enum class TileKind { free, obstacle, door, goal };

struct Tile {
  TileKind kind = TileKind::free;
  char obstacle_kind = 0;  // grid character for obstacles ('W', 'S', ...)
};

enum class Facing { up, down, left, right };

struct Effect {
  enum class Kind { none, show_group, set_flag, count, focus_input, submit, toggle };
  Kind kind = Kind::none;
  std::string arg;
};

struct Widget {
  std::string id;
  Rect rect;
  std::string label;
  std::string tooltip;
  bool enabled = true;
  bool visible = true;
  bool is_input = false;
  std::string group;  // widgets in a group are shown/hidden together
  std::vector<Effect> effects;
  std::string text;   // current input contents
  int clicks = 0;
};

struct Tool {
  int slot = 0;
  std::string name;
  char clears = 0;  // obstacle kind this tool removes
};

struct GoalClause {
  enum class Kind { cleared, flag, at, input_between };
  Kind kind = Kind::cleared;
  int a = 0, b = 0;       // cleared count / tile coords / range
  std::string name;       // flag or widget id
  double lo = 0, hi = 0;  // input range
};

/// Deterministic virtual desktop: a tile grid-world with an avatar, clickable
/// widgets with tooltips, focus/pause semantics and goal predicates. Acts as
/// the io backend (consuming input events) and as the frame source
/// (producing the rendered screen).
class SimEnv : public io::Backend, public obs::FrameSource {
 public:
  static SimEnv load_scenario(const std::string& path);
  static SimEnv parse_scenario(const std::string& text);

  /// Registers the env on the clock so sim time advances while focused and
  /// unpaused. Call once after construction.
  void attach_clock(SimClock& clock);
  void detach_clock();

  // io::Backend
  void submit(Tick at, const io::Event& event) override;
  void set_focus(Tick at, bool focused) override;

  // obs::FrameSource
  Image render_surface() override { return render(); }

  Image render() const;
  std::string state_digest() const;

  bool check_goal() const;
  void step(Tick ticks);  // manual sim-time advance (tests)

  // state accessors
  Tick sim_ticks() const { return sim_ticks_; }
  bool focused() const { return focused_; }
  bool paused() const { return paused_; }
  bool blocked() const { return blocked_; }
  Point avatar_tile() const { return avatar_; }
  Facing facing() const { return facing_; }
  int cleared_count() const { return cleared_; }
  int selected_tool() const { return selected_tool_; }
  bool has_flag(const std::string& name) const { return flags_.count(name) > 0; }
  const Widget* widget(const std::string& id) const;
  const std::vector<Widget>& widgets() const { return widgets_; }
  int screen_width() const { return screen_w_; }
  int screen_height() const { return screen_h_; }
  Point pointer() const { return pointer_; }
  std::optional<double> submitted_value(const std::string& widget_id) const;
  const std::vector<std::string>& ignored_events() const { return ignored_; }

 private:
  SimEnv() = default;

  void on_clock_advance(Tick from, Tick to);
  void advance_sim(Tick delta);
  void handle_key_down(const std::string& key);
  void handle_key_up(const std::string& key);
  void dispatch_click(Point at);
  void do_action();
  bool try_move(Facing dir);
  Widget* widget_at(Point p);
  Widget* find_widget(const std::string& id);
  void apply_effects(Widget& w);
  Tile& tile_at(int x, int y);
  const Tile& tile_at(int x, int y) const;
  bool tile_walkable(int x, int y) const;
  void reset_motion();
  static Facing key_direction(const std::string& key, bool& is_dir);

  // static scenario data
  int screen_w_ = 320;
  int screen_h_ = 200;
  int tile_size_ = 16;
  Point grid_origin_{16, 16};
  int grid_w_ = 0;
  int grid_h_ = 0;
  std::vector<Tile> tiles_;
  double move_rate_ = 2.0;  // tiles per held-second
  std::vector<Tool> tools_;
  std::vector<GoalClause> goals_;
  std::string pause_key_;
  std::uint64_t seed_ = 0;

  // dynamic state
  SimClock* clock_ = nullptr;
  int observer_id_ = -1;
  Tick sim_ticks_ = 0;
  bool focused_ = true;
  bool paused_ = false;
  Point avatar_{0, 0};
  Facing facing_ = Facing::right;
  int selected_tool_ = 1;
  int cleared_ = 0;
  bool blocked_ = false;
  std::set<std::string> flags_;
  std::map<std::string, int> counters_;
  std::map<std::string, double> submitted_;
  std::vector<Widget> widgets_;
  std::string input_focus_;  // widget id receiving typed characters

  Point pointer_{0, 0};
  std::string hover_widget_;
  Tick hover_since_ = 0;

  std::optional<Facing> current_dir_;
  std::vector<std::string> held_dir_keys_;  // most recent last
  Tick dir_held_ticks_ = 0;
  std::int64_t dir_moved_ = 0;

  std::vector<std::string> ignored_;
};

}  // namespace cradle::sim
