#include "cradle/sim/env.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <sstream>

#include "cradle/core/error.hpp"
#include "cradle/core/font.hpp"
#include "cradle/core/hash.hpp"
#include "cradle/core/text.hpp"

namespace cradle::sim {
namespace {

constexpr Rgb kBackground{26, 26, 26};
constexpr Rgb kFreeTile{40, 44, 40};
constexpr Rgb kWallTile{96, 96, 96};
constexpr Rgb kDoorTile{168, 120, 56};
constexpr Rgb kGoalTile{208, 184, 56};
constexpr Rgb kAvatar{216, 64, 64};
constexpr Rgb kAvatarNotch{255, 224, 160};
constexpr Rgb kWidgetEnabled{72, 72, 96};
constexpr Rgb kWidgetDisabled{48, 48, 56};
constexpr Rgb kWidgetBorder{128, 128, 152};
constexpr Rgb kWidgetText{240, 240, 240};
constexpr Rgb kTooltipBg{24, 24, 56};
constexpr Rgb kTooltipText{255, 255, 160};
constexpr Rgb kPausedDot{255, 48, 48};
constexpr Tick kTooltipLatency = 2;

Rgb obstacle_color(char kind) {
  switch (kind) {
    case '#': return kWallTile;
    case 'W': return Rgb{56, 128, 56};
    case 'S': return Rgb{136, 136, 144};
    case 'T': return Rgb{104, 80, 40};
    default: {
      // deterministic color for other kinds
      std::uint64_t h = fnv1a64(std::string(1, kind));
      return Rgb{static_cast<std::uint8_t>(64 + h % 128),
                 static_cast<std::uint8_t>(64 + (h >> 8) % 128),
                 static_cast<std::uint8_t>(64 + (h >> 16) % 128)};
    }
  }
}

Effect parse_effect(const std::string& text) {
  Effect e;
  auto colon = text.find(':');
  std::string kind = colon == std::string::npos ? text : text.substr(0, colon);
  std::string arg = colon == std::string::npos ? "" : text.substr(colon + 1);
  if (kind == "none") e.kind = Effect::Kind::none;
  else if (kind == "show") e.kind = Effect::Kind::show_group;
  else if (kind == "set") e.kind = Effect::Kind::set_flag;
  else if (kind == "count") e.kind = Effect::Kind::count;
  else if (kind == "focus_input") e.kind = Effect::Kind::focus_input;
  else if (kind == "submit") e.kind = Effect::Kind::submit;
  else if (kind == "toggle") e.kind = Effect::Kind::toggle;
  else raise(errc::scenario_parse_error, "unknown effect '" + kind + "'");
  e.arg = arg;
  return e;
}

/// Splits a scenario line into fields; double-quoted fields may hold spaces.
std::vector<std::string> tokenize(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  bool quoted = false;
  bool has_token = false;
  for (char c : line) {
    if (quoted) {
      if (c == '"') {
        quoted = false;
        out.push_back(cur);
        cur.clear();
        has_token = false;
      } else {
        cur.push_back(c);
      }
      continue;
    }
    if (c == '"') {
      quoted = true;
      has_token = false;
      cur.clear();
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(c))) {
      if (has_token) {
        out.push_back(cur);
        cur.clear();
        has_token = false;
      }
      continue;
    }
    cur.push_back(c);
    has_token = true;
  }
  if (has_token) out.push_back(cur);
  return out;
}

}  // namespace

SimEnv SimEnv::load_scenario(const std::string& path) {
  return parse_scenario(read_text_file(path));
}

SimEnv SimEnv::parse_scenario(const std::string& text) {
  SimEnv env;
  auto lines = split_lines(text);
  std::size_t i = 0;
  bool saw_header = false;
  bool saw_avatar = false;

  auto fail = [](std::size_t line_no, const std::string& msg) {
    raise(errc::scenario_parse_error,
          "line " + std::to_string(line_no + 1) + ": " + msg);
  };

  for (; i < lines.size(); ++i) {
    std::string line = trim(lines[i]);
    if (line.empty() || line[0] == '#') continue;

    if (line == "grid") {
      std::vector<std::string> rows;
      ++i;
      for (; i < lines.size(); ++i) {
        if (trim(lines[i]) == "end") break;
        rows.push_back(lines[i]);
      }
      if (i >= lines.size()) fail(i - 1, "grid without end");
      if (rows.empty()) fail(i, "empty grid");
      env.grid_h_ = static_cast<int>(rows.size());
      env.grid_w_ = 0;
      for (const auto& r : rows)
        env.grid_w_ = std::max(env.grid_w_, static_cast<int>(r.size()));
      env.tiles_.assign(static_cast<std::size_t>(env.grid_w_) * env.grid_h_, Tile{});
      for (int y = 0; y < env.grid_h_; ++y) {
        for (int x = 0; x < static_cast<int>(rows[y].size()); ++x) {
          char c = rows[static_cast<std::size_t>(y)][static_cast<std::size_t>(x)];
          Tile& t = env.tiles_[static_cast<std::size_t>(y) * env.grid_w_ + x];
          if (c == '.' || c == ' ') {
            t.kind = TileKind::free;
          } else if (c == '@') {
            t.kind = TileKind::free;
            env.avatar_ = Point{x, y};
            saw_avatar = true;
          } else if (c == 'D') {
            t.kind = TileKind::door;
          } else if (c == 'G') {
            t.kind = TileKind::goal;
          } else {
            t.kind = TileKind::obstacle;
            t.obstacle_kind = c;
          }
        }
      }
      continue;
    }

    auto tok = tokenize(line);
    if (tok.empty()) continue;
    const std::string& head = tok[0];

    try {
      if (head == "scenario") {
        saw_header = true;
      } else if (head == "seed") {
        env.seed_ = std::stoull(tok.at(1));
      } else if (head == "screen") {
        env.screen_w_ = std::stoi(tok.at(1));
        env.screen_h_ = std::stoi(tok.at(2));
      } else if (head == "tile_size") {
        env.tile_size_ = std::stoi(tok.at(1));
      } else if (head == "grid_origin") {
        env.grid_origin_ = Point{std::stoi(tok.at(1)), std::stoi(tok.at(2))};
      } else if (head == "move_rate") {
        env.move_rate_ = std::stod(tok.at(1));
      } else if (head == "facing") {
        const std::string& d = tok.at(1);
        if (d == "up") env.facing_ = Facing::up;
        else if (d == "down") env.facing_ = Facing::down;
        else if (d == "left") env.facing_ = Facing::left;
        else if (d == "right") env.facing_ = Facing::right;
        else fail(i, "bad facing " + d);
      } else if (head == "avatar") {
        env.avatar_ = Point{std::stoi(tok.at(1)), std::stoi(tok.at(2))};
        saw_avatar = true;
      } else if (head == "selected_tool") {
        env.selected_tool_ = std::stoi(tok.at(1));
      } else if (head == "tool") {
        Tool t;
        t.slot = std::stoi(tok.at(1));
        t.name = tok.at(2);
        t.clears = tok.at(3).at(0);
        env.tools_.push_back(t);
      } else if (head == "widget") {
        Widget w;
        w.id = tok.at(1);
        w.rect = Rect{std::stoi(tok.at(2)), std::stoi(tok.at(3)),
                      std::stoi(tok.at(2)) + std::stoi(tok.at(4)),
                      std::stoi(tok.at(3)) + std::stoi(tok.at(5))};
        w.label = tok.at(6);
        w.tooltip = tok.at(7);
        const std::string& state = tok.at(8);
        if (state == "enabled") w.enabled = true;
        else if (state == "disabled") w.enabled = false;
        else fail(i, "widget state must be enabled|disabled");
        for (std::size_t a = 9; a < tok.size(); ++a) {
          const std::string& attr = tok[a];
          if (starts_with(attr, "effect=")) {
            for (const auto& e : split(attr.substr(7), ','))
              w.effects.push_back(parse_effect(e));
          } else if (starts_with(attr, "group=")) {
            w.group = attr.substr(6);
          } else if (attr == "hidden") {
            w.visible = false;
          } else if (attr == "input") {
            w.is_input = true;
          } else {
            fail(i, "unknown widget attribute '" + attr + "'");
          }
        }
        env.widgets_.push_back(std::move(w));
      } else if (head == "goal") {
        GoalClause g;
        const std::string& kind = tok.at(1);
        if (kind == "cleared") {
          g.kind = GoalClause::Kind::cleared;
          g.a = std::stoi(tok.at(2));
        } else if (kind == "flag") {
          g.kind = GoalClause::Kind::flag;
          g.name = tok.at(2);
        } else if (kind == "at") {
          g.kind = GoalClause::Kind::at;
          g.a = std::stoi(tok.at(2));
          g.b = std::stoi(tok.at(3));
        } else if (kind == "input") {
          g.kind = GoalClause::Kind::input_between;
          g.name = tok.at(2);
          if (tok.at(3) != "between") fail(i, "expected 'between'");
          g.lo = std::stod(tok.at(4));
          g.hi = std::stod(tok.at(5));
        } else {
          fail(i, "unknown goal kind '" + kind + "'");
        }
        env.goals_.push_back(g);
      } else if (head == "pause_key") {
        env.pause_key_ = tok.at(1);
      } else {
        fail(i, "unknown directive '" + head + "'");
      }
    } catch (const Error&) {
      throw;
    } catch (const std::exception& e) {
      fail(i, std::string("malformed line (") + e.what() + ")");
    }
  }

  if (!saw_header) raise(errc::scenario_parse_error, "missing scenario header");
  if (env.grid_w_ > 0 && saw_avatar) {
    if (env.avatar_.x < 0 || env.avatar_.x >= env.grid_w_ || env.avatar_.y < 0 ||
        env.avatar_.y >= env.grid_h_)
      raise(errc::scenario_parse_error, "avatar outside the grid");
    const Tile& t = env.tile_at(env.avatar_.x, env.avatar_.y);
    if (t.kind == TileKind::obstacle)
      raise(errc::scenario_parse_error, "avatar placed on an obstacle tile");
  }
  for (const auto& w : env.widgets_) {
    if (!w.rect.valid() || !Rect{0, 0, env.screen_w_, env.screen_h_}.contains(w.rect))
      raise(errc::scenario_parse_error, "widget '" + w.id + "' outside screen");
  }
  return env;
}

void SimEnv::attach_clock(SimClock& clock) {
  detach_clock();
  clock_ = &clock;
  observer_id_ = clock.add_observer(
      [this](Tick from, Tick to) { on_clock_advance(from, to); });
}

void SimEnv::detach_clock() {
  if (clock_ && observer_id_ >= 0) clock_->remove_observer(observer_id_);
  clock_ = nullptr;
  observer_id_ = -1;
}

void SimEnv::on_clock_advance(Tick from, Tick to) {
  if (!focused_ || paused_) return;
  advance_sim(to - from);
}

void SimEnv::step(Tick ticks) {
  if (!focused_ || paused_) return;
  advance_sim(ticks);
}

void SimEnv::advance_sim(Tick delta) {
  sim_ticks_ += delta;
  if (current_dir_) {
    dir_held_ticks_ += delta;
    int tps = clock_ ? clock_->ticks_per_second() : 100;
    double owed = static_cast<double>(dir_held_ticks_) * move_rate_ /
                  static_cast<double>(tps);
    auto target = static_cast<std::int64_t>(std::floor(owed + 1e-9));
    while (dir_moved_ < target) {
      if (!try_move(*current_dir_)) {
        dir_moved_ = target;  // no catch-up burst after unblocking
        break;
      }
      ++dir_moved_;
    }
  }
}

Facing SimEnv::key_direction(const std::string& key, bool& is_dir) {
  is_dir = true;
  if (key == "w" || key == "up") return Facing::up;
  if (key == "s" || key == "down") return Facing::down;
  if (key == "a" || key == "left") return Facing::left;
  if (key == "d" || key == "right") return Facing::right;
  is_dir = false;
  return Facing::up;
}

void SimEnv::submit(Tick at, const io::Event& event) {
  (void)at;
  if (!focused_) {
    ignored_.push_back("unfocused: " + io::to_string(event));
    return;
  }
  if (const auto* kd = std::get_if<io::KeyDown>(&event)) {
    if (!pause_key_.empty() && kd->key == pause_key_) {
      paused_ = !paused_;
      reset_motion();
      return;
    }
    if (paused_) {
      ignored_.push_back("paused: " + io::to_string(event));
      return;
    }
    handle_key_down(kd->key);
    return;
  }
  if (paused_) {
    ignored_.push_back("paused: " + io::to_string(event));
    return;
  }
  if (const auto* ku = std::get_if<io::KeyUp>(&event)) {
    handle_key_up(ku->key);
  } else if (std::get_if<io::ButtonDown>(&event)) {
    // click fires on release
  } else if (const auto* bu = std::get_if<io::ButtonUp>(&event)) {
    if (bu->button == io::Button::left) dispatch_click(pointer_);
  } else if (const auto* pt = std::get_if<io::PointerTo>(&event)) {
    pointer_ = Point{pt->x, pt->y};
    Widget* over = widget_at(pointer_);
    std::string over_id = over && over->enabled ? over->id : "";
    if (over_id != hover_widget_) {
      hover_widget_ = over_id;
      hover_since_ = sim_ticks_;
    }
  } else if (std::get_if<io::ScrollBy>(&event)) {
    // scrolling has no effect in this environment; keep it logged
    ignored_.push_back("scroll");
  }
}

void SimEnv::set_focus(Tick at, bool focused) {
  (void)at;
  if (focused_ == focused) return;
  focused_ = focused;
  reset_motion();
}

void SimEnv::reset_motion() {
  current_dir_ = std::nullopt;
  held_dir_keys_.clear();
  dir_held_ticks_ = 0;
  dir_moved_ = 0;
}

void SimEnv::handle_key_down(const std::string& key) {
  bool is_dir = false;
  Facing dir = key_direction(key, is_dir);
  if (is_dir) {
    held_dir_keys_.push_back(key);
    current_dir_ = dir;
    facing_ = dir;
    dir_held_ticks_ = 0;
    dir_moved_ = 0;
    blocked_ = false;
    return;
  }

  // typing into a focused input widget takes priority over tool selection
  if (!input_focus_.empty()) {
    Widget* input = find_widget(input_focus_);
    if (input) {
      if (key == "enter" || key == "esc") {
        input_focus_.clear();
      } else if (key.size() == 1) {
        input->text.push_back(key[0]);
      } else if (key == "space") {
        input->text.push_back(' ');
      }
      return;
    }
    input_focus_.clear();
  }

  if (key.size() == 1 && key[0] >= '1' && key[0] <= '9') {
    int slot = key[0] - '0';
    for (const auto& t : tools_) {
      if (t.slot == slot) {
        selected_tool_ = slot;
        return;
      }
    }
    return;
  }

  if (key == "e") {
    do_action();
    return;
  }
}

void SimEnv::handle_key_up(const std::string& key) {
  bool is_dir = false;
  key_direction(key, is_dir);
  if (!is_dir) return;
  held_dir_keys_.erase(
      std::remove(held_dir_keys_.begin(), held_dir_keys_.end(), key),
      held_dir_keys_.end());
  if (held_dir_keys_.empty()) {
    current_dir_ = std::nullopt;
    dir_held_ticks_ = 0;
    dir_moved_ = 0;
  } else {
    bool is_dir2 = false;
    current_dir_ = key_direction(held_dir_keys_.back(), is_dir2);
    dir_held_ticks_ = 0;
    dir_moved_ = 0;
  }
}

bool SimEnv::tile_walkable(int x, int y) const {
  if (x < 0 || y < 0 || x >= grid_w_ || y >= grid_h_) return false;
  return tile_at(x, y).kind != TileKind::obstacle;
}

bool SimEnv::try_move(Facing dir) {
  int nx = avatar_.x, ny = avatar_.y;
  switch (dir) {
    case Facing::up: --ny; break;
    case Facing::down: ++ny; break;
    case Facing::left: --nx; break;
    case Facing::right: ++nx; break;
  }
  facing_ = dir;
  if (!tile_walkable(nx, ny)) {
    blocked_ = true;
    return false;
  }
  avatar_ = Point{nx, ny};
  blocked_ = false;
  return true;
}

void SimEnv::do_action() {
  if (grid_w_ == 0) return;
  int tx = avatar_.x, ty = avatar_.y;
  switch (facing_) {
    case Facing::up: --ty; break;
    case Facing::down: ++ty; break;
    case Facing::left: --tx; break;
    case Facing::right: ++tx; break;
  }
  if (tx < 0 || ty < 0 || tx >= grid_w_ || ty >= grid_h_) return;
  Tile& t = tile_at(tx, ty);
  if (t.kind != TileKind::obstacle) return;
  for (const auto& tool : tools_) {
    if (tool.slot == selected_tool_ && tool.clears == t.obstacle_kind) {
      t.kind = TileKind::free;
      t.obstacle_kind = 0;
      ++cleared_;
      return;
    }
  }
  flags_.insert("wrong_tool");
}

Widget* SimEnv::widget_at(Point p) {
  // topmost = last declared
  for (auto it = widgets_.rbegin(); it != widgets_.rend(); ++it) {
    if (it->visible && it->rect.contains(p)) return &*it;
  }
  return nullptr;
}

Widget* SimEnv::find_widget(const std::string& id) {
  for (auto& w : widgets_)
    if (w.id == id) return &w;
  return nullptr;
}

const Widget* SimEnv::widget(const std::string& id) const {
  for (const auto& w : widgets_)
    if (w.id == id) return &w;
  return nullptr;
}

void SimEnv::dispatch_click(Point at) {
  Widget* w = widget_at(at);
  if (!w || !w->enabled) return;
  ++w->clicks;
  if (w->is_input) input_focus_ = w->id;
  apply_effects(*w);
}

void SimEnv::apply_effects(Widget& w) {
  for (const auto& e : w.effects) {
    switch (e.kind) {
      case Effect::Kind::none:
        break;
      case Effect::Kind::show_group:
        for (auto& other : widgets_) {
          if (other.group.empty()) continue;
          other.visible = other.group == e.arg;
        }
        break;
      case Effect::Kind::set_flag:
        flags_.insert(e.arg);
        break;
      case Effect::Kind::count:
        ++counters_[e.arg];
        break;
      case Effect::Kind::focus_input:
        input_focus_ = w.id;
        break;
      case Effect::Kind::submit: {
        Widget* input = find_widget(e.arg);
        if (input && !input->text.empty()) {
          try {
            submitted_[e.arg] = std::stod(input->text);
          } catch (const std::exception&) {
            // non-numeric submissions are recorded as NaN
            submitted_[e.arg] = std::nan("");
          }
        }
        input_focus_.clear();
        break;
      }
      case Effect::Kind::toggle: {
        Widget* other = find_widget(e.arg);
        if (other) other->enabled = !other->enabled;
        break;
      }
    }
  }
}

Tile& SimEnv::tile_at(int x, int y) {
  return tiles_[static_cast<std::size_t>(y) * grid_w_ + x];
}

const Tile& SimEnv::tile_at(int x, int y) const {
  return tiles_[static_cast<std::size_t>(y) * grid_w_ + x];
}

std::optional<double> SimEnv::submitted_value(const std::string& widget_id) const {
  auto it = submitted_.find(widget_id);
  if (it == submitted_.end()) return std::nullopt;
  return it->second;
}

bool SimEnv::check_goal() const {
  if (goals_.empty()) return false;
  for (const auto& g : goals_) {
    switch (g.kind) {
      case GoalClause::Kind::cleared:
        if (cleared_ < g.a) return false;
        break;
      case GoalClause::Kind::flag:
        if (!flags_.count(g.name)) return false;
        break;
      case GoalClause::Kind::at:
        if (avatar_.x != g.a || avatar_.y != g.b) return false;
        break;
      case GoalClause::Kind::input_between: {
        auto it = submitted_.find(g.name);
        if (it == submitted_.end()) return false;
        if (std::isnan(it->second) || it->second < g.lo || it->second > g.hi)
          return false;
        break;
      }
    }
  }
  return true;
}

Image SimEnv::render() const {
  Image img(screen_w_, screen_h_, kBackground);

  // tiles
  for (int y = 0; y < grid_h_; ++y) {
    for (int x = 0; x < grid_w_; ++x) {
      const Tile& t = tile_at(x, y);
      Rgb color = kFreeTile;
      if (t.kind == TileKind::obstacle) color = obstacle_color(t.obstacle_kind);
      else if (t.kind == TileKind::door) color = kDoorTile;
      else if (t.kind == TileKind::goal) color = kGoalTile;
      Rect r{grid_origin_.x + x * tile_size_, grid_origin_.y + y * tile_size_,
             grid_origin_.x + (x + 1) * tile_size_,
             grid_origin_.y + (y + 1) * tile_size_};
      img.fill_rect(r, color);
    }
  }

  // avatar with a facing notch
  if (grid_w_ > 0) {
    Rect a{grid_origin_.x + avatar_.x * tile_size_ + 2,
           grid_origin_.y + avatar_.y * tile_size_ + 2,
           grid_origin_.x + (avatar_.x + 1) * tile_size_ - 2,
           grid_origin_.y + (avatar_.y + 1) * tile_size_ - 2};
    img.fill_rect(a, kAvatar);
    Point c = {(a.x0 + a.x1) / 2, (a.y0 + a.y1) / 2};
    Point notch = c;
    switch (facing_) {
      case Facing::up: notch.y = a.y0; break;
      case Facing::down: notch.y = a.y1 - 2; break;
      case Facing::left: notch.x = a.x0; break;
      case Facing::right: notch.x = a.x1 - 2; break;
    }
    img.fill_rect(Rect{notch.x - 1, notch.y - 1, notch.x + 1, notch.y + 1},
                  kAvatarNotch);
  }

  // widgets
  for (const auto& w : widgets_) {
    if (!w.visible) continue;
    img.fill_rect(w.rect, w.enabled ? kWidgetEnabled : kWidgetDisabled);
    img.draw_rect_border(w.rect, kWidgetBorder, 1);
    std::string shown = w.is_input ? w.text : w.label;
    draw_text_clipped(img, w.rect.x0 + 3, w.rect.y0 + 3, shown, kWidgetText,
                      w.rect);
  }

  // overlay: tooltip after the hover latency
  if (!hover_widget_.empty() && sim_ticks_ - hover_since_ >= kTooltipLatency) {
    const Widget* w = widget(hover_widget_);
    if (w && w->visible && w->enabled && !w->tooltip.empty()) {
      Point ext = text_extent(w->tooltip);
      int tx = std::min(w->rect.x0, screen_w_ - ext.x - 4);
      int ty = w->rect.y0 - ext.y - 4;
      if (ty < 0) ty = w->rect.y1 + 2;
      Rect box{std::max(0, tx), std::max(0, ty), std::max(0, tx) + ext.x + 4,
               std::max(0, ty) + ext.y + 4};
      img.fill_rect(box, kTooltipBg);
      draw_text(img, box.x0 + 2, box.y0 + 2, w->tooltip, kTooltipText);
    }
  }

  // paused indicator (transient; disappears on unpause)
  if (paused_) img.fill_rect(Rect{2, 2, 6, 6}, kPausedDot);

  return img;
}

std::string SimEnv::state_digest() const {
  Image img = render();
  Sha256 h;
  int dims[2] = {img.width(), img.height()};
  h.update(dims, sizeof(dims));
  h.update(img.data().data(), img.data().size());
  return h.hex_digest();
}

}  // namespace cradle::sim
