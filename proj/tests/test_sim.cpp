#include <random>

#include "doctest.h"

#include "cradle/core/error.hpp"
#include "cradle/sim/env.hpp"

using namespace cradle;
using namespace cradle::sim;

namespace {

const char* kSmallScenario = R"(
scenario v1
seed 1
screen 160 120
tile_size 8
grid_origin 8 8
move_rate 2
facing right
selected_tool 1
tool 1 scythe W
grid
#######
#.....#
#.@W..#
#.....#
#######
end
goal cleared 1
pause_key esc
)";

SimEnv small_env() { return SimEnv::parse_scenario(kSmallScenario); }

void press(SimEnv& env, SimClock& clock, const std::string& key, Tick hold) {
  env.submit(clock.now(), io::KeyDown{key});
  clock.advance(hold);
  env.submit(clock.now(), io::KeyUp{key});
}

}  // namespace

TEST_CASE("minimal scenario loads; malformed ones do not") {
  CHECK_NOTHROW(SimEnv::parse_scenario(
      "scenario v1\ngrid\n.....\n.....\n.....\n.....\n.....\nend\n"));
  CHECK_THROWS_AS(SimEnv::parse_scenario("grid\n..\nend\n"), Error);  // no header
  // avatar placed on an obstacle
  CHECK_THROWS_AS(SimEnv::parse_scenario(
                      "scenario v1\ngrid\nW..\n.#.\n...\nend\navatar 0 0\n"),
                  Error);
  // widget sticking out of the screen
  CHECK_THROWS_AS(SimEnv::parse_scenario("scenario v1\nscreen 100 100\n"
                                         "widget w 90 90 40 20 \"X\" \"T\" enabled\n"),
                  Error);
}

TEST_CASE("identical scenario text gives identical initial render digests") {
  SimEnv a = small_env();
  SimEnv b = small_env();
  CHECK(a.state_digest() == b.state_digest());
  // and rendering twice without stepping changes nothing
  CHECK(a.render() == a.render());
}

TEST_CASE("holding w for half a second at rate 2 moves one tile up") {
  SimEnv env = small_env();
  SimClock clock(20);
  env.attach_clock(clock);
  Point before = env.avatar_tile();
  press(env, clock, "w", 10);  // 0.5 s
  CHECK(env.avatar_tile() == Point{before.x, before.y - 1});
}

TEST_CASE("movement is blocked by obstacles and sets the blocked flag") {
  SimEnv env = small_env();
  SimClock clock(20);
  env.attach_clock(clock);
  // weed is directly right of the avatar
  Point before = env.avatar_tile();
  press(env, clock, "d", 20);
  CHECK(env.avatar_tile() == before);
  CHECK(env.blocked());
}

TEST_CASE("do_action clears a matching obstacle and bumps the counter") {
  SimEnv env = small_env();
  SimClock clock(20);
  env.attach_clock(clock);
  CHECK_FALSE(env.check_goal());
  press(env, clock, "e", 2);
  CHECK(env.cleared_count() == 1);
  CHECK(env.check_goal());
  // clearing again does nothing (tile now free)
  press(env, clock, "e", 2);
  CHECK(env.cleared_count() == 1);
}

TEST_CASE("wrong tool does not clear") {
  SimEnv env = SimEnv::parse_scenario(R"(
scenario v1
tool 1 axe T
tool 2 scythe W
selected_tool 1
facing right
grid
.@W
end
goal cleared 1
)");
  SimClock clock(20);
  env.attach_clock(clock);
  press(env, clock, "e", 2);
  CHECK(env.cleared_count() == 0);
  CHECK(env.has_flag("wrong_tool"));
  // select the scythe, then it works
  press(env, clock, "2", 2);
  CHECK(env.selected_tool() == 2);
  press(env, clock, "e", 2);
  CHECK(env.cleared_count() == 1);
}

TEST_CASE("unfocused env ignores events and freezes sim time") {
  SimEnv env = small_env();
  SimClock clock(20);
  env.attach_clock(clock);
  env.set_focus(clock.now(), false);
  Tick before = env.sim_ticks();
  clock.advance(100);
  CHECK(env.sim_ticks() == before);
  env.submit(clock.now(), io::KeyDown{"w"});
  clock.advance(20);
  env.submit(clock.now(), io::KeyUp{"w"});
  CHECK(env.avatar_tile() == Point{2, 2});
  CHECK_FALSE(env.ignored_events().empty());

  env.set_focus(clock.now(), true);
  clock.advance(10);
  CHECK(env.sim_ticks() == before + 10);
}

TEST_CASE("esc toggle pauses and restores run state") {
  SimEnv env = small_env();
  SimClock clock(20);
  env.attach_clock(clock);
  clock.advance(4);
  std::string digest_before = env.state_digest();

  env.submit(clock.now(), io::KeyDown{"esc"});
  env.submit(clock.now(), io::KeyUp{"esc"});
  CHECK(env.paused());
  clock.advance(50);  // frozen while paused
  Tick paused_time = env.sim_ticks();
  // inputs other than the pause key are ignored while paused
  env.submit(clock.now(), io::KeyDown{"w"});
  env.submit(clock.now(), io::KeyUp{"w"});

  env.submit(clock.now(), io::KeyDown{"esc"});
  env.submit(clock.now(), io::KeyUp{"esc"});
  CHECK_FALSE(env.paused());
  CHECK(env.sim_ticks() == paused_time);
  CHECK(env.avatar_tile() == Point{2, 2});
  CHECK(env.state_digest() == digest_before);  // pause+unpause left no trace
}

TEST_CASE("widgets: clicks on enabled widgets fire effects, disabled ignore") {
  SimEnv env = SimEnv::parse_scenario(R"(
scenario v1
screen 200 100
widget go 20 20 60 30 "GO" "Start" enabled effect=set:started
widget nope 100 20 60 30 "NO" "Locked" disabled effect=set:broken
goal flag started
)");
  SimClock clock(20);
  env.attach_clock(clock);

  // click the disabled widget: nothing happens
  env.submit(clock.now(), io::PointerTo{130, 35});
  env.submit(clock.now(), io::ButtonDown{io::Button::left});
  env.submit(clock.now(), io::ButtonUp{io::Button::left});
  CHECK_FALSE(env.has_flag("broken"));
  CHECK(env.widget("nope")->clicks == 0);

  env.submit(clock.now(), io::PointerTo{50, 35});
  env.submit(clock.now(), io::ButtonDown{io::Button::left});
  env.submit(clock.now(), io::ButtonUp{io::Button::left});
  CHECK(env.has_flag("started"));
  CHECK(env.check_goal());
}

TEST_CASE("tooltip appears only after the pointer rests two ticks") {
  SimEnv env = SimEnv::parse_scenario(R"(
scenario v1
screen 200 100
widget b 40 40 60 30 "B" "Helpful words" enabled effect=none
)");
  SimClock clock(20);
  env.attach_clock(clock);

  Image before = env.render();
  env.submit(clock.now(), io::PointerTo{70, 55});
  Image immediately = env.render();
  CHECK(immediately == before);  // no tooltip yet

  clock.advance(1);
  CHECK(env.render() == before);  // one tick: still nothing

  clock.advance(1);
  Image with_tooltip = env.render();
  CHECK_FALSE(with_tooltip == before);  // two ticks: tooltip visible

  // moving off the widget removes it again
  env.submit(clock.now(), io::PointerTo{5, 5});
  clock.advance(5);
  CHECK(env.render() == before);
}

TEST_CASE("input widgets accept typed digits and submit validates") {
  SimEnv env = SimEnv::parse_scenario(R"(
scenario v1
screen 200 100
widget price 20 20 80 24 "" "Price" enabled effect=focus_input input
widget ok 120 20 50 24 "OK" "Send" enabled effect=submit:price,set:sent
goal flag sent
goal input price between 100 150
)");
  SimClock clock(20);
  env.attach_clock(clock);

  auto click = [&](int x, int y) {
    env.submit(clock.now(), io::PointerTo{x, y});
    env.submit(clock.now(), io::ButtonDown{io::Button::left});
    env.submit(clock.now(), io::ButtonUp{io::Button::left});
  };
  auto type_key = [&](const std::string& k) {
    env.submit(clock.now(), io::KeyDown{k});
    env.submit(clock.now(), io::KeyUp{k});
  };

  click(60, 32);  // focus the input
  type_key("1");
  type_key("2");
  type_key("0");
  CHECK(env.widget("price")->text == "120");
  CHECK_FALSE(env.check_goal());

  click(145, 32);  // propose
  CHECK(env.has_flag("sent"));
  REQUIRE(env.submitted_value("price").has_value());
  CHECK(*env.submitted_value("price") == doctest::Approx(120));
  CHECK(env.check_goal());
}

TEST_CASE("out-of-range submission fails the input goal") {
  SimEnv env = SimEnv::parse_scenario(R"(
scenario v1
screen 200 100
widget price 20 20 80 24 "" "Price" enabled effect=focus_input input
widget ok 120 20 50 24 "OK" "Send" enabled effect=submit:price,set:sent
goal flag sent
goal input price between 100 150
)");
  SimClock clock(20);
  env.attach_clock(clock);
  env.submit(clock.now(), io::PointerTo{60, 32});
  env.submit(clock.now(), io::ButtonDown{io::Button::left});
  env.submit(clock.now(), io::ButtonUp{io::Button::left});
  for (const char* k : {"9", "9"}) {
    env.submit(clock.now(), io::KeyDown{std::string(k)});
    env.submit(clock.now(), io::KeyUp{std::string(k)});
  }
  env.submit(clock.now(), io::PointerTo{145, 32});
  env.submit(clock.now(), io::ButtonDown{io::Button::left});
  env.submit(clock.now(), io::ButtonUp{io::Button::left});
  CHECK(env.has_flag("sent"));
  CHECK_FALSE(env.check_goal());  // 99 outside [100, 150]
}

TEST_CASE("show effect swaps widget groups exclusively") {
  SimEnv env = SimEnv::parse_scenario(R"(
scenario v1
screen 200 100
widget m1 10 70 50 24 "A" "Menu A" enabled effect=show:ga
widget m2 70 70 50 24 "B" "Menu B" enabled effect=show:gb
widget a1 10 30 50 20 "A1" "Item" enabled effect=none group=ga hidden
widget b1 70 30 50 20 "B1" "Item" enabled effect=none group=gb hidden
)");
  SimClock clock(20);
  env.attach_clock(clock);
  auto click = [&](int x, int y) {
    env.submit(clock.now(), io::PointerTo{x, y});
    env.submit(clock.now(), io::ButtonDown{io::Button::left});
    env.submit(clock.now(), io::ButtonUp{io::Button::left});
  };
  CHECK_FALSE(env.widget("a1")->visible);
  click(35, 82);
  CHECK(env.widget("a1")->visible);
  CHECK_FALSE(env.widget("b1")->visible);
  click(95, 82);
  CHECK_FALSE(env.widget("a1")->visible);
  CHECK(env.widget("b1")->visible);
}

TEST_CASE("determinism: identical event traces reproduce the digest") {
  std::mt19937 rng(2024);
  for (int round = 0; round < 5; ++round) {
    std::vector<std::pair<Tick, io::Event>> trace;
    Tick t = 0;
    const char* keys[] = {"w", "a", "s", "d", "e"};
    for (int i = 0; i < 60; ++i) {
      t += 1 + static_cast<Tick>(rng() % 8);
      const std::string key = keys[rng() % 5];
      trace.push_back({t, io::KeyDown{key}});
      t += 1 + static_cast<Tick>(rng() % 15);
      trace.push_back({t, io::KeyUp{key}});
    }

    auto run = [&]() {
      SimEnv env = small_env();
      SimClock clock(20);
      env.attach_clock(clock);
      for (const auto& [at, ev] : trace) {
        if (at > clock.now()) clock.advance(at - clock.now());
        env.submit(at, ev);
      }
      clock.advance(10);
      return env.state_digest();
    };
    CHECK(run() == run());
  }
}

TEST_CASE("avatar never ends up on an obstacle under random traces") {
  std::mt19937 rng(99);
  for (int round = 0; round < 10; ++round) {
    SimEnv env = small_env();
    SimClock clock(20);
    env.attach_clock(clock);
    const char* keys[] = {"w", "a", "s", "d"};
    for (int i = 0; i < 200; ++i) {
      const std::string key = keys[rng() % 4];
      env.submit(clock.now(), io::KeyDown{key});
      clock.advance(1 + static_cast<Tick>(rng() % 30));
      env.submit(clock.now(), io::KeyUp{key});
      Point a = env.avatar_tile();
      CHECK(a.x >= 0);
      CHECK(a.y >= 0);
      // the env's own walkability invariant, re-checked from outside:
      // rendering cannot crash and the avatar is on the grid
      env.render();
    }
  }
}
