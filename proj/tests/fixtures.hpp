#pragma once

// Scripted provider choreography for the simenv fixture scenarios. The same
// scripts drive the in-process pipeline tests and the cassette recorder, so
// recorded cassettes and live runs stay in lockstep.

#include <memory>
#include <string>

#include "cradle/core/error.hpp"
#include "cradle/llm/provider.hpp"

namespace cradle::fixtures {

inline std::string data_dir() {
#ifdef CRADLE_DATA_DIR
  return CRADLE_DATA_DIR;
#else
  return "data";
#endif
}

inline std::string profile_path(const std::string& name) {
  return data_dir() + "/profiles/" + name + ".profile";
}

inline std::unique_ptr<llm::ScriptedProvider> make_scripted(const std::string& name) {
  auto provider = std::make_unique<llm::ScriptedProvider>(8);
  auto& p = *provider;

  if (name == "clearup") {
    p.route("Extract all on-screen text",
            {"Text: Hint panel: press [E] to cut weeds with the scythe."});
    p.route("Describe the attached screenshot",
            {"Description: The avatar stands in a field with three weed tiles "
             "directly to its right."});
    p.route("task inference module", {"Task: none\nHorizon: long"});
    p.route("On-screen guidance",
            {"Skills:\n"
             "```skill\n"
             "skill clear_three_weeds() doc \"Cut three weeds in a row to the "
             "right, stepping forward between cuts.\" {\n"
             "  key_press(\"e\", 0.2);\n"
             "  key_press(\"d\", 0.5);\n"
             "  key_press(\"e\", 0.2);\n"
             "  key_press(\"d\", 0.5);\n"
             "  key_press(\"e\", 0.2);\n"
             "}\n"
             "```\n"
             "Notes: The hint names the cut interaction."});
    p.route("action planning module",
            {"Actions:\n- clear_three_weeds()\nReasoning: The hint says [E] cuts "
             "weeds; cut all three, stepping right between cuts."});
    p.route("Rewrite the summary",
            {"The agent saw three weeds and cleared them with the scythe."});
    return provider;
  }

  if (name == "navigate") {
    p.route("Extract all on-screen text",
            {"Text: none", "Text: none"});
    p.route("Describe the attached screenshot",
            {"Description: A walled room; the door sits in the upper right "
             "corner behind a wall; a corridor runs along the bottom.",
             "Description: The avatar stands at the corridor end, two tiles "
             "below the door."});
    p.route("self-reflection module",
            {"Success: true\nTaskComplete: false\nAnalysis: ok\n"
             "ContinueAction: false"});
    p.route("task inference module",
            {"Task: none\nHorizon: long", "Task: none\nHorizon: long"});
    p.route("On-screen guidance",
            {"Skills:\nNotes: nothing new on screen.",
             "Skills:\nNotes: nothing new on screen."});
    p.route("action planning module",
            {"Actions:\n- move_right(2.5)\nReasoning: Follow the corridor to "
             "its right end, under the door.",
             "Actions:\n- move_up(1.0)\nReasoning: The door is two tiles above "
             "the corridor end."});
    p.route("Rewrite the summary",
            {"The agent walked right along the corridor.",
             "The agent walked right along the corridor. It then climbed up to "
             "the door."});
    return provider;
  }

  if (name == "toolbar") {
    p.route("inspecting a toolbar item",
            {"Tooltip: Roads\nSelectable: true",
             "Tooltip: Two-Lane Road\nSelectable: true",
             "Tooltip: Water & Sewage\nSelectable: true",
             "Tooltip: Water Pipe\nSelectable: true",
             "Tooltip: Education - Reach a population of 440\nSelectable: false"});
    p.route("A toolbar item described as",
            {"Skill:\n```skill\nskill open_roads_menu() doc \"Open the Roads "
             "menu in the toolbar.\" {\n  mouse_move((50, 160), 0.1, "
             "\"absolute\");\n  button_click(\"left\", 0.1);\n}\n```",
             "Skill:\n```skill\nskill select_two_lane_road() doc \"Select the "
             "two-lane road tool from the roads menu.\" {\n  mouse_move((50, "
             "100), 0.1, \"absolute\");\n  button_click(\"left\", 0.1);\n}\n```",
             "Skill:\n```skill\nskill open_water_sewage_menu() doc \"Open the "
             "water and sewage menu in the toolbar.\" {\n  mouse_move((150, "
             "160), 0.1, \"absolute\");\n  button_click(\"left\", 0.1);\n}\n```",
             "Skill:\n```skill\nskill select_water_pipe() doc \"Select the "
             "water pipe tool from the water menu.\" {\n  mouse_move((150, "
             "100), 0.1, \"absolute\");\n  button_click(\"left\", 0.1);\n}\n```"});
    return provider;
  }

  if (name == "haggle") {
    p.route("Extract all on-screen text",
            {"Text: OFFER 120 GOLD FOR THE RING",
             "Text: OFFER 120 GOLD FOR THE RING; price box shows 120"});
    p.route("Describe the attached screenshot",
            {"Description: A trade dialog; the offer banner, the price input "
             "box and the OK button are marked.",
             "Description: The price box now shows 120; the OK button is the "
             "last numbered mark."});
    p.route("self-reflection module",
            {"Success: true\nTaskComplete: false\nAnalysis: ok\n"
             "ContinueAction: false"});
    p.route("task inference module",
            {"Task: none\nHorizon: long", "Task: none\nHorizon: long"});
    p.route("On-screen guidance",
            {"Skills:\nNotes: standard dialog controls only.",
             "Skills:\nNotes: standard dialog controls only."});
    p.route("action planning module",
            {"Actions:\n- click_at_position((90, 114))\n- type_string(\"120\", "
             "0.5)\nReasoning: Focus the price box and type the counter-offer.",
             "Actions:\n- click_label(4)\nReasoning: Propose the typed price "
             "via the OK button mark."});
    p.route("Rewrite the summary",
            {"The agent typed 120 into the price box.",
             "The agent typed 120 into the price box. It then proposed the "
             "price."});
    return provider;
  }

  raise(errc::config_error, "no scripted fixture named '" + name + "'");
}

}  // namespace cradle::fixtures
