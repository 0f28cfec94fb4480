// Regenerates the cassette fixtures under data/cassettes by running each
// bundled profile against its scripted provider and recording the traffic.
// Normally these cassettes ship with the repository; rerun this tool after
// changing prompts, scenarios or the scripted choreography.

#include <cstdio>
#include <filesystem>
#include <iostream>

#include "cradle/llm/cassette.hpp"
#include "cradle/pipeline/runner.hpp"
#include "../tests/fixtures.hpp"

namespace fs = std::filesystem;
using namespace cradle;

int main(int argc, char** argv) {
  std::string data = fixtures::data_dir();
  if (argc > 1) data = argv[1];

  fs::create_directories(data + "/cassettes");
  int failures = 0;

  for (const std::string name : {"clearup", "navigate", "toolbar", "haggle"}) {
    std::string cassette = data + "/cassettes/" + name + ".jsonl";
    std::remove(cassette.c_str());

    auto scripted = fixtures::make_scripted(name);
    llm::CassetteProvider recorder(cassette, llm::CassetteMode::record,
                                   scripted.get());

    pipeline::Profile profile =
        pipeline::load_profile(data + "/profiles/" + name + ".profile");
    pipeline::Runner runner(profile, recorder);
    pipeline::RunOutcome outcome = runner.run();

    std::cout << name << ": " << (outcome.success ? "success" : "FAILURE")
              << " in " << outcome.steps_used << " step(s), "
              << recorder.entries() << " cassette entries\n";
    if (!outcome.success) ++failures;
  }
  return failures == 0 ? 0 : 1;
}
