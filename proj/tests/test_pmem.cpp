#include <thread>
#include <algorithm>
#include <cstdio>
#include <random>

#include "doctest.h"

#include "cradle/pmem/store.hpp"
#include "cradle/skill/parser.hpp"

using namespace cradle;
using namespace cradle::pmem;

namespace {

SkillEntry make_entry(const std::string& name, std::vector<double> embedding,
                      const std::string& doc = "") {
  SkillEntry e;
  skill::SkillScript s = skill::parse("skill " + name + "() doc \"" +
                                      (doc.empty() ? name : doc) +
                                      "\" { wait(0.1); }");
  e.doc = s.doc;
  e.impl = std::move(s);
  e.embedding = std::move(embedding);
  e.source = SkillSource::generated;
  return e;
}

/// Provider whose embeddings are looked up from a fixed table.
class TableProvider : public llm::Provider {
 public:
  std::map<std::string, std::vector<double>> table;
  int embed_calls = 0;

  std::string complete(const llm::CompletionRequest&) override { return ""; }
  std::vector<std::vector<double>> embed(const std::vector<std::string>& texts) override {
    ++embed_calls;
    std::vector<std::vector<double>> out;
    for (const auto& t : texts) {
      auto it = table.find(t);
      REQUIRE(it != table.end());
      out.push_back(it->second);
    }
    return out;
  }
};

}  // namespace

TEST_CASE("add, duplicate and dimension checks") {
  SkillStore store(2);
  store.add(make_entry("alpha", {1.0, 0.0}));
  CHECK(store.size() == 1);
  CHECK_THROWS_AS(store.add(make_entry("alpha", {0.0, 1.0})), Error);
  CHECK_THROWS_AS(store.add(make_entry("beta", {1.0, 0.0, 0.0})), Error);
  CHECK(store.size() == 1);
}

TEST_CASE("embeddings normalize at insertion") {
  SkillStore store(2);
  store.add(make_entry("alpha", {3.0, 4.0}));
  const SkillEntry* e = store.find("alpha");
  REQUIRE(e != nullptr);
  double norm = 0;
  for (double x : e->embedding) norm += x * x;
  CHECK(std::sqrt(norm) == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("retrieve matches the worked example") {
  SkillStore store(2);
  store.add(make_entry("A", {1.0, 0.0}));
  store.add(make_entry("B", {0.0, 1.0}));
  store.add(make_entry("C", {0.6, 0.8}));

  TableProvider provider;
  provider.table["task"] = {1.0, 0.0};
  auto top = store.retrieve("task", 2, provider);
  REQUIRE(top.size() == 2);
  CHECK(top[0].entry->name() == "A");
  CHECK(top[0].similarity == doctest::Approx(1.0));
  CHECK(top[1].entry->name() == "C");
  CHECK(top[1].similarity == doctest::Approx(0.6));

  // k beyond size returns everything, fully sorted
  auto all = store.retrieve("task", 10, provider);
  REQUIRE(all.size() == 3);
  CHECK(all[2].entry->name() == "B");
}

TEST_CASE("ties break lexicographically by name") {
  SkillStore store(2);
  store.add(make_entry("zeta", {1.0, 0.0}));
  store.add(make_entry("alpha", {1.0, 0.0}));
  TableProvider provider;
  provider.table["t"] = {1.0, 0.0};
  auto top = store.retrieve("t", 2, provider);
  CHECK(top[0].entry->name() == "alpha");
  CHECK(top[1].entry->name() == "zeta");
}

TEST_CASE("retrieve equals brute force on random stores") {
  std::mt19937 rng(123);
  std::normal_distribution<double> gauss(0.0, 1.0);
  const int dim = 8;

  for (int round = 0; round < 20; ++round) {
    int n = 1 + static_cast<int>(rng() % 200);
    SkillStore store(dim);
    std::vector<std::pair<std::string, std::vector<double>>> raw;
    for (int i = 0; i < n; ++i) {
      std::vector<double> v(dim);
      for (auto& x : v) x = gauss(rng);
      std::string name = "skill_" + std::to_string(i);
      store.add(make_entry(name, v));
      raw.push_back({name, v});
    }
    std::vector<double> task(dim);
    for (auto& x : task) x = gauss(rng);

    TableProvider provider;
    provider.table["q"] = task;
    int k = 1 + static_cast<int>(rng() % 20);
    auto got = store.retrieve("q", k, provider);

    // independent brute-force cosine sort
    std::vector<std::pair<double, std::string>> oracle;
    for (const auto& [name, v] : raw)
      oracle.push_back({cosine(task, v), name});
    std::sort(oracle.begin(), oracle.end(), [](const auto& a, const auto& b) {
      if (a.first != b.first) return a.first > b.first;
      return a.second < b.second;
    });

    REQUIRE(got.size() == std::min<std::size_t>(k, oracle.size()));
    for (std::size_t i = 0; i < got.size(); ++i) {
      CHECK(got[i].entry->name() == oracle[i].second);
      CHECK(got[i].similarity == doctest::Approx(oracle[i].first).epsilon(1e-9));
    }

    // argsort invariance under positive scaling of the task embedding
    std::vector<double> scaled = task;
    for (auto& x : scaled) x *= 37.5;
    provider.table["q2"] = scaled;
    auto scaled_got = store.retrieve("q2", k, provider);
    REQUIRE(scaled_got.size() == got.size());
    for (std::size_t i = 0; i < got.size(); ++i)
      CHECK(scaled_got[i].entry->name() == got[i].entry->name());
  }
}

TEST_CASE("cosine identities") {
  std::mt19937 rng(5);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (int i = 0; i < 50; ++i) {
    std::vector<double> v(8);
    for (auto& x : v) x = gauss(rng);
    double norm = 0;
    for (double x : v) norm += x * x;
    norm = std::sqrt(norm);
    for (auto& x : v) x /= norm;
    std::vector<double> neg = v;
    for (auto& x : neg) x = -x;
    CHECK(cosine(v, v) == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(cosine(v, neg) == doctest::Approx(-1.0).epsilon(1e-9));
  }
}

TEST_CASE("update recomputes embeddings only when the doc changes") {
  SkillStore store(2);
  store.add(make_entry("shoot", {1.0, 0.0}, "fire the weapon"));

  TableProvider provider;
  provider.table["aim then fire"] = {0.0, 1.0};

  // same doc: no provider call, embedding unchanged
  skill::SkillScript same = skill::parse(
      R"(skill shoot() doc "fire the weapon" { key_press("f", 0.2); })");
  store.update("shoot", same, provider);
  CHECK(provider.embed_calls == 0);
  CHECK(store.find("shoot")->embedding[0] == doctest::Approx(1.0));

  // changed doc: embedding recomputed
  skill::SkillScript changed = skill::parse(
      R"(skill shoot() doc "aim then fire" { key_press("f", 0.2); })");
  store.update("shoot", changed, provider);
  CHECK(provider.embed_calls == 1);
  CHECK(store.find("shoot")->embedding[1] == doctest::Approx(1.0));

  CHECK_THROWS_AS(store.update("missing", changed, provider), Error);
}

TEST_CASE("concurrent retrievals agree with each other") {
  SkillStore store(4);
  for (int i = 0; i < 50; ++i) {
    std::vector<double> v = {double(i % 7) + 0.1, double(i % 5), double(i % 3), 1.0};
    store.add(make_entry("skill_" + std::to_string(i), v));
  }

  class FixedProvider : public llm::Provider {
   public:
    std::string complete(const llm::CompletionRequest&) override { return ""; }
    std::vector<std::vector<double>> embed(const std::vector<std::string>&) override {
      return {{0.3, 0.2, 0.9, 0.1}};
    }
  } provider;

  auto reference = store.retrieve("q", 10, provider);
  std::vector<std::string> expected;
  for (const auto& r : reference) expected.push_back(r.entry->name());

  std::vector<std::thread> threads;
  std::vector<std::vector<std::string>> results(8);
  for (int t = 0; t < 8; ++t) {
    threads.emplace_back([&, t] {
      for (int round = 0; round < 50; ++round) {
        auto got = store.retrieve("q", 10, provider);
        results[t].clear();
        for (const auto& r : got) results[t].push_back(r.entry->name());
      }
    });
  }
  for (auto& th : threads) th.join();
  for (const auto& r : results) CHECK(r == expected);
}

TEST_CASE("persist and load round trip") {
  SkillStore store(4);
  store.add(make_entry("alpha", {1, 0, 0, 0}, "first skill"));
  store.add(make_entry("beta", {0, 1, 0, 0}, "second skill\nwith newline"));
  skill::NativeSkill native;
  native.name = "builtin";
  native.doc = "a native";
  native.params.push_back(skill::Param{"x", skill::ParamKind::number});
  native.expand = [](const std::vector<skill::Value>&, const skill::CompileContext&) {
    return std::vector<io::ActionPrimitive>{};
  };
  SkillEntry ne;
  ne.doc = native.doc;
  ne.impl = std::move(native);
  ne.embedding = {0, 0, 1, 0};
  ne.source = SkillSource::predefined;
  store.add(std::move(ne));

  std::string path = "test_store_roundtrip.tmp";
  store.persist(path);
  SkillStore loaded = SkillStore::load(path);
  CHECK(loaded.dim() == 4);
  CHECK(loaded.equals(store));
  const skill::NativeSkill* nat = loaded.find_native("builtin");
  REQUIRE(nat != nullptr);
  CHECK(nat->params.size() == 1);
  std::remove(path.c_str());
}

TEST_CASE("load rejects truncated and wrong-version files") {
  std::string path = "test_store_bad.tmp";
  {
    FILE* f = fopen(path.c_str(), "w");
    fputs("skillstore v1 dim=4\nentry broken\ndoc something\n", f);
    fclose(f);
  }
  CHECK_THROWS_AS(SkillStore::load(path), Error);
  {
    FILE* f = fopen(path.c_str(), "w");
    fputs("skillstore v9 dim=4\n", f);
    fclose(f);
  }
  try {
    SkillStore::load(path);
    FAIL("expected a version error");
  } catch (const Error& e) {
    CHECK(e.code() == errc::format_version_mismatch);
  }
  std::remove(path.c_str());
}
