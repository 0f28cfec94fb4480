#include <cstdio>
#include <random>

#include "doctest.h"

#include "cradle/core/error.hpp"
#include "cradle/core/text.hpp"
#include "cradle/harness/metrics.hpp"

using namespace cradle;
using namespace cradle::harness;

namespace {

TradeLedger single(double b, double s, double v) {
  TradeLedger ledger;
  ledger.transactions.push_back(Transaction{b, s, v});
  return ledger;
}

}  // namespace

TEST_CASE("success stats over five runs") {
  RunSet rs;
  rs.task_id = "t";
  for (int steps : {13, 10, 16, 12, 14})
    rs.runs.push_back(RunResult{steps, true, "goal"});
  SuccessStats stats = success_stats(rs);
  CHECK(stats.successes == 5);
  CHECK(stats.total == 5);
  CHECK(*stats.mean_steps == doctest::Approx(13.0));
  CHECK(*stats.std_steps == doctest::Approx(2.0));  // population sigma
}

TEST_CASE("all-failed runs report N/A") {
  RunSet rs;
  for (int i = 0; i < 5; ++i) rs.runs.push_back(RunResult{3, false, "max_steps"});
  SuccessStats stats = success_stats(rs);
  CHECK_FALSE(stats.mean_steps.has_value());
  CHECK(stats.to_string() == "N/A (0/5)");
}

TEST_CASE("single successful run has zero deviation") {
  RunSet rs;
  rs.runs.push_back(RunResult{7, true, "goal"});
  SuccessStats stats = success_stats(rs);
  CHECK(*stats.mean_steps == doctest::Approx(7.0));
  CHECK(*stats.std_steps == doctest::Approx(0.0));
}

TEST_CASE("failed runs are excluded from the step statistics") {
  RunSet rs;
  rs.runs.push_back(RunResult{10, true, "goal"});
  rs.runs.push_back(RunResult{500, false, "max_steps"});
  rs.runs.push_back(RunResult{12, true, "goal"});
  SuccessStats stats = success_stats(rs);
  CHECK(stats.successes == 2);
  CHECK(*stats.mean_steps == doctest::Approx(11.0));
}

TEST_CASE("efficiency matches the published rows exactly") {
  CHECK(round_percent(efficiency(3, 1) / 100.0) == doctest::Approx(300.00));
  CHECK(round_percent(efficiency(6, 16) / 100.0) == doctest::Approx(37.50));
  CHECK(efficiency(5, 5) == doctest::Approx(100.0));
  CHECK_THROWS_AS(efficiency(3, 0), Error);
}

TEST_CASE("efficiency is scale invariant") {
  std::mt19937 rng(3);
  for (int i = 0; i < 100; ++i) {
    double e = 1 + static_cast<double>(rng() % 50);
    double a = 1 + static_cast<double>(rng() % 50);
    CHECK(efficiency(2 * e, 2 * a) == doctest::Approx(efficiency(e, a)));
  }
}

TEST_CASE("turnover rate reproduces the published value") {
  TradeLedger ledger;
  for (int i = 0; i < 13; ++i)
    ledger.transactions.push_back(Transaction{10, 12, 11});
  ledger.failed_count = 1;
  TradeMetrics m = trade_metrics(ledger);
  CHECK(round_percent(m.tr) == doctest::Approx(92.86));
}

TEST_CASE("worked single-item example") {
  TradeMetrics m = trade_metrics(single(100, 150, 150));
  auto pct = m.as_percentages();
  CHECK(pct["GPM"] == doctest::Approx(33.33));
  CHECK(pct["ROI"] == doctest::Approx(50.00));
  CHECK(pct["VD"] == doctest::Approx(0.00));
  CHECK(pct["BPVR"] == doctest::Approx(66.67));
  CHECK(pct["SPVR"] == doctest::Approx(100.00));
  CHECK(pct["APR"] == doctest::Approx(50.00));
  CHECK(pct["MRR"] == doctest::Approx(50.00));
  CHECK(pct["mRR"] == doctest::Approx(50.00));
}

TEST_CASE("zero-profit ledger zeroes the profit metrics") {
  TradeLedger ledger;
  ledger.transactions = {Transaction{50, 50, 60}, Transaction{30, 30, 20}};
  TradeMetrics m = trade_metrics(ledger);
  CHECK(m.gpm == doctest::Approx(0.0));
  CHECK(m.roi == doctest::Approx(0.0));
  CHECK(m.apr == doctest::Approx(0.0));
  CHECK(m.mrr == doctest::Approx(0.0));
  CHECK(m.mrr_min == doctest::Approx(0.0));
}

TEST_CASE("degenerate ledgers raise the documented errors") {
  CHECK_THROWS_AS(trade_metrics(TradeLedger{}), Error);
  try {
    trade_metrics(single(0, 10, 10));
    FAIL("expected ZeroDenominator");
  } catch (const Error& e) {
    CHECK(e.code() == errc::zero_denominator);
  }
  try {
    TradeLedger ledger;
    ledger.failed_count = 3;  // n = 0: TR fine, per-item metrics impossible
    trade_metrics(ledger);
    FAIL("expected EmptyLedger");
  } catch (const Error& e) {
    CHECK(e.code() == errc::empty_ledger);
  }
}

TEST_CASE("oracle equivalence on random ledgers") {
  std::mt19937 rng(20240818);
  std::uniform_real_distribution<double> price(1.0, 500.0);
  for (int round = 0; round < 1000; ++round) {
    TradeLedger ledger;
    int n = 1 + static_cast<int>(rng() % 20);
    ledger.failed_count = static_cast<int>(rng() % 10);
    for (int i = 0; i < n; ++i)
      ledger.transactions.push_back(Transaction{price(rng), price(rng), price(rng)});

    TradeMetrics m = trade_metrics(ledger);

    // independent naive evaluation, straight from the formulas
    double sb = 0, ss = 0, sv = 0;
    for (const auto& t : ledger.transactions) {
      sb += t.buy;
      ss += t.sell;
      sv += t.valuation;
    }
    double apr = 0, mrr = -1e300, mrr_min = 1e300;
    for (const auto& t : ledger.transactions) {
      double r = (t.sell - t.buy) / t.buy;
      apr += r;
      if (r > mrr) mrr = r;
      if (r < mrr_min) mrr_min = r;
    }
    apr /= n;

    CHECK(m.tr == doctest::Approx(double(n) / (n + ledger.failed_count)).epsilon(1e-9));
    CHECK(m.gpm == doctest::Approx((ss - sb) / ss).epsilon(1e-9));
    CHECK(m.roi == doctest::Approx((ss - sb) / sb).epsilon(1e-9));
    CHECK(m.vd == doctest::Approx((ss - sv) / sv).epsilon(1e-9));
    CHECK(m.bpvr == doctest::Approx(sb / sv).epsilon(1e-9));
    CHECK(m.spvr == doctest::Approx(ss / sv).epsilon(1e-9));
    CHECK(m.apr == doctest::Approx(apr).epsilon(1e-9));
    CHECK(m.mrr == doctest::Approx(mrr).epsilon(1e-9));
    CHECK(m.mrr_min == doctest::Approx(mrr_min).epsilon(1e-9));

    // ordering invariant
    CHECK(m.mrr_min <= m.apr + 1e-12);
    CHECK(m.apr <= m.mrr + 1e-12);
  }
}

TEST_CASE("percent rounding is half-up at two decimals") {
  CHECK(round_percent(0.92855) == doctest::Approx(92.86));
  CHECK(round_percent(0.928549) == doctest::Approx(92.85));
  CHECK(round_percent(0.12345) == doctest::Approx(12.35));  // 12.345 rounds up
}

TEST_CASE("ledger csv parsing") {
  TradeLedger ledger = parse_ledger_csv(
      "# weekly trades\nfailed=2\nbuy,sell,valuation\n100,150,140\n10,9,12\n");
  CHECK(ledger.failed_count == 2);
  REQUIRE(ledger.transactions.size() == 2);
  CHECK(ledger.transactions[0].sell == doctest::Approx(150));
  CHECK_THROWS_AS(parse_ledger_csv("1,2\n"), Error);
}

TEST_CASE("metrics formatting") {
  TradeMetrics m = trade_metrics(single(100, 150, 150));
  std::string text = format_metrics_text(m);
  CHECK(text.find("TR") != std::string::npos);
  CHECK(text.find("33.33") != std::string::npos);
  std::string json = format_metrics_json(m);
  CHECK(json.find("\"GPM\": 33.33") != std::string::npos);
}

TEST_CASE("summarize_run parses trajectories and flags truncation") {
  std::string path = "test_traj.tmp";
  {
    FILE* f = fopen(path.c_str(), "w");
    fputs("{\"schema\":\"trajectory/1\",\"ticks_per_second\":20}\n", f);
    fputs("{\"preamble\":true,\"events\":[]}\n", f);
    fputs("{\"iteration\":1,\"tick_start\":0,\"tick_end\":30,\"errors\":[]}\n", f);
    fputs("{\"iteration\":2,\"tick_start\":30,\"tick_end\":45,\"errors\":[\"x\"]}\n", f);
    fputs("{\"final\":true,\"success\":true,\"steps\":2,\"reason\":\"goal\","
          "\"events\":[],\"final_tick\":45,\"final_render_digest\":\"d\"}\n", f);
    fclose(f);
  }
  RunSummary s = summarize_run(path);
  CHECK(s.steps == 2);
  CHECK(s.success);
  CHECK(s.total_ticks == 45);
  CHECK(s.iterations_with_errors == 1);

  // summarize twice: equal results
  RunSummary again = summarize_run(path);
  CHECK(again.steps == s.steps);
  CHECK(again.total_ticks == s.total_ticks);

  // truncated file (no footer)
  {
    FILE* f = fopen(path.c_str(), "w");
    fputs("{\"schema\":\"trajectory/1\"}\n{\"iteration\":1}\n", f);
    fclose(f);
  }
  CHECK_THROWS_AS(summarize_run(path), Error);
  std::remove(path.c_str());
}
