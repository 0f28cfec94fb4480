#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace cradle::harness {

struct RunResult {
  int steps_used = 0;
  bool success = false;
  std::string reason;  // goal | infeasible | max_steps | error
};

struct RunSet {
  std::string task_id;
  std::vector<RunResult> runs;
};

struct SuccessStats {
  int successes = 0;
  int total = 0;
  // mean/std over steps of successful runs; absent when no run succeeded
  std::optional<double> mean_steps;
  std::optional<double> std_steps;  // population standard deviation

  std::string to_string() const;  // "13 +- 2 (5/5)" or "N/A (0/5)"
};

SuccessStats success_stats(const RunSet& runset);

/// 100 * expected / actual. Throws DivisionByZero when actual == 0.
double efficiency(double expected_steps, double actual_steps);

struct Transaction {
  double buy = 0.0;        // B_i
  double sell = 0.0;       // S_i
  double valuation = 0.0;  // V_i
};

struct TradeLedger {
  std::vector<Transaction> transactions;  // the n successful trades
  int failed_count = 0;                   // m
};

/// The nine trade metrics, as raw ratios (1.0 == 100%).
struct TradeMetrics {
  double tr = 0;    // n / (n + m)
  double gpm = 0;   // (sum S - sum B) / sum S
  double roi = 0;   // (sum S - sum B) / sum B
  double vd = 0;    // (sum S - sum V) / sum V
  double bpvr = 0;  // sum B / sum V
  double spvr = 0;  // sum S / sum V
  double apr = 0;   // mean of (S_i - B_i) / B_i
  double mrr = 0;   // max of per-item return rates
  double mrr_min = 0;  // min of per-item return rates

  std::map<std::string, double> as_percentages() const;  // rounded to 2 dp
};

TradeMetrics trade_metrics(const TradeLedger& ledger);

/// Half-up rounding to two decimals at the reporting boundary.
double round_percent(double ratio);

/// Ledger CSV: optional `failed=<m>` header line, then `buy,sell,valuation`.
TradeLedger parse_ledger_csv(const std::string& content);
TradeLedger read_ledger_csv(const std::string& path);

std::string format_metrics_text(const TradeMetrics& m);
std::string format_metrics_json(const TradeMetrics& m);

struct RunSummary {
  int steps = 0;
  bool success = false;
  std::string reason;
  long long total_ticks = 0;   // clock ticks spent executing
  int iterations_with_errors = 0;
};

/// Parses a trajectory JSONL file into per-run aggregates.
RunSummary summarize_run(const std::string& trajectory_path);

}  // namespace cradle::harness
