#include "cradle/harness/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "cradle/core/error.hpp"
#include "cradle/core/text.hpp"
#include "nlohmann/json.hpp"

namespace cradle::harness {

std::string SuccessStats::to_string() const {
  std::ostringstream ss;
  if (!mean_steps) {
    ss << "N/A (" << successes << "/" << total << ")";
    return ss.str();
  }
  ss.setf(std::ios::fixed);
  ss.precision(1);
  ss << *mean_steps << " +- " << *std_steps << " (" << successes << "/" << total
     << ")";
  return ss.str();
}

SuccessStats success_stats(const RunSet& runset) {
  SuccessStats stats;
  stats.total = static_cast<int>(runset.runs.size());
  std::vector<double> steps;
  for (const auto& r : runset.runs) {
    if (r.success) {
      ++stats.successes;
      steps.push_back(static_cast<double>(r.steps_used));
    }
  }
  if (steps.empty()) return stats;  // N/A: failure in all runs

  double mean = 0;
  for (double s : steps) mean += s;
  mean /= static_cast<double>(steps.size());
  double var = 0;
  for (double s : steps) var += (s - mean) * (s - mean);
  var /= static_cast<double>(steps.size());  // population variance
  stats.mean_steps = mean;
  stats.std_steps = std::sqrt(var);
  return stats;
}

double efficiency(double expected_steps, double actual_steps) {
  if (actual_steps == 0.0)
    raise(errc::division_by_zero, "actual steps must be positive");
  return 100.0 * expected_steps / actual_steps;
}

double round_percent(double ratio) {
  double percent = ratio * 100.0;
  // half-up at two decimals
  return std::floor(percent * 100.0 + 0.5) / 100.0;
}

TradeMetrics trade_metrics(const TradeLedger& ledger) {
  const auto& tx = ledger.transactions;
  const int n = static_cast<int>(tx.size());
  const int m = ledger.failed_count;
  if (n == 0 && m == 0) raise(errc::empty_ledger, "ledger has no attempts");

  TradeMetrics out;
  out.tr = static_cast<double>(n) / static_cast<double>(n + m);
  if (n == 0) raise(errc::empty_ledger, "per-item metrics need at least one trade");

  double sum_b = 0, sum_s = 0, sum_v = 0;
  for (const auto& t : tx) {
    if (t.buy < 0 || t.sell < 0 || t.valuation < 0)
      raise(errc::corrupt_entry, "negative amounts in ledger");
    sum_b += t.buy;
    sum_s += t.sell;
    sum_v += t.valuation;
  }
  if (sum_s == 0.0) raise(errc::zero_denominator, "sum of sell prices is zero (GPM)");
  if (sum_b == 0.0) raise(errc::zero_denominator, "sum of buy prices is zero (ROI)");
  if (sum_v == 0.0)
    raise(errc::zero_denominator, "sum of valuations is zero (VD/BPVR/SPVR)");

  out.gpm = (sum_s - sum_b) / sum_s;
  out.roi = (sum_s - sum_b) / sum_b;
  out.vd = (sum_s - sum_v) / sum_v;
  out.bpvr = sum_b / sum_v;
  out.spvr = sum_s / sum_v;

  double apr = 0;
  double mrr = -std::numeric_limits<double>::infinity();
  double mrr_min = std::numeric_limits<double>::infinity();
  for (const auto& t : tx) {
    if (t.buy == 0.0)
      raise(errc::zero_denominator, "zero buy price in per-item return rate");
    double rate = (t.sell - t.buy) / t.buy;
    apr += rate;
    mrr = std::max(mrr, rate);
    mrr_min = std::min(mrr_min, rate);
  }
  out.apr = apr / static_cast<double>(n);
  out.mrr = mrr;
  out.mrr_min = mrr_min;
  return out;
}

std::map<std::string, double> TradeMetrics::as_percentages() const {
  return {
      {"TR", round_percent(tr)},     {"GPM", round_percent(gpm)},
      {"ROI", round_percent(roi)},   {"VD", round_percent(vd)},
      {"BPVR", round_percent(bpvr)}, {"SPVR", round_percent(spvr)},
      {"APR", round_percent(apr)},   {"MRR", round_percent(mrr)},
      {"mRR", round_percent(mrr_min)},
  };
}

TradeLedger parse_ledger_csv(const std::string& content) {
  TradeLedger ledger;
  for (const auto& raw : split_lines(content)) {
    std::string line = trim(raw);
    if (line.empty() || line[0] == '#') continue;
    if (starts_with(line, "failed=")) {
      ledger.failed_count = std::stoi(line.substr(7));
      continue;
    }
    if (starts_with(line, "buy,")) continue;  // optional column header
    auto cols = split(line, ',');
    if (cols.size() != 3)
      raise(errc::corrupt_entry, "ledger line needs buy,sell,valuation: " + line);
    Transaction t;
    try {
      t.buy = std::stod(trim(cols[0]));
      t.sell = std::stod(trim(cols[1]));
      t.valuation = std::stod(trim(cols[2]));
    } catch (const std::exception&) {
      raise(errc::corrupt_entry, "unparsable ledger line: " + line);
    }
    ledger.transactions.push_back(t);
  }
  return ledger;
}

TradeLedger read_ledger_csv(const std::string& path) {
  return parse_ledger_csv(read_text_file(path));
}

namespace {

const std::vector<std::string>& metric_order() {
  static const std::vector<std::string> order = {
      "TR", "GPM", "ROI", "VD", "BPVR", "SPVR", "APR", "MRR", "mRR"};
  return order;
}

}  // namespace

std::string format_metrics_text(const TradeMetrics& m) {
  auto pct = m.as_percentages();
  std::ostringstream out;
  out.setf(std::ios::fixed);
  out.precision(2);
  for (const auto& name : metric_order()) {
    out.width(5);
    out << std::left << name << " ";
    out.width(10);
    out << std::right << pct.at(name) << "\n";
  }
  return out.str();
}

std::string format_metrics_json(const TradeMetrics& m) {
  nlohmann::ordered_json j;
  auto pct = m.as_percentages();
  for (const auto& name : metric_order()) j[name] = pct.at(name);
  return j.dump(2);
}

RunSummary summarize_run(const std::string& trajectory_path) {
  std::string content;
  try {
    content = read_text_file(trajectory_path);
  } catch (const Error&) {
    raise(errc::trajectory_parse_error, "cannot read " + trajectory_path);
  }
  auto lines = split_lines(content);
  if (lines.empty())
    raise(errc::trajectory_parse_error, "empty trajectory " + trajectory_path);

  auto parse = [&](const std::string& line) {
    auto j = nlohmann::json::parse(line, nullptr, false);
    if (j.is_discarded())
      raise(errc::trajectory_parse_error, "bad JSON line in " + trajectory_path);
    return j;
  };

  auto header = parse(lines[0]);
  if (header.value("schema", "") != std::string("trajectory/1"))
    raise(errc::trajectory_parse_error, "unknown schema in " + trajectory_path);

  RunSummary summary;
  bool saw_footer = false;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    if (trim(lines[i]).empty()) continue;
    auto j = parse(lines[i]);
    if (j.contains("preamble")) continue;
    if (j.contains("final")) {
      saw_footer = true;
      summary.success = j.at("success").get<bool>();
      summary.steps = j.at("steps").get<int>();
      summary.reason = j.value("reason", "");
      continue;
    }
    if (j.contains("iteration")) {
      summary.total_ticks +=
          j.value("tick_end", 0ll) - j.value("tick_start", 0ll);
      if (!j.value("errors", nlohmann::json::array()).empty())
        ++summary.iterations_with_errors;
      continue;
    }
    raise(errc::trajectory_parse_error, "unrecognized line in " + trajectory_path);
  }
  if (!saw_footer)
    raise(errc::trajectory_parse_error,
          "truncated trajectory (no final record): " + trajectory_path);
  return summary;
}

}  // namespace cradle::harness
