#pragma once

// Monte-Carlo comparison of unitary and remote control over random
// (initial, target) pairs and a sweep of final times.

#include "remctl/random.hpp"
#include "remctl/reach.hpp"

#include <array>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <numbers>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <thread>
#include <vector>

namespace remctl {

enum class Accounting { AllPairs, ReachedOnly };

/// T_k = k / 25, k = 1..10. Short enough that one-shot unitary control
/// reaches only a minority of random targets.
inline std::vector<double> default_final_times() {
  std::vector<double> t;
  for (int k = 1; k <= 10; ++k) t.push_back(k / 25.0);
  return t;
}

struct CampaignConfig {
  std::size_t n_pairs = 100;
  std::vector<double> final_times = default_final_times();
  double epsilon = 1e-3;
  std::uint64_t master_seed = 42;
  SearchOptions search{};
  unsigned parallelism = 1;
  Accounting accounting = Accounting::AllPairs;
  RemoteEntanglement entanglement = RemoteEntanglement::Maximal;
};

struct StatePair {
  PureState initial;
  PureState target;
};

/// Pair i is drawn from its own stream seeded with derive_seed(master, i):
/// initial first, then target.
inline std::vector<StatePair> draw_pairs(std::size_t n, std::uint64_t master_seed) {
  std::vector<StatePair> pairs;
  pairs.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    Rng rng(derive_seed(master_seed, i));
    PureState initial = haar_state(2, rng);
    PureState target = haar_state(2, rng);
    pairs.push_back({std::move(initial), std::move(target)});
  }
  return pairs;
}

struct TrialRecord {
  std::size_t pair_id;
  double final_time;
  TrialResult result;
};

struct ProtocolSummary {
  Protocol protocol;
  std::size_t pairs_tested;
  std::size_t reached_total;  ///< over all pairs and final times
  double reached_mean;        ///< states reached per 100 pairs, mean over final times
  double reached_stderr;
  double net_prob_mean;
  double net_prob_stderr;
};

struct CampaignReport {
  std::vector<TrialRecord> records;  ///< ordered by pair, final time, protocol
  std::array<ProtocolSummary, 2> summary;
};

/// Published reference values, for side-by-side reporting.
inline constexpr std::array<ProtocolSummary, 2> kPublishedSummary{{
    {Protocol::Unitary, 100, 0, 2.4, 0.4, 0.024, 0.004},
    {Protocol::Remote, 100, 0, 6.6, 0.5, 0.0345, 0.0012},
}};

namespace detail {

struct MeanStderr {
  double mean;
  double stderr_;
};

inline MeanStderr mean_stderr(std::span<const double> xs) {
  if (xs.empty()) return {0.0, 0.0};
  double sum = 0.0;
  for (double x : xs) sum += x;
  const double mean = sum / static_cast<double>(xs.size());
  if (xs.size() < 2) return {mean, 0.0};
  double ss = 0.0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  const double var = ss / static_cast<double>(xs.size() - 1);
  return {mean, std::sqrt(var / static_cast<double>(xs.size()))};
}

}  // namespace detail

inline std::array<ProtocolSummary, 2> summarize(std::span<const TrialRecord> records,
                                                std::size_t n_pairs,
                                                std::span<const double> final_times,
                                                Accounting accounting) {
  std::array<ProtocolSummary, 2> out{};
  for (std::size_t p = 0; p < 2; ++p) {
    const Protocol proto = p == 0 ? Protocol::Unitary : Protocol::Remote;
    std::vector<double> reached_per_100;
    std::vector<double> net_prob;
    std::size_t total = 0;
    for (std::size_t t = 0; t < final_times.size(); ++t) {
      std::size_t count = 0;
      double net = 0.0;
      for (const auto& r : records) {
        if (r.result.protocol != proto || r.final_time != final_times[t]) continue;
        if (r.result.reached) ++count;
        net += r.result.net_success_probability;
      }
      total += count;
      reached_per_100.push_back(100.0 * static_cast<double>(count) / static_cast<double>(n_pairs));
      const std::size_t denom = accounting == Accounting::AllPairs ? n_pairs : count;
      net_prob.push_back(denom == 0 ? 0.0 : net / static_cast<double>(denom));
    }
    const auto r = detail::mean_stderr(reached_per_100);
    const auto q = detail::mean_stderr(net_prob);
    out[p] = {proto, n_pairs, total, r.mean, r.stderr_, q.mean, q.stderr_};
  }
  return out;
}

inline CampaignReport run_campaign(std::span<const StatePair> pairs, const CampaignConfig& cfg) {
  if (pairs.empty()) throw std::invalid_argument("run_campaign: need at least one pair");
  if (cfg.final_times.empty()) throw std::invalid_argument("run_campaign: no final times");

  const std::size_t nt = cfg.final_times.size();
  const std::size_t jobs = pairs.size() * nt;
  std::vector<std::optional<std::array<TrialResult, 2>>> results(jobs);

  const auto work = [&](std::size_t job) {
    const std::size_t pair_id = job / nt;
    const double t = cfg.final_times[job % nt];
    const TrialSpec spec{pairs[pair_id].initial, pairs[pair_id].target, t, cfg.epsilon,
                         derive_seed(cfg.master_seed, pair_id), cfg.entanglement};
    results[job] = std::array<TrialResult, 2>{optimize_unitary(spec, cfg.search),
                                              optimize_remote(spec, cfg.search)};
  };

  const unsigned threads = std::max(1u, cfg.parallelism);
  if (threads == 1) {
    for (std::size_t j = 0; j < jobs; ++j) work(j);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (unsigned k = 0; k < threads; ++k) {
      pool.emplace_back([&] {
        for (std::size_t j = next++; j < jobs; j = next++) work(j);
      });
    }
    for (auto& th : pool) th.join();
  }

  CampaignReport report;
  report.records.reserve(2 * jobs);
  for (std::size_t j = 0; j < jobs; ++j) {
    for (const auto& r : *results[j])
      report.records.push_back({j / nt, cfg.final_times[j % nt], r});
  }
  report.summary = summarize(report.records, pairs.size(), cfg.final_times, cfg.accounting);
  return report;
}

inline CampaignReport run_campaign(const CampaignConfig& cfg) {
  if (cfg.n_pairs < 1) throw std::invalid_argument("run_campaign: n_pairs must be >= 1");
  const auto pairs = draw_pairs(cfg.n_pairs, cfg.master_seed);
  return run_campaign(pairs, cfg);
}

/// Round-trippable decimal: 17 significant digits, '.' separator.
inline std::string format_number(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

/// pair_id,T,protocol,reached,best_fidelity,omega,g,branch,branch_prob
/// branch is 1-based; 0 for unitary control.
inline void write_campaign_csv(std::ostream& os, const CampaignReport& report) {
  os << "pair_id,T,protocol,reached,best_fidelity,omega,g,branch,branch_prob\n";
  for (const auto& rec : report.records) {
    const auto& r = rec.result;
    os << rec.pair_id << ',' << format_number(rec.final_time) << ',' << to_string(r.protocol) << ','
       << (r.reached ? 1 : 0) << ',' << format_number(r.best_fidelity) << ','
       << format_number(r.omega) << ',' << format_number(r.g) << ','
       << (r.branch ? *r.branch + 1 : 0) << ',' << format_number(r.branch_probability) << '\n';
  }
}

/// Human-readable table with the published values alongside.
inline void print_summary_table(std::ostream& os, const std::array<ProtocolSummary, 2>& ours) {
  char line[200];
  os << "Control protocol    | Pairs tested | Reached (per 100)  | Net probability of success\n"
        "--------------------+--------------+--------------------+---------------------------\n";
  for (const auto* rows : {&ours, &kPublishedSummary}) {
    const bool published = rows == &kPublishedSummary;
    for (const auto& s : *rows) {
      const std::string name = std::string(to_string(s.protocol)) + (published ? " (published)" : "");
      std::snprintf(line, sizeof line, "%-19s | %12zu | %7.2f +/- %-6.2f | %.4f +/- %.4f\n",
                    name.c_str(), s.pairs_tested, s.reached_mean, s.reached_stderr,
                    s.net_prob_mean, s.net_prob_stderr);
      os << line;
    }
  }
}

}  // namespace remctl
