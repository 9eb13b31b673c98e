#pragma once

// Batches of runs on paired sample paths: every run with the same seed sees
// the same arrivals and link rates regardless of policy or V.

#include <optional>
#include <string>
#include <vector>

#include "skygs/engine.hpp"

namespace skygs {

struct Overrides {
  std::optional<PolicyKind> policy;
  std::optional<std::uint64_t> seed;
  std::optional<double> v;
  std::optional<double> xi;
  std::optional<std::string> contact_plan_path;
};

// Copy of `base` with overrides applied and invariants re-checked.
Scenario apply_overrides(const Scenario& base, const Overrides& overrides);

struct RunOutcome {
  Overrides spec;
  std::optional<RunResult> result;
  std::string error;
};

// Runs concurrently (up to `max_threads`, 0 = hardware concurrency);
// outcomes come back in input order. A failed run records its error and
// the others proceed.
std::vector<RunOutcome> run_batch(const Scenario& base, const std::vector<Overrides>& specs,
                                  unsigned max_threads = 0);

inline constexpr std::string_view kCompareHeader =
    "policy,seed,status,total_cost,avg_latency_min_per_mb,violation_rate,final_backlog_mb,mean_q,max_q";
inline constexpr std::string_view kSweepHeader =
    "v,seed,status,total_cost,avg_latency_min_per_mb,violation_rate,mean_q";

std::string compare_row(const RunOutcome& outcome, const Scenario& base);
std::string sweep_row(const RunOutcome& outcome, const Scenario& base);

}  // namespace skygs
