#include "skygs/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

#include "skygs/csv.hpp"

namespace skygs {

Scenario apply_overrides(const Scenario& base, const Overrides& o) {
  Scenario s = base;
  if (o.policy) s.sim.policy = *o.policy;
  if (o.seed) s.sim.seed = *o.seed;
  if (o.v) s.sim.v = *o.v;
  if (o.xi) s.sim.xi = *o.xi;
  if (o.contact_plan_path) s.sim.contact_plan_path = *o.contact_plan_path;
  check_scenario(s);
  return s;
}

std::vector<RunOutcome> run_batch(const Scenario& base, const std::vector<Overrides>& specs, unsigned max_threads) {
  std::vector<RunOutcome> outcomes(specs.size());
  std::vector<Scenario> scenarios(specs.size());
  // Contact tables depend only on the seed (and plan path); build each once.
  std::map<std::pair<std::uint64_t, std::string>, std::shared_ptr<const ContactTable>> tables;
  std::vector<std::shared_ptr<const ContactTable>> table_of(specs.size());

  for (std::size_t i = 0; i < specs.size(); ++i) {
    outcomes[i].spec = specs[i];
    try {
      scenarios[i] = apply_overrides(base, specs[i]);
      const auto key = std::make_pair(scenarios[i].sim.seed, scenarios[i].sim.contact_plan_path.value_or(""));
      auto it = tables.find(key);
      if (it == tables.end())
        it = tables.emplace(key, std::make_shared<const ContactTable>(build_contact_table(scenarios[i]))).first;
      table_of[i] = it->second;
    } catch (const std::exception& e) {
      outcomes[i].error = e.what();
    }
  }

  unsigned threads = max_threads != 0 ? max_threads : std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(specs.size(), 1)));
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < specs.size(); i = next++) {
      if (!table_of[i]) continue;
      try {
        outcomes[i].result = run(scenarios[i], *table_of[i]);
      } catch (const std::exception& e) {
        outcomes[i].error = e.what();
      }
    }
  };
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  return outcomes;
}

namespace {

std::string opt(const std::optional<double>& v) { return v ? csv::format(*v) : std::string(); }

}  // namespace

std::string compare_row(const RunOutcome& o, const Scenario& base) {
  std::ostringstream row;
  const PolicyKind policy = o.spec.policy.value_or(base.sim.policy);
  row << policy_name(policy) << ',' << o.spec.seed.value_or(base.sim.seed) << ',';
  if (!o.result) {
    row << "failed,,,,,,";
    return row.str();
  }
  const RunMetrics& m = o.result->metrics;
  row << "ok," << csv::format(m.total_cost) << ',' << opt(m.avg_latency_min_per_mb) << ','
      << csv::format(m.violation_rate) << ',' << csv::format(m.final_backlog_total_mb) << ','
      << csv::format(m.mean_q) << ',' << csv::format(m.max_q);
  return row.str();
}

std::string sweep_row(const RunOutcome& o, const Scenario& base) {
  std::ostringstream row;
  row << csv::format(o.spec.v.value_or(base.sim.v)) << ',' << o.spec.seed.value_or(base.sim.seed) << ',';
  if (!o.result) {
    row << "failed,,,,";
    return row.str();
  }
  const RunMetrics& m = o.result->metrics;
  row << "ok," << csv::format(m.total_cost) << ',' << opt(m.avg_latency_min_per_mb) << ','
      << csv::format(m.violation_rate) << ',' << csv::format(m.mean_q);
  return row.str();
}

}  // namespace skygs
