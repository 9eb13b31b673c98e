#pragma once

// Slotted simulation loop. Each slot runs, in this order:
//   1. the policy picks x(t) from the observed state,
//   2. every selected leg pops its data and is accounted,
//   3. Q(t+1) = max(Q(t) + phi(t), 0),
//   4. the slot's arrivals are appended to the backlogs.

#include <functional>
#include <iosfwd>
#include <memory>
#include <span>
#include <vector>

#include "skygs/accounting.hpp"
#include "skygs/orbit.hpp"
#include "skygs/policy.hpp"
#include "skygs/queues.hpp"

namespace skygs {

struct RunRecord {
  PolicyKind policy = PolicyKind::kSkyGS;
  std::uint64_t seed = 0;
  std::uint64_t scenario_hash = 0;
  std::vector<DownlinkRecord> downlinks;
  std::vector<SlotTrace> traces;
  std::vector<double> arrived_mb;
  std::vector<double> downlinked_mb;
};

struct RunResult {
  RunRecord record;
  RunMetrics metrics;
};

using SlotObserver = std::function<void(const SlotContext&, const Assignment&)>;

class Simulation {
 public:
  Simulation(const Scenario& scenario, const ContactTable& contacts, std::unique_ptr<Policy> policy);

  Slot slot() const { return slot_; }
  bool done() const { return slot_ >= scenario_.sim.horizon_slots; }
  double q() const { return q_; }
  std::span<const SatelliteState> states() const { return states_; }
  const RunRecord& record() const { return record_; }

  void set_observer(SlotObserver observer) { observer_ = std::move(observer); }

  // Advances one slot. Throws InfeasibleAssignment if the policy breaks a
  // slot constraint and ContractViolation when already done.
  void step();
  RunResult run_to_end();

 private:
  const Scenario& scenario_;
  const ContactTable& contacts_;
  std::unique_ptr<Policy> policy_;
  ArrivalModel arrivals_;
  std::vector<SatelliteState> states_;
  double q_ = 0.0;
  Slot slot_ = 0;
  RunRecord record_;
  SlotObserver observer_;
};

RunResult run(const Scenario& scenario, const ContactTable& contacts, PolicyKind policy);
RunResult run(const Scenario& scenario, const ContactTable& contacts);

// Downlink rows, then one summary row per slot with an empty satellite
// column. Summary rows carry total backlog in `mb`, C(t) in `c_total`,
// phi(t) in `phi_s` and Q(t+1) in `q_after`.
void write_run_csv(const Scenario& scenario, const RunRecord& record, std::ostream& out);

// {policy, seed, total_cost, avg_latency_min_per_mb, violation_rate,
//  final_backlog_mb, mean_q, max_q}
nlohmann::json summary_json(const RunResult& result);

}  // namespace skygs
