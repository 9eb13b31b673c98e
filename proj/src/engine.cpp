#include "skygs/engine.hpp"

#include <ostream>

#include "skygs/csv.hpp"

namespace skygs {

Simulation::Simulation(const Scenario& scenario, const ContactTable& contacts, std::unique_ptr<Policy> policy)
    : scenario_(scenario), contacts_(contacts), policy_(std::move(policy)), arrivals_(scenario, scenario.sim.seed) {
  if (!policy_) throw ContractViolation("Simulation: null policy");
  if (contacts_.horizon() < scenario_.sim.horizon_slots || contacts_.num_satellites() != scenario_.satellites.size() ||
      contacts_.num_stations() != scenario_.ground_stations.size())
    throw ContractViolation("Simulation: contact table does not match scenario");
  for (SatIndex s = 0; s < scenario_.satellites.size(); ++s) states_.emplace_back(s);
  record_.policy = policy_->kind();
  record_.seed = scenario_.sim.seed;
  record_.scenario_hash = scenario_hash(scenario_);
  record_.arrived_mb.assign(states_.size(), 0.0);
  record_.downlinked_mb.assign(states_.size(), 0.0);
}

void Simulation::step() {
  if (done()) throw ContractViolation("Simulation::step: horizon reached");
  const Slot t = slot_;
  const double tau = scenario_.sim.tau_min;

  std::vector<double> arrivals(states_.size());
  for (SatIndex s = 0; s < states_.size(); ++s) arrivals[s] = arrivals_.arrivals(s, t);

  const SlotContext ctx{scenario_, contacts_, states_, arrivals, q_, t, scenario_.sim.seed};
  const Assignment assignment = policy_->schedule(ctx);
  if (observer_) observer_(ctx, assignment);
  if (assignment.slot != t)
    throw InfeasibleAssignment({Constraint::kWellFormed, "slot " + std::to_string(t), "assignment for another slot"});
  if (auto violation = check_feasibility(assignment, scenario_, contacts_)) throw InfeasibleAssignment(*violation);

  SlotTrace trace;
  trace.slot = t;
  for (const AssignedLeg& leg : assignment.legs) {
    const double rate = *contacts_.rate(leg.sat, leg.antenna.station, t);
    const DownlinkResult dl = states_[leg.sat].actual_downlink(downlink_capacity(rate, tau));
    DownlinkRecord r = evaluate_leg(scenario_, t, leg.sat, leg.antenna.station, leg.antenna.index, leg.dc, rate, dl);
    trace.cost += r.cost.total;
    trace.phi += r.phi;
    record_.downlinked_mb[leg.sat] += r.mb;
    record_.downlinks.push_back(r);
  }

  q_ = update_virtual_queue(q_, trace.phi);
  trace.q_after = q_;

  for (SatIndex s = 0; s < states_.size(); ++s) {
    states_[s].advance_backlog(arrivals[s], t);
    record_.arrived_mb[s] += arrivals[s];
    trace.backlog_after_mb += states_[s].backlog_mb();
  }
  record_.traces.push_back(trace);
  ++slot_;
}

RunResult Simulation::run_to_end() {
  while (!done()) step();
  RunResult result;
  result.record = record_;
  std::vector<double> backlogs;
  for (const auto& s : states_) backlogs.push_back(s.backlog_mb());
  result.metrics = aggregate_metrics(result.record.downlinks, result.record.traces, scenario_.sim.xi, backlogs);
  return result;
}

RunResult run(const Scenario& scenario, const ContactTable& contacts, PolicyKind policy) {
  Simulation sim(scenario, contacts, make_policy(policy, scenario));
  return sim.run_to_end();
}

RunResult run(const Scenario& scenario, const ContactTable& contacts) {
  return run(scenario, contacts, scenario.sim.policy);
}

void write_run_csv(const Scenario& scenario, const RunRecord& record, std::ostream& out) {
  using csv::format;
  const std::string policy(policy_name(record.policy));
  out << kRunRecordHeader << '\n';
  std::size_t next = 0;
  for (const SlotTrace& trace : record.traces) {
    for (; next < record.downlinks.size() && record.downlinks[next].slot == trace.slot; ++next) {
      const DownlinkRecord& r = record.downlinks[next];
      out << r.slot << ',' << policy << ',' << scenario.satellites[r.sat].id << ','
          << scenario.ground_stations[r.station].id << ',' << r.antenna << ',' << scenario.data_centers[r.dc].id
          << ',' << format(r.mb) << ',' << format(r.latency.queuing) << ',' << format(r.latency.gsl) << ','
          << format(r.latency.backhaul) << ',' << format(r.latency.compute) << ',' << format(r.latency_total) << ','
          << format(r.cost.rental) << ',' << format(r.cost.compute) << ',' << format(r.cost.total) << ','
          << format(r.phi) << ',' << format(trace.q_after) << '\n';
    }
    out << trace.slot << ',' << policy << ",,,,," << format(trace.backlog_after_mb) << ",,,,,,,,"
        << format(trace.cost) << ',' << format(trace.phi) << ',' << format(trace.q_after) << '\n';
  }
}

nlohmann::json summary_json(const RunResult& result) {
  const RunMetrics& m = result.metrics;
  nlohmann::json j;
  j["policy"] = std::string(policy_name(result.record.policy));
  j["seed"] = result.record.seed;
  j["total_cost"] = m.total_cost;
  j["avg_latency_min_per_mb"] = m.avg_latency_min_per_mb ? nlohmann::json(*m.avg_latency_min_per_mb) : nullptr;
  j["violation_rate"] = m.violation_rate;
  j["final_backlog_mb"] = m.final_backlog_total_mb;
  j["mean_q"] = m.mean_q;
  j["max_q"] = m.max_q;
  return j;
}

}  // namespace skygs
