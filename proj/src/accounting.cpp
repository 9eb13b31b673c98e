#include "skygs/accounting.hpp"

#include <algorithm>

namespace skygs {

double queuing_latency(std::span<const DataChunk> popped, Slot slot, double tau_min) {
  double sum = 0.0;
  for (const DataChunk& c : popped) {
    if (c.arrival_slot > slot) throw ContractViolation("queuing_latency: chunk arrives after its downlink slot");
    sum += c.size_mb * static_cast<double>(slot - c.arrival_slot) * tau_min;
  }
  return sum;
}

double transmission_latency_gsl(double mb, double gsl_rate_mb_per_min) {
  if (!(gsl_rate_mb_per_min > 0)) throw ContractViolation("transmission_latency_gsl: rate must be > 0");
  return mb / gsl_rate_mb_per_min;
}

double transmission_latency_backhaul(double mb, double backhaul_mb_per_min) {
  if (!(backhaul_mb_per_min > 0)) throw ContractViolation("transmission_latency_backhaul: rate must be > 0");
  return mb / backhaul_mb_per_min;
}

LegCosts leg_costs(bool leg_selected, double mb, double station_price_per_slot, double dc_price_per_min,
                   double dc_minutes_per_mb) {
  if (!leg_selected) return {};
  LegCosts c;
  c.rental = station_price_per_slot;
  c.compute = dc_price_per_min * computation_latency(mb, dc_minutes_per_mb);
  c.total = c.rental + c.compute;
  return c;
}

DownlinkRecord evaluate_leg(const Scenario& scenario, Slot slot, SatIndex sat, StationIndex station, int antenna,
                            DcIndex dc, double gsl_rate_mb_per_min, const DownlinkResult& downlink) {
  const GroundStation& gs = scenario.ground_stations[station];
  const DataCenter& d = scenario.data_centers[dc];
  DownlinkRecord r;
  r.slot = slot;
  r.sat = sat;
  r.station = station;
  r.antenna = antenna;
  r.dc = dc;
  r.mb = downlink.mb;
  r.latency.queuing = queuing_latency(downlink.popped, slot, scenario.sim.tau_min);
  r.latency.gsl = transmission_latency_gsl(downlink.mb, gsl_rate_mb_per_min);
  r.latency.backhaul = transmission_latency_backhaul(downlink.mb, gs.backhaul_mb_per_min[dc]);
  r.latency.compute = computation_latency(downlink.mb, d.minutes_per_mb);
  r.latency_total = r.latency.total();
  r.cost = leg_costs(true, downlink.mb, gs.price_per_slot, d.price_per_min, d.minutes_per_mb);
  r.phi = excess_latency(r.latency_total, downlink.mb, scenario.sim.xi);
  return r;
}

RunMetrics aggregate_metrics(std::span<const DownlinkRecord> records, std::span<const SlotTrace> traces,
                             double xi, std::span<const double> final_backlogs) {
  RunMetrics m;
  double latency_sum = 0.0;
  std::size_t violations = 0;
  for (const DownlinkRecord& r : records) {
    m.total_cost += r.cost.total;
    latency_sum += r.latency_total;
    m.total_downlinked_mb += r.mb;
    // An empty downlink has no per-unit latency to compare.
    if (r.mb > 0 && r.latency_total / r.mb > xi) ++violations;
  }
  m.downlink_events = records.size();
  if (m.total_downlinked_mb > 0) m.avg_latency_min_per_mb = latency_sum / m.total_downlinked_mb;
  if (!records.empty()) m.violation_rate = static_cast<double>(violations) / static_cast<double>(records.size());

  double q_sum = 0.0;
  double phi_sum = 0.0;
  for (const SlotTrace& t : traces) {
    q_sum += t.q_after;
    phi_sum += t.phi;
    m.max_q = std::max(m.max_q, t.q_after);
  }
  if (!traces.empty()) {
    m.mean_q = q_sum / static_cast<double>(traces.size());
    m.mean_phi = phi_sum / static_cast<double>(traces.size());
  }
  m.final_backlog_mb.assign(final_backlogs.begin(), final_backlogs.end());
  for (double b : final_backlogs) m.final_backlog_total_mb += b;
  return m;
}

}  // namespace skygs
