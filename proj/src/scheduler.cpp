#include "skygs/scheduler.hpp"

#include <algorithm>
#include <functional>
#include <ostream>
#include <string>

#include "skygs/csv.hpp"

namespace skygs {

namespace {

double contact_rate(const SlotContext& ctx, SatIndex sat, StationIndex station) {
  auto rate = ctx.contacts.rate(sat, station, ctx.slot);
  if (!rate)
    throw ContractViolation("no contact between satellite " + std::to_string(sat) + " and station " +
                            std::to_string(station) + " at slot " + std::to_string(ctx.slot));
  return *rate;
}

}  // namespace

EdgeCandidate edge_weight(const SlotContext& ctx, SatIndex sat, AntennaRef antenna) {
  const Scenario& sc = ctx.scenario;
  const double rate = contact_rate(ctx, sat, antenna.station);
  const SatelliteState& state = ctx.states[sat];
  const double backlog = state.backlog_mb();
  const DownlinkResult preview = state.preview_downlink(downlink_capacity(rate, sc.sim.tau_min));
  const double mb = preview.mb;
  const double lq = queuing_latency(preview.popped, ctx.slot, sc.sim.tau_min);
  const double lt1 = transmission_latency_gsl(mb, rate);
  const GroundStation& gs = sc.ground_stations[antenna.station];

  EdgeCandidate best;
  best.sat = sat;
  best.antenna = antenna;
  best.mb_preview = mb;
  for (DcIndex d = 0; d < sc.data_centers.size(); ++d) {
    const DataCenter& dc = sc.data_centers[d];
    LatencyBreakdown lat{lq, lt1, transmission_latency_backhaul(mb, gs.backhaul_mb_per_min[d]),
                         computation_latency(mb, dc.minutes_per_mb)};
    const LegCosts cost = leg_costs(true, mb, gs.price_per_slot, dc.price_per_min, dc.minutes_per_mb);
    const double phi = excess_latency(lat.total(), mb, sc.sim.xi);
    const double w = sc.sim.v * cost.total - backlog * mb + ctx.q * phi;
    if (!best.dc || w < best.weight) {
      best.dc = d;
      best.weight = w;
      best.latency_preview = lat;
      best.cost_preview = cost;
      best.phi_preview = phi;
    }
  }
  if (!best.dc) throw ContractViolation("edge_weight: scenario has no data centers");
  return best;
}

CostMatrix BipartiteGraph::cost_matrix() const {
  CostMatrix m(num_satellites, num_right());
  for (const EdgeCandidate& e : edges) {
    std::size_t col = virtual_node(e.sat);
    if (e.antenna) {
      auto it = std::lower_bound(real_antennas.begin(), real_antennas.end(), *e.antenna);
      col = static_cast<std::size_t>(it - real_antennas.begin());
    }
    m(e.sat, col) = e.weight;
  }
  return m;
}

BipartiteGraph build_bipartite(const SlotContext& ctx) {
  const Scenario& sc = ctx.scenario;
  BipartiteGraph g;
  g.num_satellites = sc.satellites.size();
  for (StationIndex st = 0; st < sc.ground_stations.size(); ++st)
    for (int a = 0; a < sc.ground_stations[st].antennas; ++a) g.real_antennas.push_back({st, a});

  for (SatIndex s : ctx.contacts.visible_satellites(ctx.slot)) {
    for (const Contact& c : ctx.contacts.contacts_of(ctx.slot, s)) {
      // Antennas of one station are interchangeable: evaluate once.
      EdgeCandidate e = edge_weight(ctx, s, {c.station, 0});
      for (int a = 0; a < sc.ground_stations[c.station].antennas; ++a) {
        e.antenna = AntennaRef{c.station, a};
        g.edges.push_back(e);
      }
    }
  }
  for (SatIndex s = 0; s < g.num_satellites; ++s) {
    EdgeCandidate v;
    v.sat = s;
    g.edges.push_back(v);
  }
  return g;
}

SlotSchedule schedule_slot(const SlotContext& ctx) {
  const Scenario& sc = ctx.scenario;
  const BipartiteGraph graph = build_bipartite(ctx);
  const CostMatrix cost = graph.cost_matrix();

  // (row, col) -> edge
  std::vector<std::ptrdiff_t> edge_at(cost.rows() * cost.cols(), -1);
  for (std::size_t i = 0; i < graph.edges.size(); ++i) {
    const EdgeCandidate& e = graph.edges[i];
    std::size_t col = graph.virtual_node(e.sat);
    if (e.antenna) {
      auto it = std::lower_bound(graph.real_antennas.begin(), graph.real_antennas.end(), *e.antenna);
      col = static_cast<std::size_t>(it - graph.real_antennas.begin());
    }
    edge_at[e.sat * cost.cols() + col] = static_cast<std::ptrdiff_t>(i);
  }

  const Matching matching = hungarian_min_matching(cost);

  SlotSchedule out;
  out.assignment.slot = ctx.slot;
  for (SatIndex s = 0; s < cost.rows(); ++s) {
    const std::ptrdiff_t idx = edge_at[s * cost.cols() + matching.row_to_col[s]];
    if (idx < 0) throw InfeasibleMatching("schedule_slot: matched a non-edge");
    const EdgeCandidate& e = graph.edges[static_cast<std::size_t>(idx)];
    // A real edge no better than the virtual one resolves to withholding.
    if (!e.antenna || e.weight >= 0.0) continue;
    out.assignment.legs.push_back({s, *e.antenna, *e.dc, e.mb_preview});
    out.matching_weight += e.weight;
  }
  finalize_assignment(out.assignment, sc.satellites.size());

  double constant = 0.0;
  for (SatIndex s = 0; s < ctx.states.size(); ++s) constant += ctx.states[s].backlog_mb() * ctx.arrivals[s];
  out.objective = out.matching_weight + constant;
  return out;
}

double p3_objective(const SlotContext& ctx, const Assignment& assignment) {
  const Scenario& sc = ctx.scenario;
  double total = 0.0;
  for (SatIndex s = 0; s < ctx.states.size(); ++s) total += ctx.states[s].backlog_mb() * ctx.arrivals[s];
  for (const AssignedLeg& leg : assignment.legs) {
    const double rate = contact_rate(ctx, leg.sat, leg.antenna.station);
    SatelliteState copy = ctx.states[leg.sat];
    const double backlog = copy.backlog_mb();
    const DownlinkResult dl = copy.actual_downlink(downlink_capacity(rate, sc.sim.tau_min));
    const DownlinkRecord r =
        evaluate_leg(sc, ctx.slot, leg.sat, leg.antenna.station, leg.antenna.index, leg.dc, rate, dl);
    total += sc.sim.v * r.cost.total - backlog * r.mb + ctx.q * r.phi;
  }
  return total;
}

SlotSchedule brute_force_schedule(const SlotContext& ctx) {
  const Scenario& sc = ctx.scenario;
  const std::vector<SatIndex> visible = ctx.contacts.visible_satellites(ctx.slot);

  std::vector<AntennaRef> antennas;
  for (SatIndex s : visible)
    for (const AntennaRef& a : visible_antennas(sc, ctx.contacts, ctx.slot, s)) antennas.push_back(a);
  std::sort(antennas.begin(), antennas.end());
  antennas.erase(std::unique(antennas.begin(), antennas.end()), antennas.end());

  if (visible.size() > kOracleMaxVisible || antennas.size() > kOracleMaxAntennas ||
      sc.data_centers.size() > kOracleMaxDataCenters)
    throw OracleRefusal("brute_force_schedule: instance exceeds oracle guard sizes");

  // Value of each (satellite, station, data center) leg, replayed on a copy.
  struct Option {
    std::size_t antenna;
    DcIndex dc;
    double value;
    double mb;
  };
  std::vector<std::vector<Option>> options(visible.size());
  for (std::size_t i = 0; i < visible.size(); ++i) {
    const SatIndex s = visible[i];
    for (std::size_t a = 0; a < antennas.size(); ++a) {
      auto rate = ctx.contacts.rate(s, antennas[a].station, ctx.slot);
      if (!rate) continue;
      for (DcIndex d = 0; d < sc.data_centers.size(); ++d) {
        SatelliteState copy = ctx.states[s];
        const double backlog = copy.backlog_mb();
        const DownlinkResult dl = copy.actual_downlink(*rate * sc.sim.tau_min);
        const DownlinkRecord r = evaluate_leg(sc, ctx.slot, s, antennas[a].station, antennas[a].index, d, *rate, dl);
        options[i].push_back({a, d, sc.sim.v * r.cost.total - backlog * r.mb + ctx.q * r.phi, r.mb});
      }
    }
  }

  constexpr std::size_t kWithhold = static_cast<std::size_t>(-1);
  std::vector<std::size_t> choice(visible.size(), kWithhold), best_choice = choice;
  std::vector<char> used(antennas.size(), 0);
  double best = 0.0;  // all-withhold
  std::function<void(std::size_t, double)> search = [&](std::size_t i, double acc) {
    if (i == visible.size()) {
      if (acc < best) {
        best = acc;
        best_choice = choice;
      }
      return;
    }
    choice[i] = kWithhold;
    search(i + 1, acc);
    for (std::size_t k = 0; k < options[i].size(); ++k) {
      const Option& o = options[i][k];
      if (used[o.antenna]) continue;
      used[o.antenna] = 1;
      choice[i] = k;
      search(i + 1, acc + o.value);
      used[o.antenna] = 0;
    }
    choice[i] = kWithhold;
  };
  search(0, 0.0);

  SlotSchedule out;
  out.assignment.slot = ctx.slot;
  out.matching_weight = best;
  for (std::size_t i = 0; i < visible.size(); ++i) {
    if (best_choice[i] == kWithhold) continue;
    const Option& o = options[i][best_choice[i]];
    out.assignment.legs.push_back({visible[i], antennas[o.antenna], o.dc, o.mb});
  }
  finalize_assignment(out.assignment, sc.satellites.size());
  double constant = 0.0;
  for (SatIndex s = 0; s < ctx.states.size(); ++s) constant += ctx.states[s].backlog_mb() * ctx.arrivals[s];
  out.objective = best + constant;
  return out;
}

void write_weight_matrix(const SlotContext& ctx, const BipartiteGraph& graph, std::ostream& out, bool header) {
  const Scenario& sc = ctx.scenario;
  if (header) out << "slot,satellite,right_node,ground_station,antenna,data_center,weight\n";
  for (const EdgeCandidate& e : graph.edges) {
    out << ctx.slot << ',' << sc.satellites[e.sat].id << ',';
    if (e.antenna) {
      auto it = std::lower_bound(graph.real_antennas.begin(), graph.real_antennas.end(), *e.antenna);
      out << (it - graph.real_antennas.begin()) << ',' << sc.ground_stations[e.antenna->station].id << ','
          << e.antenna->index << ',' << sc.data_centers[*e.dc].id;
    } else {
      out << graph.virtual_node(e.sat) << ",,,";
    }
    out << ',' << csv::format(e.weight) << '\n';
  }
}

}  // namespace skygs
