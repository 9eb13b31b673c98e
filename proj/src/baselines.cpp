#include "skygs/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "skygs/accounting.hpp"
#include "skygs/hungarian.hpp"
#include "skygs/rng.hpp"

namespace skygs {

namespace {

std::size_t pick(std::mt19937_64& engine, std::size_t n) {
  const auto i = static_cast<std::size_t>(key_to_unit(engine()) * static_cast<double>(n));
  return std::min(i, n - 1);
}

double leg_cost(const Scenario& sc, StationIndex g, DcIndex d, double mb) {
  const DataCenter& dc = sc.data_centers[d];
  return leg_costs(true, mb, sc.ground_stations[g].price_per_slot, dc.price_per_min, dc.minutes_per_mb).total;
}

}  // namespace

Assignment greedy_schedule(const SlotContext& ctx, const GreedyOptions& options) {
  const Scenario& sc = ctx.scenario;
  Assignment out;
  out.slot = ctx.slot;

  std::vector<SatIndex> order;
  for (SatIndex s = 0; s < ctx.states.size(); ++s)
    if (ctx.states[s].backlog_mb() > 0) order.push_back(s);
  std::stable_sort(order.begin(), order.end(), [&](SatIndex a, SatIndex b) {
    return ctx.states[a].backlog_mb() > ctx.states[b].backlog_mb();
  });

  auto allowed = [&](const std::string& provider) { return !options.provider || provider == *options.provider; };
  std::vector<int> used(sc.ground_stations.size(), 0);

  for (SatIndex s : order) {
    const double backlog = ctx.states[s].backlog_mb();
    struct Best {
      StationIndex g;
      DcIndex d;
      double per_mb;
      double mb;
    };
    std::optional<Best> best;
    for (const Contact& c : ctx.contacts.contacts_of(ctx.slot, s)) {
      const GroundStation& gs = sc.ground_stations[c.station];
      if (!allowed(gs.provider) || used[c.station] >= gs.antennas) continue;
      const double capacity = downlink_capacity(c.rate_mb_per_min, sc.sim.tau_min);
      if (options.withhold_fill_fraction && backlog < *options.withhold_fill_fraction * capacity) continue;
      const double mb = std::min(capacity, backlog);
      for (DcIndex d = 0; d < sc.data_centers.size(); ++d) {
        if (!allowed(sc.data_centers[d].provider)) continue;
        const double per_mb = leg_cost(sc, c.station, d, mb) / mb;
        if (!best || per_mb < best->per_mb) best = Best{c.station, d, per_mb, mb};
      }
    }
    if (!best) continue;
    out.legs.push_back({s, {best->g, used[best->g]++}, best->d, best->mb});
  }
  finalize_assignment(out, sc.satellites.size());
  return out;
}

Assignment sg_schedule(const SlotContext& ctx, const std::string& provider) {
  return greedy_schedule(ctx, {provider, std::nullopt});
}

Assignment bg_schedule(const SlotContext& ctx) { return greedy_schedule(ctx, {}); }

Assignment bwg_schedule(const SlotContext& ctx, double fill_fraction) {
  return greedy_schedule(ctx, {std::nullopt, fill_fraction});
}

Assignment br_schedule(const SlotContext& ctx) {
  const Scenario& sc = ctx.scenario;
  Assignment out;
  out.slot = ctx.slot;
  auto engine = keyed_engine(ctx.seed, Stream::kBrokerRandom, {static_cast<std::uint64_t>(ctx.slot)});

  std::vector<SatIndex> order;
  for (SatIndex s = 0; s < ctx.states.size(); ++s)
    if (ctx.states[s].backlog_mb() > 0) order.push_back(s);
  for (std::size_t i = order.size(); i > 1; --i) std::swap(order[i - 1], order[pick(engine, i)]);

  std::vector<std::vector<char>> busy(sc.ground_stations.size());
  for (StationIndex g = 0; g < sc.ground_stations.size(); ++g)
    busy[g].assign(static_cast<std::size_t>(sc.ground_stations[g].antennas), 0);

  for (SatIndex s : order) {
    std::vector<std::pair<AntennaRef, double>> free;
    for (const Contact& c : ctx.contacts.contacts_of(ctx.slot, s))
      for (int a = 0; a < sc.ground_stations[c.station].antennas; ++a)
        if (!busy[c.station][static_cast<std::size_t>(a)]) free.push_back({{c.station, a}, c.rate_mb_per_min});
    if (free.empty() || sc.data_centers.empty()) continue;
    const auto& [antenna, rate] = free[pick(engine, free.size())];
    const DcIndex d = pick(engine, sc.data_centers.size());
    busy[antenna.station][static_cast<std::size_t>(antenna.index)] = 1;
    const double mb = std::min(downlink_capacity(rate, sc.sim.tau_min), ctx.states[s].backlog_mb());
    out.legs.push_back({s, antenna, d, mb});
  }
  finalize_assignment(out, sc.satellites.size());
  return out;
}

bool is_high_priority(const SlotContext& ctx, SatIndex sat, double rho) {
  const SatelliteState& st = ctx.states[sat];
  if (st.empty()) return false;
  const double age = static_cast<double>(ctx.slot - st.oldest_arrival()) * ctx.scenario.sim.tau_min;
  return age >= rho * ctx.scenario.sim.xi;
}

Assignment ilp_hpq_schedule(const SlotContext& ctx, double rho) {
  const Scenario& sc = ctx.scenario;
  const std::size_t n = sc.satellites.size();
  Assignment out;
  out.slot = ctx.slot;

  std::vector<AntennaRef> antennas;
  for (StationIndex g = 0; g < sc.ground_stations.size(); ++g)
    for (int a = 0; a < sc.ground_stations[g].antennas; ++a) antennas.push_back({g, a});
  std::vector<std::size_t> first(sc.ground_stations.size(), 0);
  for (StationIndex g = 1; g < sc.ground_stations.size(); ++g)
    first[g] = first[g - 1] + static_cast<std::size_t>(sc.ground_stations[g - 1].antennas);

  CostMatrix cost(n, antennas.size() + n);
  struct Leg {
    DcIndex d;
    double mb;
  };
  std::vector<std::vector<std::optional<Leg>>> legs(n, std::vector<std::optional<Leg>>(antennas.size()));
  double abs_sum = 0.0;
  for (SatIndex s = 0; s < n; ++s) {
    const double backlog = ctx.states[s].backlog_mb();
    if (!(backlog > 0)) continue;
    for (const Contact& c : ctx.contacts.contacts_of(ctx.slot, s)) {
      const double mb = std::min(downlink_capacity(c.rate_mb_per_min, sc.sim.tau_min), backlog);
      std::optional<Leg> best;
      double best_cost = 0.0;
      for (DcIndex d = 0; d < sc.data_centers.size(); ++d) {
        const double c_total = leg_cost(sc, c.station, d, mb);
        if (!best || c_total < best_cost) {
          best = Leg{d, mb};
          best_cost = c_total;
        }
      }
      if (!best) continue;
      for (int a = 0; a < sc.ground_stations[c.station].antennas; ++a) {
        const std::size_t col = first[c.station] + static_cast<std::size_t>(a);
        cost(s, col) = best_cost;
        legs[s][col] = best;
        abs_sum += std::abs(best_cost);
      }
    }
  }
  const double forced = abs_sum + 1.0;
  for (SatIndex s = 0; s < n; ++s) cost(s, antennas.size() + s) = is_high_priority(ctx, s, rho) ? forced : 0.0;

  const Matching m = hungarian_min_matching(cost);
  for (SatIndex s = 0; s < n; ++s) {
    const std::size_t col = m.row_to_col[s];
    if (col >= antennas.size()) continue;
    const bool high = is_high_priority(ctx, s, rho);
    // Zero-cost ties with withholding resolve to withholding unless forced.
    if (!high && !(cost(s, col) < 0.0)) continue;
    out.legs.push_back({s, antennas[col], legs[s][col]->d, legs[s][col]->mb});
  }
  finalize_assignment(out, n);
  return out;
}

}  // namespace skygs
