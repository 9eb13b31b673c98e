#include "skygs/policy.hpp"

#include <algorithm>
#include <map>

#include "skygs/baselines.hpp"
#include "skygs/scheduler.hpp"

namespace skygs {

std::string_view constraint_name(Constraint c) {
  switch (c) {
    case Constraint::kOneLegPerSatellite: return "one-leg-per-satellite";
    case Constraint::kVisibleStation: return "visible-station";
    case Constraint::kAntennaCapacity: return "antenna-capacity";
    case Constraint::kWellFormed: return "well-formed";
  }
  return "unknown";
}

InfeasibleAssignment::InfeasibleAssignment(const FeasibilityViolation& v)
    : std::runtime_error("infeasible assignment: " + std::string(constraint_name(v.constraint)) + " violated by " +
                         v.entity + ": " + v.message),
      violation_(v) {}

std::optional<FeasibilityViolation> check_feasibility(const Assignment& a, const Scenario& scenario,
                                                      const ContactTable& contacts) {
  std::vector<char> seen_sat(scenario.satellites.size(), 0);
  std::map<AntennaRef, SatIndex> antenna_owner;
  std::vector<int> per_station(scenario.ground_stations.size(), 0);

  using C = Constraint;
  auto fail = [](C kind, std::string who, std::string what) {
    return FeasibilityViolation{kind, std::move(who), std::move(what)};
  };
  for (const AssignedLeg& leg : a.legs) {
    if (leg.sat >= scenario.satellites.size())
      return fail(C::kWellFormed, "satellite #" + std::to_string(leg.sat), "unknown satellite index");
    const std::string sat = "satellite '" + scenario.satellites[leg.sat].id + "'";
    if (leg.antenna.station >= scenario.ground_stations.size())
      return fail(C::kWellFormed, sat, "unknown ground station index");
    if (leg.dc >= scenario.data_centers.size()) return fail(C::kWellFormed, sat, "unknown data center index");
    const GroundStation& gs = scenario.ground_stations[leg.antenna.station];
    const std::string station = "ground station '" + gs.id + "'";
    const std::string antenna = "antenna " + std::to_string(leg.antenna.index);
    if (leg.antenna.index < 0 || leg.antenna.index >= gs.antennas)
      return fail(C::kAntennaCapacity, station, antenna + " out of range");
    if (seen_sat[leg.sat]++) return fail(C::kOneLegPerSatellite, sat, "more than one station/data center selected");
    if (!contacts.rate(leg.sat, leg.antenna.station, a.slot))
      return fail(C::kVisibleStation, sat, "station '" + gs.id + "' not visible at slot " + std::to_string(a.slot));
    if (!antenna_owner.emplace(leg.antenna, leg.sat).second)
      return fail(C::kAntennaCapacity, station, antenna + " assigned twice");
    if (++per_station[leg.antenna.station] > gs.antennas)
      return fail(C::kAntennaCapacity, station, "more satellites than antennas");
  }
  return std::nullopt;
}

void finalize_assignment(Assignment& a, std::size_t num_satellites) {
  std::sort(a.legs.begin(), a.legs.end(),
            [](const AssignedLeg& x, const AssignedLeg& y) { return x.sat < y.sat; });
  std::vector<char> has_leg(num_satellites, 0);
  for (const AssignedLeg& leg : a.legs)
    if (leg.sat < num_satellites) has_leg[leg.sat] = 1;
  a.withheld.clear();
  for (SatIndex s = 0; s < num_satellites; ++s)
    if (!has_leg[s]) a.withheld.push_back(s);
}

std::unique_ptr<Policy> make_policy(PolicyKind kind, const Scenario& scenario) {
  const PolicyParams& p = scenario.sim.policy_params;
  switch (kind) {
    case PolicyKind::kSkyGS:
      return std::make_unique<SkyGsPolicy>();
    case PolicyKind::kSG: {
      if (p.sg_provider.empty()) throw ValidationError("policy sg requires sim.policy_params.sg_provider");
      const bool owns = std::any_of(scenario.ground_stations.begin(), scenario.ground_stations.end(),
                                    [&](const GroundStation& g) { return g.provider == p.sg_provider; });
      if (!owns) throw ValidationError("sg provider '" + p.sg_provider + "' owns no stations");
      return std::make_unique<GreedyPolicy>(kind, GreedyOptions{p.sg_provider, std::nullopt});
    }
    case PolicyKind::kBG:
      return std::make_unique<GreedyPolicy>(kind, GreedyOptions{});
    case PolicyKind::kBR:
      return std::make_unique<RandomPolicy>();
    case PolicyKind::kBWG:
      return std::make_unique<GreedyPolicy>(kind, GreedyOptions{std::nullopt, p.bwg_fill_fraction});
    case PolicyKind::kIlpHpq:
      return std::make_unique<IlpHpqPolicy>(p.ilp_rho);
  }
  throw ValidationError("unknown policy kind");
}

}  // namespace skygs
