#pragma once

// Drift-plus-penalty slot scheduler.
//
// Each slot minimizes
//   V * C(t) + sum_s D_s(t) * (D_s^i(t) - D~_s(t)) + Q(t) * phi(t)
// over feasible x(t). The objective separates per satellite, so every
// (satellite, antenna) edge carries its best data center's value and the
// slot problem becomes a min-cost bipartite matching. Each satellite also
// has a zero-weight virtual antenna meaning "withhold this slot". The
// D_s * D_s^i term is the same for every choice of satellite s and is left
// out of edge weights.

#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <vector>

#include "skygs/accounting.hpp"
#include "skygs/hungarian.hpp"
#include "skygs/policy.hpp"

namespace skygs {

struct EdgeCandidate {
  SatIndex sat = 0;
  // Absent for the satellite's virtual antenna.
  std::optional<AntennaRef> antenna;
  std::optional<DcIndex> dc;
  double weight = 0.0;
  double mb_preview = 0.0;
  LatencyBreakdown latency_preview;
  LegCosts cost_preview;
  double phi_preview = 0.0;
};

// Best data center for a (satellite, antenna) contact, ties to the lowest
// data-center index. Throws ContractViolation when (sat, station) is not a
// contact in this slot.
EdgeCandidate edge_weight(const SlotContext& ctx, SatIndex sat, AntennaRef antenna);

struct BipartiteGraph {
  std::size_t num_satellites = 0;
  // Right nodes [0, real_antennas.size()) are real; the virtual antenna of
  // satellite s is node real_antennas.size() + s.
  std::vector<AntennaRef> real_antennas;
  std::vector<EdgeCandidate> edges;

  std::size_t num_right() const { return real_antennas.size() + num_satellites; }
  std::size_t virtual_node(SatIndex sat) const { return real_antennas.size() + sat; }
  CostMatrix cost_matrix() const;
};

BipartiteGraph build_bipartite(const SlotContext& ctx);

struct SlotSchedule {
  Assignment assignment;
  // Sum of matched edge weights.
  double matching_weight = 0.0;
  // matching_weight plus the dropped sum_s D_s * D_s^i.
  double objective = 0.0;
};

SlotSchedule schedule_slot(const SlotContext& ctx);

// Full slot objective of an arbitrary assignment, evaluated by replaying
// each leg on a copy of the satellite state.
double p3_objective(const SlotContext& ctx, const Assignment& assignment);

class OracleRefusal : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr std::size_t kOracleMaxVisible = 6;
inline constexpr std::size_t kOracleMaxAntennas = 6;
inline constexpr std::size_t kOracleMaxDataCenters = 4;

// Exhaustive search over every feasible x(t). Test oracle only; refuses
// instances above the guard sizes.
SlotSchedule brute_force_schedule(const SlotContext& ctx);

// Debug dump: slot,satellite,right_node,ground_station,antenna,data_center,weight
void write_weight_matrix(const SlotContext& ctx, const BipartiteGraph& graph, std::ostream& out, bool header);

class SkyGsPolicy final : public Policy {
 public:
  PolicyKind kind() const override { return PolicyKind::kSkyGS; }
  Assignment schedule(const SlotContext& ctx) override { return schedule_slot(ctx).assignment; }
};

}  // namespace skygs
