#pragma once

// Latency and cost accounting for downlink events, plus run-level metrics.
//
// Latencies are unit-minute sums over 1 MB data units: a downlink of D MB
// over a link of R MB/min contributes D/R, matching the per-unit sum.

#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "skygs/model.hpp"
#include "skygs/queues.hpp"

namespace skygs {

double queuing_latency(std::span<const DataChunk> popped, Slot slot, double tau_min);
double transmission_latency_gsl(double mb, double gsl_rate_mb_per_min);
double transmission_latency_backhaul(double mb, double backhaul_mb_per_min);
inline double computation_latency(double mb, double minutes_per_mb) { return minutes_per_mb * mb; }

struct LegCosts {
  double rental = 0.0;
  double compute = 0.0;
  double total = 0.0;
};

// Rental is charged for the antenna-slot whether or not it carries data.
LegCosts leg_costs(bool leg_selected, double mb, double station_price_per_slot, double dc_price_per_min,
                   double dc_minutes_per_mb);

inline double excess_latency(double latency, double mb, double xi) { return latency - xi * mb; }

struct LatencyBreakdown {
  double queuing = 0.0;
  double gsl = 0.0;
  double backhaul = 0.0;
  double compute = 0.0;

  double total() const { return queuing + gsl + backhaul + compute; }
};

struct DownlinkRecord {
  Slot slot = 0;
  SatIndex sat = 0;
  StationIndex station = 0;
  int antenna = 0;
  DcIndex dc = 0;
  double mb = 0.0;
  LatencyBreakdown latency;
  double latency_total = 0.0;
  LegCosts cost;
  double phi = 0.0;
};

// Evaluates one (satellite, station, data center) leg for already-popped
// chunks at `slot`.
DownlinkRecord evaluate_leg(const Scenario& scenario, Slot slot, SatIndex sat, StationIndex station, int antenna,
                            DcIndex dc, double gsl_rate_mb_per_min, const DownlinkResult& downlink);

struct SlotTrace {
  Slot slot = 0;
  double cost = 0.0;
  double phi = 0.0;
  double q_after = 0.0;
  double backlog_after_mb = 0.0;
};

struct RunMetrics {
  double total_cost = 0.0;
  std::optional<double> avg_latency_min_per_mb;
  double violation_rate = 0.0;
  double total_downlinked_mb = 0.0;
  std::size_t downlink_events = 0;
  std::vector<double> final_backlog_mb;
  double final_backlog_total_mb = 0.0;
  double mean_q = 0.0;
  double max_q = 0.0;
  double mean_phi = 0.0;
};

// Average latency is sum(L) / sum(D); the violation rate counts downlink
// events whose own L/D exceeds xi.
RunMetrics aggregate_metrics(std::span<const DownlinkRecord> records, std::span<const SlotTrace> traces,
                             double xi, std::span<const double> final_backlogs);

inline constexpr std::string_view kRunRecordHeader =
    "slot,policy,satellite,ground_station,antenna,data_center,mb,lq,lt1,lt2,lc,l_total,cr,cc,c_total,phi_s,q_after";

}  // namespace skygs
