#pragma once

// Satellite backlogs and the latency virtual queue.

#include <deque>
#include <span>
#include <vector>

#include "skygs/model.hpp"

namespace skygs {

// Data units sharing one arrival slot.
struct DataChunk {
  Slot arrival_slot = 0;
  double size_mb = 0.0;

  bool operator==(const DataChunk&) const = default;
};

struct DownlinkResult {
  double mb = 0.0;
  std::vector<DataChunk> popped;
};

// FIFO onboard backlog. The cached total tracks the sum of chunk sizes.
class SatelliteState {
 public:
  SatelliteState() = default;
  explicit SatelliteState(SatIndex sat) : sat_(sat) {}

  SatIndex satellite() const { return sat_; }
  double backlog_mb() const { return total_mb_; }
  bool empty() const { return chunks_.empty(); }
  const std::deque<DataChunk>& chunks() const { return chunks_; }
  // Arrival slot of the head chunk; only meaningful when non-empty.
  Slot oldest_arrival() const { return chunks_.front().arrival_slot; }

  // Pops min(capacity, backlog) in FIFO order. A partially consumed head
  // chunk keeps its arrival slot.
  DownlinkResult actual_downlink(double capacity_mb);

  // Same amount and chunks actual_downlink would pop, without mutating.
  DownlinkResult preview_downlink(double capacity_mb) const;

  // Appends arrivals for `slot` after that slot's downlink.
  void advance_backlog(double arrivals_mb, Slot slot);

 private:
  SatIndex sat_ = 0;
  std::deque<DataChunk> chunks_;
  double total_mb_ = 0.0;
};

inline double downlink_capacity(double rate_mb_per_min, double tau_min) { return rate_mb_per_min * tau_min; }

// Q(t+1) = max(Q(t) + phi(t), 0).
inline double update_virtual_queue(double q, double phi) { return std::max(q + phi, 0.0); }

// Deterministic duty-cycled arrival process. Per-satellite daily volume and
// duty phase are drawn once per run from the seed.
class ArrivalModel {
 public:
  ArrivalModel(const Scenario& scenario, std::uint64_t seed);

  double daily_volume_mb(SatIndex sat) const { return daily_volume_[sat]; }
  bool is_on(SatIndex sat, Slot slot) const;
  double arrivals(SatIndex sat, Slot slot) const;

 private:
  std::vector<double> daily_volume_;
  std::vector<double> duty_;
  std::vector<double> phase_;
  double tau_ = 1.0;
};

}  // namespace skygs
