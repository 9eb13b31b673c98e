#include "skygs/queues.hpp"

#include <algorithm>
#include <cmath>

#include "skygs/rng.hpp"

namespace skygs {

namespace {

template <typename Chunks>
DownlinkResult take_front(const Chunks& chunks, double total_mb, double capacity_mb) {
  DownlinkResult out;
  if (!(capacity_mb > 0) || chunks.empty()) return out;
  if (capacity_mb >= total_mb) {
    out.mb = total_mb;
    out.popped.assign(chunks.begin(), chunks.end());
    return out;
  }
  out.mb = capacity_mb;
  double remaining = capacity_mb;
  for (const DataChunk& c : chunks) {
    if (remaining <= 0) break;
    const double take = std::min(c.size_mb, remaining);
    out.popped.push_back({c.arrival_slot, take});
    remaining -= take;
  }
  return out;
}

}  // namespace

DownlinkResult SatelliteState::preview_downlink(double capacity_mb) const {
  return take_front(chunks_, total_mb_, capacity_mb);
}

DownlinkResult SatelliteState::actual_downlink(double capacity_mb) {
  DownlinkResult out = take_front(chunks_, total_mb_, capacity_mb);
  if (out.mb <= 0) return out;
  if (out.mb >= total_mb_) {
    chunks_.clear();
    total_mb_ = 0.0;
    return out;
  }
  for (const DataChunk& p : out.popped) {
    DataChunk& head = chunks_.front();
    if (p.size_mb >= head.size_mb) {
      chunks_.pop_front();
    } else {
      head.size_mb -= p.size_mb;
    }
  }
  total_mb_ -= out.mb;
  if (chunks_.empty()) total_mb_ = 0.0;
  return out;
}

void SatelliteState::advance_backlog(double arrivals_mb, Slot slot) {
  if (!(arrivals_mb > 0)) return;
  if (!chunks_.empty() && chunks_.back().arrival_slot > slot)
    throw ContractViolation("advance_backlog: arrival slot precedes queued data");
  if (!chunks_.empty() && chunks_.back().arrival_slot == slot) {
    chunks_.back().size_mb += arrivals_mb;
  } else {
    chunks_.push_back({slot, arrivals_mb});
  }
  total_mb_ += arrivals_mb;
}

ArrivalModel::ArrivalModel(const Scenario& scenario, std::uint64_t seed) : tau_(scenario.sim.tau_min) {
  for (SatIndex s = 0; s < scenario.satellites.size(); ++s) {
    const Satellite& sat = scenario.satellites[s];
    daily_volume_.push_back(
        keyed_uniform(seed, Stream::kDailyVolume, {s}, sat.daily_volume_min_mb, sat.daily_volume_max_mb));
    duty_.push_back(sat.duty_cycle);
    phase_.push_back(keyed_uniform(seed, Stream::kDutyPhase, {s}, 0.0, 1.0));
  }
}

// Slot t is "on" when the running count floor((t + phase) * duty) steps up,
// which spreads exactly `duty` of all slots evenly over time.
bool ArrivalModel::is_on(SatIndex sat, Slot slot) const {
  const double d = duty_[sat];
  if (d >= 1.0) return true;
  const double x = static_cast<double>(slot) + phase_[sat];
  return std::floor((x + 1.0) * d) > std::floor(x * d);
}

double ArrivalModel::arrivals(SatIndex sat, Slot slot) const {
  if (!is_on(sat, slot)) return 0.0;
  return daily_volume_[sat] / (kMinutesPerDay * duty_[sat]) * tau_;
}

}  // namespace skygs
