#pragma once

// Domain types shared by every module.
//
// Units after validation: data in MB, rates in MB/min, time in minutes,
// money in USD. Latency sums are in unit-minutes (minutes summed over 1 MB
// data units). Ground-station rental is stored per slot, data-center compute
// price per minute of processing.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace skygs {

using SatIndex = std::size_t;
using StationIndex = std::size_t;
using DcIndex = std::size_t;
using Slot = std::int64_t;

inline constexpr double kEarthRadiusKm = 6371.0;
inline constexpr double kMinutesPerDay = 1440.0;
inline constexpr double kMbPerMinPerGbps = 7500.0;  // 1e9 / 8 / 1e6 * 60
inline constexpr double kMbPerTb = 1.0e6;

inline double gbps_to_mb_per_min(double gbps) { return gbps * kMbPerMinPerGbps; }
inline double per_hour_to_per_min(double per_hour) { return per_hour / 60.0; }
inline double hours_per_gb_to_min_per_mb(double hours) { return hours * 60.0 / 1000.0; }

class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Caller bugs: an operation was invoked outside its precondition.
class ContractViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

struct OrbitalElements {
  double altitude_km = 0.0;
  double inclination_deg = 0.0;
  double raan_deg = 0.0;
  double phase_deg = 0.0;

  bool operator==(const OrbitalElements&) const = default;
};

struct Satellite {
  std::string id;
  OrbitalElements orbit;
  // Daily volume is drawn once per run from [min, max].
  double daily_volume_min_mb = 0.0;
  double daily_volume_max_mb = 0.0;
  double duty_cycle = 1.0;

  bool operator==(const Satellite&) const = default;
};

struct GroundStation {
  std::string id;
  std::string provider;
  double latitude_deg = 0.0;
  double longitude_deg = 0.0;
  int antennas = 1;
  double price_per_slot = 0.0;
  // One entry per data center, in scenario order.
  std::vector<double> backhaul_mb_per_min;

  bool operator==(const GroundStation&) const = default;
};

struct DataCenter {
  std::string id;
  std::string provider;
  double price_per_min = 0.0;
  double minutes_per_mb = 0.0;

  bool operator==(const DataCenter&) const = default;
};

enum class PolicyKind { kSkyGS, kSG, kBG, kBR, kBWG, kIlpHpq };

std::string_view policy_name(PolicyKind kind);
// Throws ValidationError listing the valid names.
PolicyKind parse_policy(std::string_view name);
const std::vector<PolicyKind>& all_policies();

struct PolicyParams {
  std::string sg_provider;
  // BWG downlinks only when backlog >= fill_fraction * R * tau.
  double bwg_fill_fraction = 1.0;
  // ILP high-priority trigger: oldest chunk age >= rho * xi.
  double ilp_rho = 0.8;

  bool operator==(const PolicyParams&) const = default;
};

struct SimConfig {
  double tau_min = 1.0;
  Slot horizon_slots = 1440;
  double xi = 60.0;
  double v = 0.0;
  std::uint64_t seed = 1;
  PolicyKind policy = PolicyKind::kSkyGS;
  PolicyParams policy_params;
  double elevation_mask_deg = 10.0;
  double r_max_mb_per_min = gbps_to_mb_per_min(1.6);
  double noise_lo = 0.9;
  double noise_hi = 1.1;
  std::optional<std::string> contact_plan_path;
  bool earth_rotation = true;

  bool operator==(const SimConfig&) const = default;
};

struct Scenario {
  std::vector<Satellite> satellites;
  std::vector<GroundStation> ground_stations;
  std::vector<DataCenter> data_centers;
  SimConfig sim;

  bool operator==(const Scenario&) const = default;

  std::optional<SatIndex> satellite_index(std::string_view id) const;
  std::optional<StationIndex> station_index(std::string_view id) const;
  std::optional<DcIndex> data_center_index(std::string_view id) const;
  std::size_t total_antennas() const;
};

// Parses and validates a scenario document, applying unit conversions.
// Quantities may be plain numbers in canonical units or strings with a unit
// suffix ("1.6 Gbps", "22 $/min", "0.5 $/hour", "0.1 h/GB", "1 TB").
Scenario validate_scenario(const nlohmann::json& doc);

// Canonical document: validate_scenario(to_json(s)) == s.
nlohmann::json to_json(const Scenario& scenario);

Scenario load_scenario(const std::filesystem::path& path);

// Re-checks the invariants of an already-built scenario (e.g. after CLI
// overrides). Throws ValidationError.
void check_scenario(const Scenario& scenario);

// FNV-1a over the canonical JSON dump.
std::uint64_t scenario_hash(const Scenario& scenario);

}  // namespace skygs
