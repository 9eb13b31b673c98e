#pragma once

#include <filesystem>
#include <fstream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "skygs/engine.hpp"
#include "skygs/model.hpp"
#include "skygs/orbit.hpp"
#include "skygs/policy.hpp"
#include "skygs/queues.hpp"

namespace skygs::test {

using nlohmann::json;

inline json sat_doc(const std::string& id, double daily_mb = 1e6, double duty = 1.0, double inc = 97.4,
                    double raan = 0.0, double phase = 0.0) {
  return {{"id", id},           {"altitude_km", 475},    {"inclination_deg", inc}, {"raan_deg", raan},
          {"phase_deg", phase}, {"daily_volume_mb", daily_mb}, {"duty_cycle", duty}};
}

inline json station_doc(const std::string& id, const std::string& provider, int antennas, double price_per_min,
                        double lat = 0.0, double lon = 0.0) {
  return {{"id", id},   {"provider", provider},   {"latitude_deg", lat}, {"longitude_deg", lon},
          {"antennas", antennas}, {"price", std::to_string(price_per_min) + " $/min"}};
}

inline json dc_doc(const std::string& id, const std::string& provider, double price_per_hour = 1.0,
                   double hours_per_gb = 0.1) {
  return {{"id", id},
          {"provider", provider},
          {"price", std::to_string(price_per_hour) + " $/hour"},
          {"processing", std::to_string(hours_per_gb) + " h/GB"}};
}

inline json scenario_doc(json sats, json stations, json dcs, std::int64_t horizon = 10) {
  return {{"satellites", std::move(sats)},
          {"ground_stations", std::move(stations)},
          {"data_centers", std::move(dcs)},
          {"sim",
           {{"tau", 1},
            {"horizon", horizon},
            {"xi", 60},
            {"v", 0},
            {"seed", 1},
            {"backhaul_default", "1 Gbps"},
            {"policy_params", {{"sg_provider", "p0"}}}}}};
}

// Small scenario: `nsat` satellites, stations with the given antenna counts
// (provider p<i % 2>, price 18 + 4i $/min), `ndc` data centers.
inline Scenario small_scenario(std::size_t nsat, const std::vector<int>& antennas, std::size_t ndc,
                               std::int64_t horizon = 10) {
  json sats = json::array(), stations = json::array(), dcs = json::array();
  for (std::size_t s = 0; s < nsat; ++s) sats.push_back(sat_doc("s" + std::to_string(s)));
  for (std::size_t g = 0; g < antennas.size(); ++g)
    stations.push_back(station_doc("g" + std::to_string(g), "p" + std::to_string(g % 2), antennas[g],
                                   18.0 + 4.0 * static_cast<double>(g)));
  for (std::size_t d = 0; d < ndc; ++d)
    dcs.push_back(dc_doc("d" + std::to_string(d), "p" + std::to_string(d % 2), 0.5 + 0.1 * static_cast<double>(d),
                         0.1 + 0.02 * static_cast<double>(d)));
  return validate_scenario(scenario_doc(sats, stations, dcs, horizon));
}

// Mutable slot state around a scenario and a hand-built contact table.
struct World {
  Scenario sc;
  ContactTable contacts;
  std::vector<SatelliteState> states;
  std::vector<double> arrivals;
  double q = 0.0;
  Slot slot = 0;

  explicit World(Scenario scenario)
      : sc(std::move(scenario)),
        contacts(sc.sim.horizon_slots, sc.satellites.size(), sc.ground_stations.size()),
        arrivals(sc.satellites.size(), 0.0) {
    for (SatIndex s = 0; s < sc.satellites.size(); ++s) states.emplace_back(s);
  }

  void contact(SatIndex s, StationIndex g, double rate, Slot t = -1, double elevation = 45.0) {
    contacts.add({t < 0 ? slot : t, s, g, elevation, rate});
  }

  // One chunk of `mb` that arrived `age` slots before the current slot.
  void backlog(SatIndex s, double mb, Slot age = 1) { states[s].advance_backlog(mb, slot - age); }

  SlotContext ctx() const { return SlotContext{sc, contacts, states, arrivals, q, slot, sc.sim.seed}; }
};

inline std::filesystem::path temp_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("skygs_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

inline std::string read_file(const std::filesystem::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

inline void write_file(const std::filesystem::path& p, const std::string& text) {
  std::ofstream f(p, std::ios::binary);
  f << text;
}

inline std::filesystem::path desk_path() { return std::filesystem::path(SKYGS_SOURCE_DIR) / "scenarios" / "desk.json"; }

}  // namespace skygs::test
