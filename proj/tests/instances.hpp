#pragma once

// Random small slot instances shared by the oracle tests and the acceptance run.

#include <random>

#include "support.hpp"

namespace skygs::test {

struct InstanceLimits {
  int max_sats = 4;
  int max_antennas = 4;
  int max_dcs = 3;
};

inline World random_instance(std::mt19937_64& rng, const InstanceLimits& lim = {}) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  auto pick = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };

  const int ns = pick(1, lim.max_sats);
  const int nd = pick(1, lim.max_dcs);
  std::vector<int> antennas;
  for (int left = pick(1, lim.max_antennas); left > 0;) {
    const int a = pick(1, left);
    antennas.push_back(a);
    left -= a;
  }

  json sats = json::array(), stations = json::array(), dcs = json::array();
  for (int s = 0; s < ns; ++s) sats.push_back(sat_doc("s" + std::to_string(s)));
  for (std::size_t g = 0; g < antennas.size(); ++g) {
    json st = station_doc("g" + std::to_string(g), "p" + std::to_string(g % 2), antennas[g], 0);
    st["price"] = std::to_string(u(rng) < 0.2 ? 18.0 : 10 + 20 * u(rng)) + " $/min";
    stations.push_back(st);
  }
  for (int d = 0; d < nd; ++d)
    dcs.push_back(dc_doc("d" + std::to_string(d), "p" + std::to_string(d % 2), 0.5 + 0.5 * u(rng), 0.1 + 0.1 * u(rng)));
  json doc = scenario_doc(sats, stations, dcs, 100);
  const double scale = std::pow(10.0, pick(0, 7));
  doc["sim"]["v"] = u(rng) < 0.15 ? 0.0 : scale * u(rng);
  doc["sim"]["xi"] = 10 + 80 * u(rng);
  for (auto& st : doc["ground_stations"]) {
    json bh = json::object();
    for (auto& dc : doc["data_centers"]) bh[dc["id"].get<std::string>()] = 2000 + 10000 * u(rng);
    st["backhaul"] = bh;
  }

  World w(validate_scenario(doc));
  w.slot = 60;
  w.q = u(rng) < 0.3 ? 0.0 : std::pow(10.0, 6 * u(rng));
  for (int s = 0; s < ns; ++s) {
    if (u(rng) < 0.15) continue;  // empty backlog
    const int chunks = pick(1, 4);
    Slot t = pick(0, 20);
    for (int c = 0; c < chunks && t < w.slot; ++c) {
      w.states[static_cast<std::size_t>(s)].advance_backlog(1 + 8000 * u(rng), t);
      t += pick(1, 15);
    }
    w.arrivals[static_cast<std::size_t>(s)] = u(rng) < 0.5 ? 0.0 : 700 * u(rng);
    for (std::size_t g = 0; g < antennas.size(); ++g)
      if (u(rng) < 0.6) w.contact(static_cast<std::size_t>(s), g, 200 + 11000 * u(rng));
  }
  return w;
}

inline bool objectives_match(double a, double b, double rel = 1e-9) {
  return std::abs(a - b) <= rel * std::max({1.0, std::abs(a), std::abs(b)});
}

}  // namespace skygs::test
