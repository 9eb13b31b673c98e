#include "skygs/orbit.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <ostream>
#include <string>

#include "skygs/csv.hpp"
#include "skygs/rng.hpp"

namespace skygs {

namespace {

constexpr double kDeg = std::numbers::pi / 180.0;

double wrap_longitude(double lon) {
  double w = std::fmod(lon + 180.0, 360.0);
  if (w < 0) w += 360.0;
  return w - 180.0;
}

bool contact_less(const Contact& a, const Contact& b) {
  return a.sat != b.sat ? a.sat < b.sat : a.station < b.station;
}

}  // namespace

double orbital_period_min(double altitude_km) {
  const double a = kEarthRadiusKm + altitude_km;
  return 2.0 * std::numbers::pi * std::sqrt(a * a * a / kEarthMuKm3PerS2) / 60.0;
}

GeoPoint sub_satellite_point(const OrbitalElements& orbit, double minutes, bool earth_rotation) {
  const double u = (orbit.phase_deg + 360.0 * minutes / orbital_period_min(orbit.altitude_km)) * kDeg;
  const double raan = orbit.raan_deg * kDeg;
  const double inc = orbit.inclination_deg * kDeg;
  const double x = std::cos(raan) * std::cos(u) - std::sin(raan) * std::sin(u) * std::cos(inc);
  const double y = std::sin(raan) * std::cos(u) + std::cos(raan) * std::sin(u) * std::cos(inc);
  const double z = std::sin(u) * std::sin(inc);
  GeoPoint p;
  p.latitude_deg = std::asin(std::clamp(z, -1.0, 1.0)) / kDeg;
  double lon = std::atan2(y, x) / kDeg;
  if (earth_rotation) lon -= kEarthRotationDegPerMin * minutes;
  p.longitude_deg = wrap_longitude(lon);
  return p;
}

GeoPoint propagate(const Satellite& sat, Slot slot, double tau_min, bool earth_rotation) {
  return sub_satellite_point(sat.orbit, static_cast<double>(slot) * tau_min, earth_rotation);
}

double central_angle_rad(GeoPoint a, GeoPoint b) {
  const double lat1 = a.latitude_deg * kDeg;
  const double lat2 = b.latitude_deg * kDeg;
  const double dlat = lat2 - lat1;
  const double dlon = (b.longitude_deg - a.longitude_deg) * kDeg;
  // haversine, stable for small angles
  const double h = std::sin(dlat / 2) * std::sin(dlat / 2) +
                   std::cos(lat1) * std::cos(lat2) * std::sin(dlon / 2) * std::sin(dlon / 2);
  return 2.0 * std::asin(std::sqrt(std::clamp(h, 0.0, 1.0)));
}

double elevation_deg(GeoPoint sub_point, double altitude_km, GeoPoint station) {
  const double gamma = central_angle_rad(sub_point, station);
  const double k = kEarthRadiusKm / (kEarthRadiusKm + altitude_km);
  return std::atan2(std::cos(gamma) - k, std::sin(gamma)) / kDeg;
}

double gsl_rate(double elevation, const SimConfig& sim, SatIndex sat, StationIndex station, Slot slot) {
  if (elevation < sim.elevation_mask_deg)
    throw ContractViolation("gsl_rate: elevation " + std::to_string(elevation) + " below mask");
  const double u = keyed_uniform(sim.seed, Stream::kGslNoise,
                                 {sat, station, static_cast<std::uint64_t>(slot)}, sim.noise_lo, sim.noise_hi);
  return sim.r_max_mb_per_min * std::sin(elevation * kDeg) * u;
}

ContactTable::ContactTable(Slot horizon, std::size_t num_satellites, std::size_t num_stations)
    : num_satellites_(num_satellites),
      num_stations_(num_stations),
      slots_(static_cast<std::size_t>(std::max<Slot>(horizon, 0))) {}

void ContactTable::add(const Contact& c) {
  if (c.slot < 0 || c.slot >= horizon() || c.sat >= num_satellites_ || c.station >= num_stations_)
    throw ContractViolation("ContactTable::add: contact out of range");
  auto& list = slots_[static_cast<std::size_t>(c.slot)];
  auto it = std::lower_bound(list.begin(), list.end(), c, contact_less);
  if (it != list.end() && it->sat == c.sat && it->station == c.station)
    throw ContractViolation("ContactTable::add: duplicate contact");
  list.insert(it, c);
}

std::size_t ContactTable::size() const {
  std::size_t n = 0;
  for (const auto& s : slots_) n += s.size();
  return n;
}

std::span<const Contact> ContactTable::contacts(Slot t) const {
  if (t < 0 || t >= horizon()) return {};
  return slots_[static_cast<std::size_t>(t)];
}

std::span<const Contact> ContactTable::contacts_of(Slot t, SatIndex sat) const {
  auto all = contacts(t);
  auto lo = std::partition_point(all.begin(), all.end(), [&](const Contact& c) { return c.sat < sat; });
  auto hi = std::partition_point(lo, all.end(), [&](const Contact& c) { return c.sat <= sat; });
  return {lo, hi};
}

std::vector<SatIndex> ContactTable::visible_satellites(Slot t) const {
  std::vector<SatIndex> out;
  for (const Contact& c : contacts(t))
    if (out.empty() || out.back() != c.sat) out.push_back(c.sat);
  return out;
}

std::optional<double> ContactTable::rate(SatIndex sat, StationIndex station, Slot t) const {
  for (const Contact& c : contacts_of(t, sat))
    if (c.station == station) return c.rate_mb_per_min;
  return std::nullopt;
}

std::vector<AntennaRef> visible_antennas(const Scenario& scenario, const ContactTable& table, Slot t,
                                         SatIndex sat) {
  std::vector<AntennaRef> out;
  for (const Contact& c : table.contacts_of(t, sat))
    for (int a = 0; a < scenario.ground_stations[c.station].antennas; ++a) out.push_back({c.station, a});
  return out;
}

ContactPlanError::ContactPlanError(std::size_t line, const std::string& what)
    : ValidationError("contact plan line " + std::to_string(line) + ": " + what), line_(line) {}

ContactTable propagate_contacts(const Scenario& scenario) {
  const auto& sim = scenario.sim;
  ContactTable table(sim.horizon_slots, scenario.satellites.size(), scenario.ground_stations.size());
  std::vector<GeoPoint> stations;
  for (const auto& g : scenario.ground_stations) stations.push_back({g.latitude_deg, g.longitude_deg});

  for (Slot t = 0; t < sim.horizon_slots; ++t) {
    for (SatIndex s = 0; s < scenario.satellites.size(); ++s) {
      const Satellite& sat = scenario.satellites[s];
      const GeoPoint sub = propagate(sat, t, sim.tau_min, sim.earth_rotation);
      for (StationIndex g = 0; g < stations.size(); ++g) {
        const double el = elevation_deg(sub, sat.orbit.altitude_km, stations[g]);
        if (el < sim.elevation_mask_deg) continue;
        table.add({t, s, g, el, gsl_rate(el, sim, s, g, t)});
      }
    }
  }
  return table;
}

ContactTable read_contact_plan(const Scenario& scenario, std::istream& in) {
  const auto& sim = scenario.sim;
  ContactTable table(sim.horizon_slots, scenario.satellites.size(), scenario.ground_stations.size());
  const double rate_cap = sim.r_max_mb_per_min * sim.noise_hi;

  std::string line;
  std::size_t line_no = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view text = csv::trim(line);
    if (line_no == 1 && text.size() >= 3 && text.substr(0, 3) == "\xEF\xBB\xBF") text.remove_prefix(3);
    if (text.empty()) continue;
    if (!header_seen) {
      if (text != kContactPlanHeader)
        throw ContactPlanError(line_no, "expected header '" + std::string(kContactPlanHeader) + "'");
      header_seen = true;
      continue;
    }
    auto fields = csv::split(text);
    if (fields.size() != 5)
      throw ContactPlanError(line_no, "expected 5 fields, got " + std::to_string(fields.size()));
    Contact c;
    if (!csv::parse(fields[0], c.slot)) throw ContactPlanError(line_no, "bad slot");
    if (!csv::parse(fields[3], c.elevation_deg)) throw ContactPlanError(line_no, "bad elevation_deg");
    if (!csv::parse(fields[4], c.rate_mb_per_min)) throw ContactPlanError(line_no, "bad rate_mb_per_min");
    const auto sat_id = csv::trim(fields[1]);
    const auto gs_id = csv::trim(fields[2]);
    auto sat = scenario.satellite_index(sat_id);
    if (!sat) throw ContactPlanError(line_no, "unknown satellite '" + std::string(sat_id) + "'");
    auto gs = scenario.station_index(gs_id);
    if (!gs) throw ContactPlanError(line_no, "unknown ground station '" + std::string(gs_id) + "'");
    c.sat = *sat;
    c.station = *gs;
    if (c.slot < 0 || c.slot >= sim.horizon_slots)
      throw ContactPlanError(line_no, "slot " + std::to_string(c.slot) + " outside horizon");
    if (c.elevation_deg < sim.elevation_mask_deg || c.elevation_deg > 90.0)
      throw ContactPlanError(line_no, "elevation outside [mask, 90]");
    if (!(c.rate_mb_per_min > 0) || c.rate_mb_per_min > rate_cap)
      throw ContactPlanError(line_no, "rate outside (0, r_max * noise_hi]");
    try {
      table.add(c);
    } catch (const ContractViolation&) {
      throw ContactPlanError(line_no, "duplicate contact");
    }
  }
  return table;
}

ContactTable load_contact_plan(const Scenario& scenario, const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open contact plan '" + path.string() + "'");
  return read_contact_plan(scenario, in);
}

void write_contact_plan(const Scenario& scenario, const ContactTable& table, std::ostream& out) {
  out << kContactPlanHeader << '\n';
  for (Slot t = 0; t < table.horizon(); ++t) {
    for (const Contact& c : table.contacts(t)) {
      out << c.slot << ',' << scenario.satellites[c.sat].id << ',' << scenario.ground_stations[c.station].id
          << ',' << csv::format(c.elevation_deg) << ',' << csv::format(c.rate_mb_per_min) << '\n';
    }
  }
}

ContactTable build_contact_table(const Scenario& scenario) {
  if (scenario.sim.contact_plan_path) return load_contact_plan(scenario, *scenario.sim.contact_plan_path);
  return propagate_contacts(scenario);
}

}  // namespace skygs
