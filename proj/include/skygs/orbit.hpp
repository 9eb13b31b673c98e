#pragma once

// Visibility and link rates: a circular-orbit propagator over a spherical
// Earth, or an externally produced contact plan.

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "skygs/model.hpp"

namespace skygs {

inline constexpr double kEarthMuKm3PerS2 = 398600.4418;
// Sidereal rotation, 360 degrees per 1436 minutes.
inline constexpr double kEarthRotationDegPerMin = 360.0 / 1436.0;

struct GeoPoint {
  double latitude_deg = 0.0;
  double longitude_deg = 0.0;
};

double orbital_period_min(double altitude_km);

// Sub-satellite point `minutes` after epoch. Longitude in [-180, 180).
GeoPoint sub_satellite_point(const OrbitalElements& orbit, double minutes, bool earth_rotation = true);

// Sub-satellite point at the start of `slot`, when link state is probed.
GeoPoint propagate(const Satellite& sat, Slot slot, double tau_min, bool earth_rotation = true);

// Central angle between two surface points, radians.
double central_angle_rad(GeoPoint a, GeoPoint b);

// Elevation of a satellite above the station's local horizon.
double elevation_deg(GeoPoint sub_point, double altitude_km, GeoPoint station);

// R_max * sin(elevation) * u with u ~ U[noise_lo, noise_hi] keyed by
// (seed, sat, station, slot). Throws ContractViolation below the mask.
double gsl_rate(double elevation, const SimConfig& sim, SatIndex sat, StationIndex station, Slot slot);

struct Contact {
  Slot slot = 0;
  SatIndex sat = 0;
  StationIndex station = 0;
  double elevation_deg = 0.0;
  double rate_mb_per_min = 0.0;

  bool operator==(const Contact&) const = default;
};

// Per-slot visibility sets. Within a slot, contacts are ordered by
// (satellite, station).
class ContactTable {
 public:
  ContactTable() = default;
  ContactTable(Slot horizon, std::size_t num_satellites, std::size_t num_stations);

  // Throws ContractViolation on out-of-range indices or duplicates.
  void add(const Contact& c);

  Slot horizon() const { return static_cast<Slot>(slots_.size()); }
  std::size_t num_satellites() const { return num_satellites_; }
  std::size_t num_stations() const { return num_stations_; }
  std::size_t size() const;

  std::span<const Contact> contacts(Slot t) const;
  // G^s(t) as contacts.
  std::span<const Contact> contacts_of(Slot t, SatIndex sat) const;
  // S(t), ascending.
  std::vector<SatIndex> visible_satellites(Slot t) const;
  std::optional<double> rate(SatIndex sat, StationIndex station, Slot t) const;

  bool operator==(const ContactTable&) const = default;

 private:
  std::size_t num_satellites_ = 0;
  std::size_t num_stations_ = 0;
  std::vector<std::vector<Contact>> slots_;
};

// A real antenna: station plus index in [0, psi_g).
struct AntennaRef {
  StationIndex station = 0;
  int index = 0;

  bool operator==(const AntennaRef&) const = default;
  auto operator<=>(const AntennaRef&) const = default;
};

// A^s(t): every antenna of every station in G^s(t).
std::vector<AntennaRef> visible_antennas(const Scenario& scenario, const ContactTable& table, Slot t,
                                         SatIndex sat);

class ContactPlanError : public ValidationError {
 public:
  ContactPlanError(std::size_t line, const std::string& what);
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

inline constexpr std::string_view kContactPlanHeader =
    "slot,satellite_id,ground_station_id,elevation_deg,rate_mb_per_min";

ContactTable propagate_contacts(const Scenario& scenario);
ContactTable read_contact_plan(const Scenario& scenario, std::istream& in);
ContactTable load_contact_plan(const Scenario& scenario, const std::filesystem::path& path);
void write_contact_plan(const Scenario& scenario, const ContactTable& table, std::ostream& out);

// File mode when sim.contact_plan_path is set, propagator mode otherwise.
ContactTable build_contact_table(const Scenario& scenario);

}  // namespace skygs
