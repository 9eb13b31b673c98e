#include "skygs/model.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace skygs {

namespace {

using nlohmann::json;

enum class Quantity { kRate, kStationPrice, kDcPrice, kIntensity, kVolume };

std::string trim(std::string_view s) {
  auto b = s.find_first_not_of(" \t");
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(" \t");
  return std::string(s.substr(b, e - b + 1));
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

// Collects every problem in a document before failing.
class Checker {
 public:
  void fail(const std::string& field, const std::string& what) {
    errors_.push_back(field + ": " + what);
  }

  bool ok() const { return errors_.empty(); }

  void throw_if_failed() const {
    if (errors_.empty()) return;
    std::ostringstream msg;
    msg << "invalid scenario";
    for (const auto& e : errors_) msg << "\n  " << e;
    throw ValidationError(msg.str());
  }

  const json* require(const json& obj, const std::string& key, const std::string& path) {
    if (!obj.is_object() || !obj.contains(key)) {
      fail(path + "." + key, "missing required field");
      return nullptr;
    }
    return &obj.at(key);
  }

  void reject_unknown(const json& obj, std::initializer_list<std::string_view> known,
                      const std::string& path) {
    if (!obj.is_object()) return;
    for (const auto& [key, _] : obj.items()) {
      if (std::find(known.begin(), known.end(), key) == known.end())
        fail(path + "." + key, "unknown field");
    }
  }

  std::optional<double> number(const json* v, const std::string& field) {
    if (v == nullptr) return std::nullopt;
    if (!v->is_number()) {
      fail(field, "expected a number");
      return std::nullopt;
    }
    return v->get<double>();
  }

  std::optional<std::string> string(const json* v, const std::string& field) {
    if (v == nullptr) return std::nullopt;
    if (!v->is_string()) {
      fail(field, "expected a string");
      return std::nullopt;
    }
    return v->get<std::string>();
  }

  // Number in canonical units or "<value> <unit>".
  std::optional<double> quantity(const json* v, Quantity kind, double tau,
                                 const std::string& field) {
    if (v == nullptr) return std::nullopt;
    if (v->is_number()) {
      double x = v->get<double>();
      return kind == Quantity::kStationPrice ? x * tau : x;
    }
    if (!v->is_string()) {
      fail(field, "expected a number or a string with a unit");
      return std::nullopt;
    }
    const std::string text = trim(v->get<std::string>());
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc()) {
      fail(field, "cannot parse quantity '" + text + "'");
      return std::nullopt;
    }
    const std::string unit = lower(trim(std::string_view(ptr, text.data() + text.size() - ptr)));
    std::optional<double> out;
    switch (kind) {
      case Quantity::kRate:
        if (unit == "mb/min" || unit.empty()) out = value;
        else if (unit == "gbps") out = gbps_to_mb_per_min(value);
        else if (unit == "mbps") out = value * kMbPerMinPerGbps / 1000.0;
        else if (unit == "mb/s") out = value * 60.0;
        break;
      case Quantity::kStationPrice:
        if (unit == "$/slot") out = value;
        else if (unit == "$/min" || unit.empty()) out = value * tau;
        else if (unit == "$/hour" || unit == "$/h" || unit == "$/hr") out = per_hour_to_per_min(value) * tau;
        break;
      case Quantity::kDcPrice:
        if (unit == "$/min" || unit.empty()) out = value;
        else if (unit == "$/hour" || unit == "$/h" || unit == "$/hr") out = per_hour_to_per_min(value);
        break;
      case Quantity::kIntensity:
        if (unit == "min/mb" || unit.empty()) out = value;
        else if (unit == "h/gb" || unit == "hours/gb") out = hours_per_gb_to_min_per_mb(value);
        else if (unit == "min/gb") out = value / 1000.0;
        break;
      case Quantity::kVolume:
        if (unit == "mb" || unit.empty()) out = value;
        else if (unit == "gb") out = value * 1.0e3;
        else if (unit == "tb") out = value * kMbPerTb;
        break;
    }
    if (!out) fail(field, "unsupported unit '" + unit + "'");
    return out;
  }

 private:
  std::vector<std::string> errors_;
};

void check_invariants(const Scenario& s, Checker& c) {
  const auto& sim = s.sim;
  if (!(sim.tau_min > 0)) c.fail("sim.tau", "must be > 0");
  if (sim.horizon_slots < 0) c.fail("sim.horizon", "must be >= 0");
  if (!(sim.xi > 0)) c.fail("sim.xi", "must be > 0");
  if (!(sim.v >= 0)) c.fail("sim.v", "must be >= 0");
  if (!(sim.noise_lo > 0 && sim.noise_hi < 2 && sim.noise_lo <= sim.noise_hi))
    c.fail("sim.noise", "range must satisfy 0 < lo <= hi < 2");
  if (!(sim.r_max_mb_per_min > 0)) c.fail("sim.r_max", "must be > 0");
  if (!(sim.elevation_mask_deg >= 0 && sim.elevation_mask_deg < 90))
    c.fail("sim.elevation_mask_deg", "must be in [0, 90)");
  if (!(sim.policy_params.ilp_rho > 0 && sim.policy_params.ilp_rho <= 1))
    c.fail("sim.policy_params.ilp_rho", "must be in (0, 1]");
  if (!(sim.policy_params.bwg_fill_fraction > 0))
    c.fail("sim.policy_params.bwg_fill_fraction", "must be > 0");

  std::set<std::string> ids;
  for (const auto& sat : s.satellites) {
    const std::string f = "satellite '" + sat.id + "'";
    if (sat.id.empty()) c.fail("satellites", "empty id");
    if (!ids.insert("s:" + sat.id).second) c.fail(f, "duplicate id");
    if (!(sat.orbit.altitude_km > 0)) c.fail(f + ".altitude_km", "must be > 0");
    if (!(sat.duty_cycle > 0 && sat.duty_cycle <= 1)) c.fail(f + ".duty_cycle", "must be in (0, 1]");
    if (!(sat.daily_volume_min_mb > 0 && sat.daily_volume_min_mb <= sat.daily_volume_max_mb))
      c.fail(f + ".daily_volume_mb", "must be > 0 with min <= max");
  }
  for (const auto& gs : s.ground_stations) {
    const std::string f = "ground station '" + gs.id + "'";
    if (gs.id.empty()) c.fail("ground_stations", "empty id");
    if (!ids.insert("g:" + gs.id).second) c.fail(f, "duplicate id");
    if (gs.antennas < 1) c.fail(f + ".antennas", "must be >= 1");
    if (!(gs.price_per_slot >= 0)) c.fail(f + ".price", "must be >= 0");
    if (!(std::abs(gs.latitude_deg) <= 90)) c.fail(f + ".latitude_deg", "must be in [-90, 90]");
    if (!(gs.longitude_deg >= -180 && gs.longitude_deg < 180))
      c.fail(f + ".longitude_deg", "must be in [-180, 180)");
    if (gs.backhaul_mb_per_min.size() != s.data_centers.size()) {
      c.fail(f + ".backhaul", "incomplete backhaul matrix");
    } else {
      for (std::size_t d = 0; d < s.data_centers.size(); ++d)
        if (!(gs.backhaul_mb_per_min[d] > 0))
          c.fail(f + ".backhaul." + s.data_centers[d].id, "must be > 0");
    }
  }
  for (const auto& dc : s.data_centers) {
    const std::string f = "data center '" + dc.id + "'";
    if (dc.id.empty()) c.fail("data_centers", "empty id");
    if (!ids.insert("d:" + dc.id).second) c.fail(f, "duplicate id");
    if (!(dc.price_per_min >= 0)) c.fail(f + ".price", "must be >= 0");
    if (!(dc.minutes_per_mb > 0)) c.fail(f + ".processing", "must be > 0");
  }

  const std::string& provider = sim.policy_params.sg_provider;
  if (sim.policy == PolicyKind::kSG && provider.empty())
    c.fail("sim.policy_params.sg_provider", "required for policy sg");
  if (!provider.empty()) {
    bool has_station = std::any_of(s.ground_stations.begin(), s.ground_stations.end(),
                                   [&](const auto& g) { return g.provider == provider; });
    bool has_dc = std::any_of(s.data_centers.begin(), s.data_centers.end(),
                              [&](const auto& d) { return d.provider == provider; });
    if (!has_station) c.fail("sim.policy_params.sg_provider", "provider '" + provider + "' owns no stations");
    if (!has_dc) c.fail("sim.policy_params.sg_provider", "provider '" + provider + "' owns no data centers");
  }
}

void parse_sim(const json& doc, Checker& c, SimConfig& sim,
               std::optional<double>& backhaul_default) {
  const json* simj = c.require(doc, "sim", "scenario");
  if (simj == nullptr) return;
  if (!simj->is_object()) {
    c.fail("sim", "expected an object");
    return;
  }
  c.reject_unknown(*simj,
                   {"tau", "horizon", "xi", "v", "seed", "policy", "policy_params",
                    "elevation_mask_deg", "r_max", "noise", "contact_plan_path",
                    "backhaul_default", "earth_rotation"},
                   "sim");
  if (auto v = c.number(c.require(*simj, "tau", "sim"), "sim.tau")) sim.tau_min = *v;
  if (const json* h = c.require(*simj, "horizon", "sim")) {
    if (h->is_number_integer()) sim.horizon_slots = h->get<Slot>();
    else c.fail("sim.horizon", "expected an integer slot count");
  }
  if (auto v = c.number(c.require(*simj, "xi", "sim"), "sim.xi")) sim.xi = *v;
  if (simj->contains("v"))
    if (auto v = c.number(&simj->at("v"), "sim.v")) sim.v = *v;
  if (simj->contains("seed")) {
    const json& s = simj->at("seed");
    if (s.is_number_unsigned()) sim.seed = s.get<std::uint64_t>();
    else if (s.is_number_integer() && s.get<std::int64_t>() >= 0) sim.seed = s.get<std::uint64_t>();
    else c.fail("sim.seed", "expected a non-negative integer");
  }
  if (simj->contains("policy")) {
    if (auto p = c.string(&simj->at("policy"), "sim.policy")) {
      try {
        sim.policy = parse_policy(*p);
      } catch (const ValidationError& e) {
        c.fail("sim.policy", e.what());
      }
    }
  }
  if (simj->contains("policy_params")) {
    const json& pp = simj->at("policy_params");
    c.reject_unknown(pp, {"sg_provider", "bwg_fill_fraction", "ilp_rho"}, "sim.policy_params");
    if (pp.contains("sg_provider"))
      if (auto v = c.string(&pp.at("sg_provider"), "sim.policy_params.sg_provider"))
        sim.policy_params.sg_provider = *v;
    if (pp.contains("bwg_fill_fraction"))
      if (auto v = c.number(&pp.at("bwg_fill_fraction"), "sim.policy_params.bwg_fill_fraction"))
        sim.policy_params.bwg_fill_fraction = *v;
    if (pp.contains("ilp_rho"))
      if (auto v = c.number(&pp.at("ilp_rho"), "sim.policy_params.ilp_rho"))
        sim.policy_params.ilp_rho = *v;
  }
  if (simj->contains("elevation_mask_deg"))
    if (auto v = c.number(&simj->at("elevation_mask_deg"), "sim.elevation_mask_deg"))
      sim.elevation_mask_deg = *v;
  if (simj->contains("r_max"))
    if (auto v = c.quantity(&simj->at("r_max"), Quantity::kRate, 1.0, "sim.r_max"))
      sim.r_max_mb_per_min = *v;
  if (simj->contains("noise")) {
    const json& n = simj->at("noise");
    if (n.is_array() && n.size() == 2 && n[0].is_number() && n[1].is_number()) {
      sim.noise_lo = n[0].get<double>();
      sim.noise_hi = n[1].get<double>();
    } else {
      c.fail("sim.noise", "expected [lo, hi]");
    }
  }
  if (simj->contains("contact_plan_path") && !simj->at("contact_plan_path").is_null())
    if (auto v = c.string(&simj->at("contact_plan_path"), "sim.contact_plan_path"))
      sim.contact_plan_path = *v;
  if (simj->contains("backhaul_default"))
    backhaul_default = c.quantity(&simj->at("backhaul_default"), Quantity::kRate, 1.0,
                                  "sim.backhaul_default");
  if (simj->contains("earth_rotation")) {
    const json& e = simj->at("earth_rotation");
    if (e.is_boolean()) sim.earth_rotation = e.get<bool>();
    else c.fail("sim.earth_rotation", "expected a boolean");
  }
}

const json& array_field(const json& doc, const char* key, Checker& c) {
  static const json kEmpty = json::array();
  const json* v = c.require(doc, key, "scenario");
  if (v == nullptr) return kEmpty;
  if (!v->is_array()) {
    c.fail(key, "expected an array");
    return kEmpty;
  }
  return *v;
}

std::string entity_id(const json& e, const std::string& path, Checker& c) {
  if (auto id = c.string(c.require(e, "id", path), path + ".id")) return *id;
  return {};
}

}  // namespace

std::string_view policy_name(PolicyKind kind) {
  switch (kind) {
    case PolicyKind::kSkyGS: return "skygs";
    case PolicyKind::kSG: return "sg";
    case PolicyKind::kBG: return "bg";
    case PolicyKind::kBR: return "br";
    case PolicyKind::kBWG: return "bwg";
    case PolicyKind::kIlpHpq: return "ilp";
  }
  return "unknown";
}

const std::vector<PolicyKind>& all_policies() {
  static const std::vector<PolicyKind> kAll = {PolicyKind::kSkyGS, PolicyKind::kSG,
                                               PolicyKind::kBG,    PolicyKind::kBR,
                                               PolicyKind::kBWG,   PolicyKind::kIlpHpq};
  return kAll;
}

PolicyKind parse_policy(std::string_view name) {
  const std::string key = lower(std::string(name));
  for (PolicyKind k : all_policies())
    if (policy_name(k) == key) return k;
  if (key == "ilp_hpq") return PolicyKind::kIlpHpq;
  std::string valid;
  for (PolicyKind k : all_policies()) {
    if (!valid.empty()) valid += ", ";
    valid += policy_name(k);
  }
  throw ValidationError("unknown policy '" + std::string(name) + "' (valid: " + valid + ")");
}

std::optional<SatIndex> Scenario::satellite_index(std::string_view id) const {
  for (SatIndex i = 0; i < satellites.size(); ++i)
    if (satellites[i].id == id) return i;
  return std::nullopt;
}

std::optional<StationIndex> Scenario::station_index(std::string_view id) const {
  for (StationIndex i = 0; i < ground_stations.size(); ++i)
    if (ground_stations[i].id == id) return i;
  return std::nullopt;
}

std::optional<DcIndex> Scenario::data_center_index(std::string_view id) const {
  for (DcIndex i = 0; i < data_centers.size(); ++i)
    if (data_centers[i].id == id) return i;
  return std::nullopt;
}

std::size_t Scenario::total_antennas() const {
  std::size_t n = 0;
  for (const auto& g : ground_stations) n += static_cast<std::size_t>(std::max(g.antennas, 0));
  return n;
}

Scenario validate_scenario(const json& doc) {
  Checker c;
  Scenario s;
  if (!doc.is_object()) throw ValidationError("invalid scenario\n  scenario: expected a JSON object");
  c.reject_unknown(doc, {"satellites", "ground_stations", "data_centers", "sim"}, "scenario");

  std::optional<double> backhaul_default;
  parse_sim(doc, c, s.sim, backhaul_default);
  const double tau = s.sim.tau_min;

  for (const json& e : array_field(doc, "satellites", c)) {
    const std::string path = "satellites[" + std::to_string(s.satellites.size()) + "]";
    c.reject_unknown(e,
                     {"id", "altitude_km", "inclination_deg", "raan_deg", "phase_deg",
                      "daily_volume_mb", "duty_cycle"},
                     path);
    Satellite sat;
    sat.id = entity_id(e, path, c);
    const std::string f = "satellite '" + sat.id + "'";
    if (auto v = c.number(c.require(e, "altitude_km", f), f + ".altitude_km")) sat.orbit.altitude_km = *v;
    if (auto v = c.number(c.require(e, "inclination_deg", f), f + ".inclination_deg"))
      sat.orbit.inclination_deg = *v;
    if (e.contains("raan_deg"))
      if (auto v = c.number(&e.at("raan_deg"), f + ".raan_deg")) sat.orbit.raan_deg = *v;
    if (e.contains("phase_deg"))
      if (auto v = c.number(&e.at("phase_deg"), f + ".phase_deg")) sat.orbit.phase_deg = *v;
    if (const json* vol = c.require(e, "daily_volume_mb", f)) {
      if (vol->is_array() && vol->size() == 2) {
        auto lo = c.quantity(&(*vol)[0], Quantity::kVolume, tau, f + ".daily_volume_mb[0]");
        auto hi = c.quantity(&(*vol)[1], Quantity::kVolume, tau, f + ".daily_volume_mb[1]");
        if (lo && hi) {
          sat.daily_volume_min_mb = *lo;
          sat.daily_volume_max_mb = *hi;
        }
      } else if (auto v = c.quantity(vol, Quantity::kVolume, tau, f + ".daily_volume_mb")) {
        sat.daily_volume_min_mb = sat.daily_volume_max_mb = *v;
      }
    }
    if (e.contains("duty_cycle"))
      if (auto v = c.number(&e.at("duty_cycle"), f + ".duty_cycle")) sat.duty_cycle = *v;
    s.satellites.push_back(std::move(sat));
  }

  for (const json& e : array_field(doc, "data_centers", c)) {
    const std::string path = "data_centers[" + std::to_string(s.data_centers.size()) + "]";
    c.reject_unknown(e, {"id", "provider", "price", "processing"}, path);
    DataCenter dc;
    dc.id = entity_id(e, path, c);
    const std::string f = "data center '" + dc.id + "'";
    if (auto v = c.string(c.require(e, "provider", f), f + ".provider")) dc.provider = *v;
    if (auto v = c.quantity(c.require(e, "price", f), Quantity::kDcPrice, tau, f + ".price"))
      dc.price_per_min = *v;
    if (auto v = c.quantity(c.require(e, "processing", f), Quantity::kIntensity, tau, f + ".processing"))
      dc.minutes_per_mb = *v;
    s.data_centers.push_back(std::move(dc));
  }

  for (const json& e : array_field(doc, "ground_stations", c)) {
    const std::string path = "ground_stations[" + std::to_string(s.ground_stations.size()) + "]";
    c.reject_unknown(e, {"id", "provider", "latitude_deg", "longitude_deg", "antennas", "price", "backhaul"},
                     path);
    GroundStation gs;
    gs.id = entity_id(e, path, c);
    const std::string f = "ground station '" + gs.id + "'";
    if (auto v = c.string(c.require(e, "provider", f), f + ".provider")) gs.provider = *v;
    if (auto v = c.number(c.require(e, "latitude_deg", f), f + ".latitude_deg")) gs.latitude_deg = *v;
    if (auto v = c.number(c.require(e, "longitude_deg", f), f + ".longitude_deg")) gs.longitude_deg = *v;
    if (const json* a = c.require(e, "antennas", f)) {
      if (a->is_number_integer()) gs.antennas = a->get<int>();
      else c.fail(f + ".antennas", "expected an integer");
    }
    if (auto v = c.quantity(c.require(e, "price", f), Quantity::kStationPrice, tau, f + ".price"))
      gs.price_per_slot = *v;

    const json* overrides = e.contains("backhaul") ? &e.at("backhaul") : nullptr;
    if (overrides != nullptr && !overrides->is_object()) {
      c.fail(f + ".backhaul", "expected an object keyed by data center id");
      overrides = nullptr;
    }
    if (overrides != nullptr) {
      for (const auto& [dc_id, _] : overrides->items())
        if (!s.data_center_index(dc_id)) c.fail(f + ".backhaul." + dc_id, "unknown data center");
    }
    bool complete = true;
    for (const auto& dc : s.data_centers) {
      if (overrides != nullptr && overrides->contains(dc.id)) {
        auto v = c.quantity(&overrides->at(dc.id), Quantity::kRate, tau, f + ".backhaul." + dc.id);
        gs.backhaul_mb_per_min.push_back(v.value_or(0.0));
      } else if (backhaul_default) {
        gs.backhaul_mb_per_min.push_back(*backhaul_default);
      } else {
        complete = false;
      }
    }
    if (!complete) {
      c.fail(f + ".backhaul", "incomplete backhaul matrix");
      gs.backhaul_mb_per_min.assign(s.data_centers.size(), 1.0);
    }
    s.ground_stations.push_back(std::move(gs));
  }

  // Per-field errors first; invariant checks on half-parsed input only add noise.
  c.throw_if_failed();
  check_invariants(s, c);
  c.throw_if_failed();
  return s;
}

void check_scenario(const Scenario& scenario) {
  Checker c;
  check_invariants(scenario, c);
  c.throw_if_failed();
}

json to_json(const Scenario& s) {
  json doc;
  doc["satellites"] = json::array();
  for (const auto& sat : s.satellites) {
    doc["satellites"].push_back({{"id", sat.id},
                                 {"altitude_km", sat.orbit.altitude_km},
                                 {"inclination_deg", sat.orbit.inclination_deg},
                                 {"raan_deg", sat.orbit.raan_deg},
                                 {"phase_deg", sat.orbit.phase_deg},
                                 {"daily_volume_mb", {sat.daily_volume_min_mb, sat.daily_volume_max_mb}},
                                 {"duty_cycle", sat.duty_cycle}});
  }
  doc["ground_stations"] = json::array();
  for (const auto& gs : s.ground_stations) {
    json backhaul = json::object();
    for (std::size_t d = 0; d < s.data_centers.size() && d < gs.backhaul_mb_per_min.size(); ++d)
      backhaul[s.data_centers[d].id] = gs.backhaul_mb_per_min[d];
    std::ostringstream price;
    price.precision(17);
    price << gs.price_per_slot << " $/slot";
    doc["ground_stations"].push_back({{"id", gs.id},
                                      {"provider", gs.provider},
                                      {"latitude_deg", gs.latitude_deg},
                                      {"longitude_deg", gs.longitude_deg},
                                      {"antennas", gs.antennas},
                                      {"price", price.str()},
                                      {"backhaul", backhaul}});
  }
  doc["data_centers"] = json::array();
  for (const auto& dc : s.data_centers) {
    doc["data_centers"].push_back({{"id", dc.id},
                                   {"provider", dc.provider},
                                   {"price", dc.price_per_min},
                                   {"processing", dc.minutes_per_mb}});
  }
  const auto& sim = s.sim;
  json params = {{"bwg_fill_fraction", sim.policy_params.bwg_fill_fraction},
                 {"ilp_rho", sim.policy_params.ilp_rho}};
  if (!sim.policy_params.sg_provider.empty()) params["sg_provider"] = sim.policy_params.sg_provider;
  doc["sim"] = {{"tau", sim.tau_min},
                {"horizon", sim.horizon_slots},
                {"xi", sim.xi},
                {"v", sim.v},
                {"seed", sim.seed},
                {"policy", std::string(policy_name(sim.policy))},
                {"policy_params", params},
                {"elevation_mask_deg", sim.elevation_mask_deg},
                {"r_max", sim.r_max_mb_per_min},
                {"noise", {sim.noise_lo, sim.noise_hi}},
                {"earth_rotation", sim.earth_rotation}};
  if (sim.contact_plan_path) doc["sim"]["contact_plan_path"] = *sim.contact_plan_path;
  return doc;
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open scenario file '" + path.string() + "'");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ValidationError("scenario file '" + path.string() + "' is not valid JSON: " + e.what());
  }
  Scenario s = validate_scenario(doc);
  if (s.sim.contact_plan_path) {
    std::filesystem::path plan(*s.sim.contact_plan_path);
    if (plan.is_relative()) s.sim.contact_plan_path = (path.parent_path() / plan).lexically_normal().string();
  }
  return s;
}

std::uint64_t scenario_hash(const Scenario& scenario) {
  const std::string text = to_json(scenario).dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace skygs
