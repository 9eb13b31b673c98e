#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "skygs/experiments.hpp"
#include "skygs/hungarian.hpp"
#include "skygs/orbit.hpp"

namespace py = pybind11;
using nlohmann::json;

namespace {

using skygs::Overrides;
using skygs::Scenario;

// Python values cross the boundary as JSON text; the wrapper module does
// the dumps/loads.
Scenario scenario_from(const std::string& text, const std::string& path) {
  if (!path.empty()) return skygs::load_scenario(path);
  try {
    return skygs::validate_scenario(json::parse(text));
  } catch (const json::parse_error& e) {
    throw skygs::ValidationError(std::string("scenario is not valid JSON: ") + e.what());
  }
}

Overrides overrides_from(const std::optional<std::string>& policy, std::optional<std::uint64_t> seed,
                         std::optional<double> v, std::optional<double> xi,
                         const std::optional<std::string>& contacts) {
  Overrides o;
  if (policy) o.policy = skygs::parse_policy(*policy);
  o.seed = seed;
  o.v = v;
  o.xi = xi;
  o.contact_plan_path = contacts;
  return o;
}

std::string validate(const std::string& text, const std::string& path) {
  return skygs::to_json(scenario_from(text, path)).dump();
}

std::string gen_contacts(const std::string& text, const std::string& path, std::optional<std::uint64_t> seed) {
  Overrides o;
  o.seed = seed;
  Scenario sc = skygs::apply_overrides(scenario_from(text, path), o);
  sc.sim.contact_plan_path.reset();
  std::ostringstream out;
  skygs::write_contact_plan(sc, skygs::propagate_contacts(sc), out);
  return out.str();
}

py::tuple simulate(const std::string& text, const std::string& path, const std::optional<std::string>& policy,
                   std::optional<std::uint64_t> seed, std::optional<double> v, std::optional<double> xi,
                   const std::optional<std::string>& contacts) {
  const Scenario sc = skygs::apply_overrides(scenario_from(text, path), overrides_from(policy, seed, v, xi, contacts));
  const skygs::ContactTable table = skygs::build_contact_table(sc);
  skygs::RunResult result;
  {
    py::gil_scoped_release release;
    result = skygs::run(sc, table);
  }
  json traces = json::array();
  for (const auto& t : result.record.traces)
    traces.push_back({{"slot", t.slot}, {"cost", t.cost}, {"phi", t.phi}, {"q", t.q_after},
                      {"backlog_mb", t.backlog_after_mb}});
  std::ostringstream csv;
  skygs::write_run_csv(sc, result.record, csv);
  return py::make_tuple(skygs::summary_json(result).dump(), traces.dump(), csv.str());
}

std::string table(const std::string& text, const std::string& path, const std::vector<std::string>& policies,
                  const std::vector<double>& vs, const std::vector<std::uint64_t>& seeds, unsigned threads) {
  const bool sweep = !vs.empty();
  Overrides base_override;
  if (sweep) base_override.policy = skygs::PolicyKind::kSkyGS;
  const Scenario base = skygs::apply_overrides(scenario_from(text, path), base_override);
  const std::vector<std::uint64_t> run_seeds = seeds.empty() ? std::vector<std::uint64_t>{base.sim.seed} : seeds;
  std::vector<Overrides> specs;
  if (sweep) {
    for (double v : vs)
      for (auto s : run_seeds) specs.push_back({std::nullopt, s, v, std::nullopt, std::nullopt});
  } else {
    std::vector<skygs::PolicyKind> kinds;
    if (policies.empty()) kinds = skygs::all_policies();
    for (const auto& p : policies) kinds.push_back(skygs::parse_policy(p));
    for (auto k : kinds)
      for (auto s : run_seeds) specs.push_back({k, s, std::nullopt, std::nullopt, std::nullopt});
  }
  std::vector<skygs::RunOutcome> outcomes;
  {
    py::gil_scoped_release release;
    outcomes = skygs::run_batch(base, specs, threads);
  }
  std::ostringstream out;
  out << (sweep ? skygs::kSweepHeader : skygs::kCompareHeader) << '\n';
  for (const auto& oc : outcomes) out << (sweep ? skygs::sweep_row(oc, base) : skygs::compare_row(oc, base)) << '\n';
  return out.str();
}

py::tuple hungarian(const std::vector<std::vector<std::optional<double>>>& rows) {
  const std::size_t n = rows.size();
  const std::size_t m = n ? rows[0].size() : 0;
  skygs::CostMatrix cost(n, m);
  for (std::size_t r = 0; r < n; ++r) {
    if (rows[r].size() != m) throw py::value_error("cost matrix rows differ in length");
    for (std::size_t c = 0; c < m; ++c) cost(r, c) = rows[r][c].value_or(skygs::kNoEdge);
  }
  const skygs::Matching match = skygs::hungarian_min_matching(cost);
  return py::make_tuple(match.row_to_col, match.total_cost);
}

}  // namespace

PYBIND11_MODULE(_skygs, m) {
  m.doc() = "Native core of the skygs ground-station scheduling simulator";
  py::register_exception<skygs::ValidationError>(m, "ValidationError", PyExc_ValueError);
  py::register_exception<skygs::InfeasibleAssignment>(m, "InfeasibleAssignment", PyExc_RuntimeError);
  py::register_exception<skygs::InfeasibleMatching>(m, "InfeasibleMatching", PyExc_ValueError);
  py::register_exception<skygs::ContractViolation>(m, "ContractViolation", PyExc_RuntimeError);

  m.def("validate", &validate, py::arg("text"), py::arg("path"));
  m.def("gen_contacts", &gen_contacts, py::arg("text"), py::arg("path"), py::arg("seed"));
  m.def("simulate", &simulate, py::arg("text"), py::arg("path"), py::arg("policy"), py::arg("seed"), py::arg("v"),
        py::arg("xi"), py::arg("contacts"));
  m.def("table", &table, py::arg("text"), py::arg("path"), py::arg("policies"), py::arg("vs"), py::arg("seeds"),
        py::arg("threads"));
  m.def("hungarian", &hungarian, py::arg("cost"));
  m.def("policies", [] {
    std::vector<std::string> names;
    for (auto k : skygs::all_policies()) names.emplace_back(skygs::policy_name(k));
    return names;
  });
}
