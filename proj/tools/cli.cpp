#include "cli.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <spdlog/spdlog.h>

#include "CLI11.hpp"
#include "skygs/csv.hpp"
#include "skygs/engine.hpp"
#include "skygs/experiments.hpp"
#include "skygs/scheduler.hpp"

namespace skygs::cli {

namespace {

namespace fs = std::filesystem;

class RuntimeFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Options {
  std::string scenario;
  std::string out;
  std::string policy;
  std::optional<std::uint64_t> seed;
  std::optional<double> v;
  std::optional<double> xi;
  std::string contacts;
  std::string policies;
  std::string v_list;
  std::string seeds;
  bool dump_weights = false;
  unsigned threads = 0;
};

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  for (auto part : csv::split(text)) {
    auto t = csv::trim(part);
    if (!t.empty()) out.emplace_back(t);
  }
  return out;
}

template <typename T>
std::vector<T> parse_list(const std::string& text, const char* flag) {
  std::vector<T> out;
  for (const auto& item : split_list(text)) {
    T value{};
    if (!csv::parse(item, value)) throw ValidationError(std::string(flag) + ": cannot parse '" + item + "'");
    out.push_back(value);
  }
  if (out.empty()) throw ValidationError(std::string(flag) + ": empty list");
  return out;
}

Overrides overrides_from(const Options& o) {
  Overrides ov;
  if (!o.policy.empty()) ov.policy = parse_policy(o.policy);
  ov.seed = o.seed;
  ov.v = o.v;
  ov.xi = o.xi;
  if (!o.contacts.empty()) ov.contact_plan_path = o.contacts;
  return ov;
}

void ensure_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw RuntimeFailure("cannot create output directory '" + dir + "': " + ec.message());
}

std::ofstream open_out(const fs::path& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw RuntimeFailure("cannot write '" + path.string() + "'");
  return f;
}

void write_text(const fs::path& path, const std::string& text) {
  auto f = open_out(path);
  f << text;
  if (!f) throw RuntimeFailure("write failed for '" + path.string() + "'");
}

int cmd_validate(const Options& o, std::ostream& out) {
  load_scenario(o.scenario);
  out << "OK\n";
  return kExitOk;
}

int cmd_gen_contacts(const Options& o, std::ostream& out) {
  Scenario sc = apply_overrides(load_scenario(o.scenario), overrides_from(o));
  sc.sim.contact_plan_path.reset();
  const ContactTable table = propagate_contacts(sc);
  std::ostringstream text;
  write_contact_plan(sc, table, text);
  if (o.out.empty()) {
    out << text.str();
  } else {
    write_text(o.out, text.str());
    spdlog::info("wrote {} contacts to {}", table.size(), o.out);
  }
  return kExitOk;
}

int cmd_simulate(const Options& o, std::ostream& out) {
  const Scenario sc = apply_overrides(load_scenario(o.scenario), overrides_from(o));
  const ContactTable table = build_contact_table(sc);
  Simulation sim(sc, table, make_policy(sc.sim.policy, sc));

  std::ofstream weights;
  if (o.dump_weights) {
    if (o.out.empty()) throw ValidationError("--dump-weights requires --out");
    ensure_dir(o.out);
    weights = open_out(fs::path(o.out) / "weights.csv");
    bool header = true;
    sim.set_observer([&](const SlotContext& ctx, const Assignment&) {
      write_weight_matrix(ctx, build_bipartite(ctx), weights, header);
      header = false;
    });
  }

  RunResult result;
  try {
    result = sim.run_to_end();
  } catch (const InfeasibleAssignment& e) {
    throw RuntimeFailure(e.what());
  }
  const std::string summary = summary_json(result).dump(2) + "\n";
  if (!o.out.empty()) {
    ensure_dir(o.out);
    std::ostringstream records;
    write_run_csv(sc, result.record, records);
    write_text(fs::path(o.out) / "run.csv", records.str());
    write_text(fs::path(o.out) / "summary.json", summary);
  }
  out << summary;
  return kExitOk;
}

std::vector<std::uint64_t> seeds_from(const Options& o, const Scenario& sc) {
  if (o.seeds.empty()) return {o.seed.value_or(sc.sim.seed)};
  return parse_list<std::uint64_t>(o.seeds, "--seeds");
}

void emit_table(const Options& o, const char* file, std::string_view header, const std::vector<std::string>& rows,
                std::ostream& out) {
  std::ostringstream text;
  text << header << '\n';
  for (const auto& r : rows) text << r << '\n';
  if (o.out.empty()) {
    out << text.str();
  } else {
    ensure_dir(o.out);
    write_text(fs::path(o.out) / file, text.str());
    out << text.str();
  }
}

int cmd_compare(const Options& o, std::ostream& out) {
  const Scenario base = apply_overrides(load_scenario(o.scenario), overrides_from(o));
  std::vector<PolicyKind> policies;
  if (o.policies.empty()) {
    policies = all_policies();
  } else {
    for (const auto& name : split_list(o.policies)) policies.push_back(parse_policy(name));
  }
  std::vector<Overrides> specs;
  for (PolicyKind p : policies)
    for (std::uint64_t seed : seeds_from(o, base)) {
      Overrides ov;
      ov.policy = p;
      ov.seed = seed;
      specs.push_back(ov);
    }
  const auto outcomes = run_batch(base, specs, o.threads);
  std::vector<std::string> rows;
  bool failed = false;
  for (const auto& oc : outcomes) {
    rows.push_back(compare_row(oc, base));
    if (!oc.result) {
      failed = true;
      spdlog::error("run {} seed {} failed: {}", policy_name(*oc.spec.policy), *oc.spec.seed, oc.error);
    }
  }
  emit_table(o, "compare.csv", kCompareHeader, rows, out);
  return failed ? kExitRuntime : kExitOk;
}

int cmd_sweep_v(const Options& o, std::ostream& out) {
  Options fixed = o;
  if (fixed.policy.empty()) fixed.policy = "skygs";
  const Scenario base = apply_overrides(load_scenario(o.scenario), overrides_from(fixed));
  const auto vs = parse_list<double>(o.v_list, "--v-list");
  std::vector<Overrides> specs;
  for (double v : vs)
    for (std::uint64_t seed : seeds_from(o, base)) {
      Overrides ov;
      ov.v = v;
      ov.seed = seed;
      specs.push_back(ov);
    }
  const auto outcomes = run_batch(base, specs, o.threads);
  std::vector<std::string> rows;
  bool failed = false;
  for (const auto& oc : outcomes) {
    rows.push_back(sweep_row(oc, base));
    if (!oc.result) {
      failed = true;
      spdlog::error("sweep V={} failed: {}", *oc.spec.v, oc.error);
    }
  }
  emit_table(o, "sweep_v.csv", kSweepHeader, rows, out);
  return failed ? kExitRuntime : kExitOk;
}

void configure_logging() {
  const char* level = std::getenv("SKYGS_LOG");
  spdlog::set_level(level != nullptr ? spdlog::level::from_str(level) : spdlog::level::warn);
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  configure_logging();
  CLI::App app{"Federated ground-station downlink scheduling simulator", "skygs"};
  app.require_subcommand(1);
  Options o;

  auto scenario_opt = [&](CLI::App* sub) {
    sub->add_option("--scenario", o.scenario, "Scenario JSON")->required();
  };
  auto run_opts = [&](CLI::App* sub) {
    sub->add_option("--seed", o.seed, "Override sim.seed");
    sub->add_option("--v", o.v, "Override the Lyapunov weight V");
    sub->add_option("--xi", o.xi, "Override the latency threshold (min per MB)");
    sub->add_option("--contacts", o.contacts, "Contact-plan CSV to use instead of the propagator");
  };

  auto* validate = app.add_subcommand("validate", "Validate a scenario file");
  scenario_opt(validate);

  auto* gen = app.add_subcommand("gen-contacts", "Write the propagated contact plan as CSV");
  scenario_opt(gen);
  gen->add_option("--out", o.out, "Output CSV path (stdout when omitted)");
  gen->add_option("--seed", o.seed, "Override sim.seed");

  auto* simulate = app.add_subcommand("simulate", "Run one simulation");
  scenario_opt(simulate);
  run_opts(simulate);
  simulate->add_option("--policy", o.policy, "skygs, sg, bg, br, bwg or ilp");
  simulate->add_option("--out", o.out, "Directory for run.csv and summary.json");
  simulate->add_flag("--dump-weights", o.dump_weights, "Write per-slot bipartite weights to weights.csv");

  auto* compare = app.add_subcommand("compare", "Run policies x seeds and tabulate summaries");
  scenario_opt(compare);
  run_opts(compare);
  compare->add_option("--policies", o.policies, "Comma-separated policy list (default: all)");
  compare->add_option("--seeds", o.seeds, "Comma-separated seed list");
  compare->add_option("--out", o.out, "Directory for compare.csv");
  compare->add_option("--threads", o.threads, "Concurrent runs (0 = hardware)");

  auto* sweep = app.add_subcommand("sweep-v", "Run the drift-plus-penalty scheduler over a list of V");
  scenario_opt(sweep);
  run_opts(sweep);
  sweep->add_option("--v-list", o.v_list, "Comma-separated V values")->required();
  sweep->add_option("--seeds", o.seeds, "Comma-separated seed list");
  sweep->add_option("--out", o.out, "Directory for sweep_v.csv");
  sweep->add_option("--threads", o.threads, "Concurrent runs (0 = hardware)");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInvalid;
  }

  try {
    if (validate->parsed()) return cmd_validate(o, out);
    if (gen->parsed()) return cmd_gen_contacts(o, out);
    if (simulate->parsed()) return cmd_simulate(o, out);
    if (compare->parsed()) return cmd_compare(o, out);
    if (sweep->parsed()) return cmd_sweep_v(o, out);
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return kExitInvalid;
}

}  // namespace skygs::cli
