#include "cli.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>

#include "CLI11.hpp"
#include "fibra/fibrations.hpp"
#include "fibra/fixtures.hpp"
#include "fibra/io.hpp"
#include "fibra/numerics.hpp"

namespace fibra::cli {

using io::InputError;
using io::json;

std::string sha256_hex(const std::string& data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw std::runtime_error("SHA-256 failed");
  }
  std::string hex;
  char buf[3];
  for (unsigned int i = 0; i < len; ++i) {
    std::snprintf(buf, sizeof buf, "%02x", digest[i]);
    hex += buf;
  }
  return hex;
}

namespace {

// Property verdict plus the per-command payload.
struct Outcome {
  json results;
  int code = kHolds;
};

class Session {
 public:
  json load(const std::string& path) {
    const std::string text = io::read_text_file(path);
    inputs_.push_back(json{{"path", path}, {"sha256", sha256_hex(text)}});
    try {
      return json::parse(text);
    } catch (const json::parse_error& e) {
      throw InputError("'" + path + "' is not valid JSON: " + e.what());
    }
  }

  // Structurally valid network or InputError.
  NetworkPtr network(const std::string& path) {
    NetworkPtr n = network_unchecked(path);
    const auto violations = validate_network(*n);
    if (!violations.empty()) {
      throw InputError("'" + path + "': " + violations.front().code + ": " + violations.front().message);
    }
    return n;
  }

  NetworkPtr network_unchecked(const std::string& path) { return io::network_from_json(load(path)); }

  NetworkMap map(const std::string& path, NetworkPtr domain, NetworkPtr codomain) {
    NetworkMap m = io::map_from_json(load(path), std::move(domain), std::move(codomain));
    const auto violations = check_network_map(m);
    if (!violations.empty()) {
      throw InputError("'" + path + "': " + violations.front().code + ": " + violations.front().message);
    }
    return m;
  }

  VirtualVectorField dynamics(const std::string& path, NetworkPtr n) {
    return io::dynamics_from_json(load(path), std::move(n));
  }

  std::vector<double> state(const std::string& path, const Network& n) {
    return io::state_from_json(load(path), n);
  }

  Partition partition(const std::string& path) { return io::partition_from_json(load(path)); }

  const json& inputs() const { return inputs_; }

 private:
  json inputs_ = json::array();
};

struct Options {
  std::uint64_t seed = 0;
  std::size_t samples = 1000;
  std::optional<double> tol;
  std::string out;

  std::vector<std::string> files;
  std::string coarsest;
  std::vector<std::string> check;
  std::string partition;
  std::string x0;
  double T = 1.0;
  double h = 1e-3;
  std::optional<double> flow_tol;
  std::string fixture_action;
  std::string fixture_name;
  std::string fixture_dir;
};

void require_files(const std::vector<std::string>& files, std::size_t n, const char* usage) {
  if (files.size() != n) throw InputError(std::string("expected arguments: ") + usage);
}

json map_report(const NetworkMap& m) { return io::map_to_json(m); }

Outcome cmd_validate(Session& s, const Options& o) {
  require_files(o.files, 1, "<network.json>");
  const NetworkPtr n = s.network_unchecked(o.files[0]);
  const auto violations = validate_network(*n);
  return {json{{"valid", violations.empty()}, {"violations", io::violations_to_json(violations)}},
          violations.empty() ? kHolds : kFails};
}

Outcome cmd_check_map(Session& s, const Options& o) {
  require_files(o.files, 3, "<domain.json> <codomain.json> <map.json>");
  const NetworkPtr dom = s.network(o.files[0]);
  const NetworkPtr cod = s.network(o.files[1]);
  const NetworkMap m = io::map_from_json(s.load(o.files[2]), dom, cod);
  const auto violations = check_network_map(m);
  return {json{{"valid", violations.empty()}, {"violations", io::violations_to_json(violations)}},
          violations.empty() ? kHolds : kFails};
}

Outcome cmd_check_fibration(Session& s, const Options& o) {
  require_files(o.files, 3, "<domain.json> <codomain.json> <map.json>");
  const NetworkPtr dom = s.network(o.files[0]);
  const NetworkPtr cod = s.network(o.files[1]);
  const FibrationReport r = check_fibration(s.map(o.files[2], dom, cod));
  return {io::fibration_report_to_json(r), r.is_fibration ? kHolds : kFails};
}

Outcome cmd_input_trees(Session& s, const Options& o) {
  require_files(o.files, 1, "<network.json>");
  const NetworkPtr n = s.network(o.files[0]);
  json trees = json::array();
  for (const NodeId& a : n->sorted_nodes()) {
    const InputTree t = input_tree(*n, a);
    json j = io::input_tree_to_json(t);
    // null when the order does not fit in 64 bits
    const auto order = try_aut_order(t);
    j["aut_order"] = order ? json(*order) : json(nullptr);
    trees.push_back(std::move(j));
  }
  return {json{{"trees", std::move(trees)}}, kHolds};
}

Outcome cmd_groupoid(Session& s, const Options& o) {
  require_files(o.files, 1, "<network.json>");
  const NetworkPtr n = s.network(o.files[0]);
  return {io::groupoid_to_json(*n, SymmetryGroupoid(*n)), kHolds};
}

json quotient_report(const Quotient& q) {
  return json{{"blocks", q.partition.blocks()},
              {"quotient", io::network_to_json(*q.network)},
              {"projection", map_report(q.projection)}};
}

Outcome cmd_balanced(Session& s, const Options& o) {
  if (!o.coarsest.empty() == !o.check.empty()) throw InputError("balanced needs exactly one of --coarsest or --check");
  if (!o.coarsest.empty()) return {quotient_report(coarsest_balanced(s.network(o.coarsest))), kHolds};
  if (o.check.size() != 2) throw InputError("--check expects <partition.json> <network.json>");
  const Partition p = s.partition(o.check[0]);
  const NetworkPtr n = s.network(o.check[1]);
  BalanceReport r;
  try {
    r = is_balanced(*n, p);
  } catch (const std::invalid_argument& e) {
    throw InputError(std::string("partition: ") + e.what());
  }
  json results{{"balanced", r.balanced}, {"blocks", p.blocks()}};
  if (r.witness) results["witness"] = {r.witness->first, r.witness->second};
  return {std::move(results), r.balanced ? kHolds : kFails};
}

Outcome cmd_quotient(Session& s, const Options& o) {
  require_files(o.files, 1, "<network.json> [--partition <partition.json>]");
  const NetworkPtr n = s.network(o.files[0]);
  if (o.partition.empty()) return {quotient_report(coarsest_balanced(n)), kHolds};
  const Partition p = s.partition(o.partition);
  BalanceReport r;
  try {
    r = is_balanced(*n, p);
  } catch (const std::invalid_argument& e) {
    throw InputError(std::string("partition: ") + e.what());
  }
  if (!r.balanced) {
    json results{{"balanced", false}, {"blocks", p.blocks()}};
    if (r.witness) results["witness"] = {r.witness->first, r.witness->second};
    return {std::move(results), kFails};
  }
  return {quotient_report(quotient_by(n, p)), kHolds};
}

Outcome cmd_factorize(Session& s, const Options& o) {
  require_files(o.files, 3, "<domain.json> <codomain.json> <map.json>");
  const NetworkPtr dom = s.network(o.files[0]);
  const NetworkPtr cod = s.network(o.files[1]);
  const Factorization f = factorize(s.map(o.files[2], dom, cod));
  return {json{{"image", io::network_to_json(*f.surjection.codomain)},
               {"surjection", map_report(f.surjection)},
               {"injection", map_report(f.injection)}},
          kHolds};
}

Outcome cmd_essential_image(Session& s, const Options& o) {
  require_files(o.files, 3, "<domain.json> <codomain.json> <map.json>");
  const NetworkPtr dom = s.network(o.files[0]);
  const NetworkPtr cod = s.network(o.files[1]);
  const NetworkMap m = s.map(o.files[2], dom, cod);
  const FibrationReport r = check_fibration(m);
  if (!r.is_fibration) return {json{{"is_fibration", false}, {"fibration", io::fibration_report_to_json(r)}}, kFails};
  const std::vector<NodeId> ess = essential_image(m);
  return {json{{"is_fibration", true},
               {"essential_image", ess},
               {"essentially_surjective", ess.size() == cod->sorted_nodes().size()}},
          kHolds};
}

// Loads domain, codomain, map and codomain dynamics; fails with exit 1 when
// the map is not a fibration.
struct Setup {
  NetworkMap map;
  std::optional<VirtualVectorField> dynamics;
  FibrationReport fibration;
};

Setup load_setup(Session& s, const Options& o, const char* usage) {
  require_files(o.files, 4, usage);
  const NetworkPtr dom = s.network(o.files[0]);
  const NetworkPtr cod = s.network(o.files[1]);
  Setup setup{s.map(o.files[2], dom, cod), std::nullopt, {}};
  setup.dynamics = s.dynamics(o.files[3], cod);
  setup.fibration = check_fibration(setup.map);
  return setup;
}

Outcome not_a_fibration(const FibrationReport& r) {
  return {json{{"is_fibration", false}, {"fibration", io::fibration_report_to_json(r)}}, kFails};
}

Outcome cmd_pullback(Session& s, const Options& o) {
  const Setup setup = load_setup(s, o, "<domain.json> <codomain.json> <map.json> <dynamics.json>");
  if (!setup.fibration.is_fibration) return not_a_fibration(setup.fibration);
  return {io::dynamics_to_json(pullback(setup.map, *setup.dynamics)), kHolds};
}

std::string csv_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_csv(std::ostream& os, const StateIndex& index, const Trajectory& traj) {
  os << "t";
  for (const NodeId& a : index.order()) {
    const Slice& sl = index.slice(a);
    for (std::size_t k = 0; k < sl.length; ++k) os << "," << a << "[" << k << "]";
  }
  os << "\n";
  for (std::size_t i = 0; i < traj.states.size(); ++i) {
    os << csv_number(traj.times[i]);
    for (double v : traj.states[i]) os << "," << csv_number(v);
    os << "\n";
  }
}

Outcome cmd_simulate(Session& s, const Options& o, std::ostream& out, bool& report_written) {
  require_files(o.files, 2, "<network.json> <dynamics.json> --x0 <state.json> --T <t> --h <h> [--out traj.csv]");
  if (o.x0.empty()) throw InputError("simulate needs --x0 <state.json>");
  const NetworkPtr n = s.network(o.files[0]);
  const VirtualVectorField w = s.dynamics(o.files[1], n);
  const std::vector<double> x0 = s.state(o.x0, *n);
  const GlobalField field = interconnect(w);
  const Trajectory traj = integrate(field, x0, o.T, o.h);
  if (o.out.empty()) {
    write_csv(out, field.index(), traj);
    report_written = true;
    return {json{}, kHolds};
  }
  std::ofstream f(o.out);
  if (!f) throw InputError("cannot write '" + o.out + "'");
  write_csv(f, field.index(), traj);
  return {json{{"integrator", traj.integrator},
               {"T", o.T},
               {"h", o.h},
               {"steps", traj.states.size() - 1},
               {"final_state", io::state_to_json(field.index(), traj.states.back())},
               {"trajectory", o.out}},
          kHolds};
}

Outcome cmd_verify(Session& s, const Options& o, const std::string& what) {
  if (what == "conjugacy") {
    const Setup setup =
        load_setup(s, o, "<domain.json> <codomain.json> <map.json> <dynamics.json> [--x0 <codomain state>]");
    if (!setup.fibration.is_fibration) return not_a_fibration(setup.fibration);
    const double tol = o.tol.value_or(1e-12);
    const double flow_tol = o.flow_tol.value_or(kDrivingTolerance);
    ConjugacyReport r;
    r.samples = o.samples;
    r.seed = o.seed;
    r.pointwise_max_residual = verify_conjugacy_pointwise(setup.map, *setup.dynamics, o.samples, o.seed);
    bool holds = r.pointwise_max_residual <= tol;
    json results{{"pointwise_max_residual", r.pointwise_max_residual},
                 {"samples", r.samples},
                 {"seed", r.seed},
                 {"tolerance", tol}};
    if (!o.x0.empty()) {
      const std::vector<double> x0 = s.state(o.x0, *setup.map.codomain);
      r.T = o.T;
      r.h = o.h;
      r.flow_max_deviation = verify_conjugacy_flow(setup.map, *setup.dynamics, x0, o.T, o.h);
      holds = holds && r.flow_max_deviation <= flow_tol;
      results["flow_max_deviation"] = r.flow_max_deviation;
      results["flow_tolerance"] = flow_tol;
      results["T"] = r.T;
      results["h"] = r.h;
    }
    results["holds"] = holds;
    return {std::move(results), holds ? kHolds : kFails};
  }
  if (what == "polydiagonal") {
    const Setup setup =
        load_setup(s, o, "<domain.json> <codomain.json> <map.json> <dynamics.json> --x0 <domain state>");
    if (!setup.fibration.is_fibration) return not_a_fibration(setup.fibration);
    if (!setup.fibration.surjective_on_nodes) throw InputError("polydiagonal needs a surjective fibration");
    if (o.x0.empty()) throw InputError("polydiagonal needs --x0 <state.json>");
    const double tol = o.tol.value_or(kSyncTolerance);
    const std::vector<double> x0 = s.state(o.x0, *setup.map.domain);
    double worst = 0.0;
    try {
      worst = verify_polydiagonal_invariance(setup.map, *setup.dynamics, x0, o.T, o.h, tol);
    } catch (const IntegrationError&) {
      throw;
    } catch (const std::invalid_argument& e) {
      throw InputError(e.what());
    }
    const bool holds = worst <= tol;
    return {json{{"max_violation", worst}, {"tolerance", tol}, {"T", o.T}, {"h", o.h}, {"holds", holds}},
            holds ? kHolds : kFails};
  }
  if (what == "driving") {
    const Setup setup = load_setup(s, o, "<domain.json> <codomain.json> <map.json> <dynamics.json>");
    const double tol = o.tol.value_or(kDrivingTolerance);
    const DrivingReport r = verify_driving_decomposition(setup.map, *setup.dynamics, o.samples, o.seed,
                                                         kFiniteDifferenceStep, tol);
    return {json{{"injective_fibration", r.injective_fibration},
                 {"no_feedback", r.no_feedback},
                 {"fd_residual", r.fd_residual},
                 {"fd_step", kFiniteDifferenceStep},
                 {"tolerance", tol},
                 {"samples", o.samples},
                 {"seed", o.seed},
                 {"holds", r.holds}},
            r.holds ? kHolds : kFails};
  }
  throw InputError("verify expects conjugacy, polydiagonal or driving");
}

json bundle_json(const fixtures::Bundle& b) {
  json networks = json::object();
  for (const auto& [name, n] : b.networks) networks[name] = io::network_to_json(*n);
  json maps = json::object();
  for (const auto& [name, m] : b.maps) {
    maps[name] = json{{"domain", b.map_ends.at(name).first},
                      {"codomain", b.map_ends.at(name).second},
                      {"map", map_report(m)},
                      {"fibration", b.fibrations.count(name) != 0}};
  }
  json dynamics = json::object();
  for (const auto& [name, w] : b.dynamics) {
    dynamics[name] = json{{"network", b.dynamics_network.at(name)}, {"dynamics", io::dynamics_to_json(w)}};
  }
  return json{{"name", b.name},
              {"description", b.description},
              {"networks", std::move(networks)},
              {"maps", std::move(maps)},
              {"dynamics", std::move(dynamics)}};
}

void write_json_file(const std::filesystem::path& path, const json& j) {
  std::ofstream f(path);
  if (!f) throw InputError("cannot write '" + path.string() + "'");
  f << j.dump(2) << "\n";
}

Outcome cmd_fixtures(const Options& o) {
  if (o.fixture_action == "list") {
    json list = json::array();
    for (const auto& b : fixtures::catalog()) list.push_back(json{{"name", b.name}, {"description", b.description}});
    return {json{{"fixtures", std::move(list)}}, kHolds};
  }
  if (o.fixture_name.empty()) throw InputError("fixtures " + o.fixture_action + " needs a fixture name");
  const fixtures::Bundle* b = nullptr;
  try {
    b = &fixtures::bundle(o.fixture_name);
  } catch (const std::out_of_range& e) {
    throw InputError(e.what());
  }
  if (o.fixture_action == "show") return {bundle_json(*b), kHolds};
  if (o.fixture_action == "export") {
    if (o.fixture_dir.empty()) throw InputError("fixtures export needs a target directory");
    const std::filesystem::path dir(o.fixture_dir);
    std::filesystem::create_directories(dir);
    json written = json::array();
    for (const auto& [name, n] : b->networks) {
      write_json_file(dir / (name + ".network.json"), io::network_to_json(*n));
      written.push_back(name + ".network.json");
    }
    for (const auto& [name, m] : b->maps) {
      write_json_file(dir / (name + ".map.json"), map_report(m));
      written.push_back(name + ".map.json");
    }
    for (const auto& [name, w] : b->dynamics) {
      write_json_file(dir / (name + ".dynamics.json"), io::dynamics_to_json(w));
      written.push_back(name + ".dynamics.json");
    }
    return {json{{"directory", dir.string()}, {"files", std::move(written)}}, kHolds};
  }
  throw InputError("fixtures expects list, show or export");
}

std::uint64_t default_seed() {
  const char* env = std::getenv("FIBRA_SEED");
  if (!env) return 0;
  std::uint64_t v = 0;
  std::istringstream in(env);
  if (!(in >> v) || !in.eof()) throw InputError(std::string("FIBRA_SEED is not an unsigned integer: ") + env);
  return v;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Dynamical systems on networks of manifolds: fibrations, quotients and pullbacks", "fibra"};
  app.require_subcommand(1);
  // "-h" would clash with the --h step option.
  app.set_help_flag("--help", "Print this help message and exit");
  app.set_version_flag("--version", kVersion);
  auto* seed = app.add_option("--seed", o.seed, "PRNG seed (default 0, or FIBRA_SEED)");
  app.add_option("--samples", o.samples, "Number of random samples")->check(CLI::PositiveNumber);
  app.add_option("--tol", o.tol, "Tolerance (per-command default)");
  app.add_option("--out", o.out, "Write the report (simulate: the CSV trajectory) to this path");

  auto files = [&](CLI::App* sub, const char* what) { sub->add_option("files", o.files, what); };

  auto* validate = app.add_subcommand("validate", "Check a network file for structural problems");
  files(validate, "<network.json>");
  auto* check_map = app.add_subcommand("check-map", "Check that a map is a phase-compatible homomorphism");
  files(check_map, "<domain.json> <codomain.json> <map.json>");
  auto* check_fib = app.add_subcommand("check-fibration", "Check the unique lifting property of a map");
  files(check_fib, "<domain.json> <codomain.json> <map.json>");
  auto* trees = app.add_subcommand("input-trees", "Input trees and automorphism group orders");
  files(trees, "<network.json>");
  auto* groupoid = app.add_subcommand("groupoid", "Symmetry groupoid classes and witnesses");
  files(groupoid, "<network.json>");
  auto* balanced = app.add_subcommand("balanced", "Coarsest balanced partition, or check a partition");
  balanced->add_option("--coarsest", o.coarsest, "<network.json>");
  balanced->add_option("--check", o.check, "<partition.json> <network.json>")->expected(2);
  auto* quotient = app.add_subcommand("quotient", "Quotient network and projection fibration");
  files(quotient, "<network.json>");
  quotient->add_option("--partition", o.partition, "Balanced partition (default: coarsest)");
  auto* fact = app.add_subcommand("factorize", "Factor a map as a surjection onto its image and an inclusion");
  files(fact, "<domain.json> <codomain.json> <map.json>");
  auto* ess = app.add_subcommand("essential-image", "Essential image of a fibration");
  files(ess, "<domain.json> <codomain.json> <map.json>");
  auto* pull = app.add_subcommand("pullback", "Pull codomain dynamics back along a fibration");
  files(pull, "<domain.json> <codomain.json> <map.json> <dynamics.json>");
  auto* sim = app.add_subcommand("simulate", "Integrate a network system with fixed-step RK4");
  files(sim, "<network.json> <dynamics.json>");
  sim->add_option("--x0", o.x0, "Initial state")->required();
  sim->add_option("--T", o.T, "Horizon")->required();
  sim->add_option("--h", o.h, "Step size")->required();
  auto* verify = app.add_subcommand("verify", "Numerical certificates for a fibration and codomain dynamics");
  std::string verify_what;
  verify->add_option("property", verify_what, "conjugacy | polydiagonal | driving")
      ->required()
      ->check(CLI::IsMember({"conjugacy", "polydiagonal", "driving"}));
  files(verify, "<domain.json> <codomain.json> <map.json> <dynamics.json>");
  verify->add_option("--x0", o.x0, "Initial state (conjugacy: codomain; polydiagonal: domain)");
  verify->add_option("--T", o.T, "Horizon");
  verify->add_option("--h", o.h, "Step size");
  verify->add_option("--flow-tol", o.flow_tol, "Flow deviation tolerance (conjugacy)");
  auto* fx = app.add_subcommand("fixtures", "Bundled example networks, maps and dynamics");
  fx->add_option("action", o.fixture_action, "list | show | export")
      ->required()
      ->check(CLI::IsMember({"list", "show", "export"}));
  fx->add_option("name", o.fixture_name, "Fixture name");
  fx->add_option("dir", o.fixture_dir, "Export directory");

  for (CLI::App* sub : app.get_subcommands({})) sub->fallthrough();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kHolds : kMalformed;
  }

  try {
    if (seed->count() == 0) o.seed = default_seed();
    Session session;
    Outcome outcome;
    bool report_written = false;
    std::string command;
    if (app.got_subcommand(validate)) {
      command = "validate";
      outcome = cmd_validate(session, o);
    } else if (app.got_subcommand(check_map)) {
      command = "check-map";
      outcome = cmd_check_map(session, o);
    } else if (app.got_subcommand(check_fib)) {
      command = "check-fibration";
      outcome = cmd_check_fibration(session, o);
    } else if (app.got_subcommand(trees)) {
      command = "input-trees";
      outcome = cmd_input_trees(session, o);
    } else if (app.got_subcommand(groupoid)) {
      command = "groupoid";
      outcome = cmd_groupoid(session, o);
    } else if (app.got_subcommand(balanced)) {
      command = "balanced";
      outcome = cmd_balanced(session, o);
    } else if (app.got_subcommand(quotient)) {
      command = "quotient";
      outcome = cmd_quotient(session, o);
    } else if (app.got_subcommand(fact)) {
      command = "factorize";
      outcome = cmd_factorize(session, o);
    } else if (app.got_subcommand(ess)) {
      command = "essential-image";
      outcome = cmd_essential_image(session, o);
    } else if (app.got_subcommand(pull)) {
      command = "pullback";
      outcome = cmd_pullback(session, o);
    } else if (app.got_subcommand(sim)) {
      command = "simulate";
      outcome = cmd_simulate(session, o, out, report_written);
    } else if (app.got_subcommand(verify)) {
      command = "verify " + verify_what;
      outcome = cmd_verify(session, o, verify_what);
    } else {
      command = "fixtures " + o.fixture_action;
      outcome = cmd_fixtures(o);
    }
    if (report_written) return outcome.code;

    const json report{{"command", command},
                      {"inputs", session.inputs()},
                      {"seed", o.seed},
                      {"results", std::move(outcome.results)},
                      {"version", kVersion}};
    const std::string text = report.dump(2) + "\n";
    if (!o.out.empty() && command != "simulate") {
      std::ofstream f(o.out);
      if (!f) throw InputError("cannot write '" + o.out + "'");
      f << text;
    } else {
      out << text;
    }
    return outcome.code;
  } catch (const InputError& e) {
    err << "fibra: " << e.what() << "\n";
    return kMalformed;
  } catch (const expr::EvalError& e) {
    err << "fibra: evaluation error: " << e.what() << "\n";
    return kMalformed;
  } catch (const IntegrationError& e) {
    err << "fibra: integration failed: " << e.what() << "\n";
    return kFails;
  } catch (const std::exception& e) {
    err << "fibra: " << e.what() << "\n";
    return kMalformed;
  }
}

}  // namespace fibra::cli
