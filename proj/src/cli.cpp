#include "ctmap/cli.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "ctmap/cannon_thurston.hpp"
#include "ctmap/digest.hpp"
#include "ctmap/errors.hpp"
#include "ctmap/group_examples.hpp"
#include "ctmap/hyperbolic_ops.hpp"
#include "ctmap/ladder.hpp"
#include "ctmap/metric_graph.hpp"
#include "ctmap/spaces_io.hpp"
#include "ctmap/tree_of_spaces.hpp"

namespace ctmap {

namespace {

struct Options {
  std::string command;
  std::string graph_file;
  std::string model;
  Distance radius = 3;
  std::string instance;
  std::uint64_t seed = 0;
  std::vector<std::string> budgets;
  std::string out_dir;
  std::string mode = "canonical";
  std::size_t cap = 2000;
  std::uint64_t samples = 0;
  std::optional<Vertex> from;
  std::optional<Vertex> to;
  std::vector<Vertex> set;
  std::optional<Distance> length;
  std::vector<Distance> N_values;
  Distance min_length = 4;
  std::string subgroup = "fiber";
  std::vector<Distance> radii{4, 6, 8, 10};
  std::vector<std::int64_t> twist;
};

std::string clean(std::string text) {
  for (char& c : text) {
    if (c == ',' || c == '\n') c = ';';
  }
  return text;
}

std::string yes_no(bool pass) { return pass ? "pass" : "fail"; }

std::string file_digest(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::ParseError, "cannot open '" + path + "'");
  std::ostringstream text;
  text << in.rdbuf();
  return digest_hex(text.str());
}

nlohmann::json config_json(const Options& o) {
  nlohmann::json j;
  j["command"] = o.command;
  j["graph"] = o.graph_file.empty() ? "" : file_digest(o.graph_file);
  j["instance"] = o.instance.empty() ? "" : file_digest(o.instance);
  j["model"] = o.model;
  j["radius"] = o.radius;
  j["seed"] = o.seed;
  j["budgets"] = o.budgets;
  j["mode"] = o.mode;
  j["cap"] = o.cap;
  j["samples"] = o.samples;
  j["from"] = o.from ? nlohmann::json(*o.from) : nlohmann::json();
  j["to"] = o.to ? nlohmann::json(*o.to) : nlohmann::json();
  j["set"] = o.set;
  j["length"] = o.length ? nlohmann::json(*o.length) : nlohmann::json();
  j["N"] = o.N_values;
  j["min_length"] = o.min_length;
  j["subgroup"] = o.subgroup;
  j["radii"] = o.radii;
  j["a"] = o.twist;
  return j;
}

std::map<std::string, Rational> parse_budgets(const std::vector<std::string>& items) {
  std::map<std::string, Rational> out;
  for (const auto& item : items) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) fail(ErrorKind::ParseError, "budget '" + item + "' is not name=value");
    const std::string value = item.substr(eq + 1);
    const auto slash = value.find('/');
    try {
      out[item.substr(0, eq)] = slash == std::string::npos
                                    ? Rational(std::stoll(value))
                                    : Rational(std::stoll(value.substr(0, slash)), std::stoll(value.substr(slash + 1)));
    } catch (const std::logic_error&) {
      fail(ErrorKind::ParseError, "budget value '" + value + "' is not a rational");
    }
  }
  return out;
}

GeodesicMode parse_mode(const std::string& mode) {
  if (mode == "canonical") return GeodesicMode::Canonical;
  if (mode == "exhaustive") return GeodesicMode::Exhaustive;
  fail(ErrorKind::ParseError, "mode must be canonical or exhaustive");
}

MetricGraph load_graph(const Options& o) {
  if (!o.graph_file.empty()) return build_graph(parse_edge_list_file(o.graph_file));
  if (!o.model.empty()) return cayley_ball(GroupPresentationModel::parse(o.model), o.radius);
  fail(ErrorKind::ParseError, "give --graph <edge list> or --model <spec> --radius <R>");
}

struct Result {
  int status = 0;
  std::string report;
};

std::string audit_row(const std::string& audit, const std::string& digest, const std::string& measured,
                      const std::string& budget, bool pass) {
  return audit + "," + digest + "," + measured + "," + budget + "," + yes_no(pass) + "\n";
}

std::pair<std::int64_t, std::int64_t> ladder_constants(const Instance& inst, const std::map<std::string, Rational>& budgets) {
  std::optional<std::int64_t> C = inst.ladder_C;
  std::optional<std::int64_t> D = inst.ladder_D;
  if (budgets.contains("C")) C = budgets.at("C").num();
  if (budgets.contains("D")) D = budgets.at("D").num();
  if (!C || !D) {
    const LadderConstants k = calibrate_ladder_constants(inst.tos);
    if (!C) C = k.C;
    if (!D) D = k.D;
  }
  return {*C, *D};
}

Result cmd_delta(const Options& o) {
  const MetricGraph g = load_graph(o);
  FourPointOptions fp;
  fp.vertex_cap = o.cap;
  fp.sample_count = o.samples;
  fp.seed = o.seed;
  const auto r = delta_four_point(g, fp);
  std::ostringstream s;
  s << "quantity,value,witness\n";
  s << "vertices," << g.vertex_count() << ",\n";
  s << "delta," << r.delta_four_point.str() << "," << r.witness_quadruple[0] << " " << r.witness_quadruple[1] << " "
    << r.witness_quadruple[2] << " " << r.witness_quadruple[3] << "\n";
  s << "quadruples," << r.quadruples_scanned << "," << (r.sampled ? "sampled" : "exhaustive") << "\n";
  return {0, s.str()};
}

Result cmd_project(const Options& o) {
  const MetricGraph g = load_graph(o);
  if (!o.from || !o.to) fail(ErrorKind::ParseError, "project needs --from and --to");
  const auto budgets = parse_budgets(o.budgets);
  const auto mu = geodesic(g, *o.from, *o.to);
  const HalfInt delta = delta_four_point(g, FourPointOptions{o.cap, o.samples, o.seed, 0}).delta_four_point;
  auto report = projection_lipschitz_audit(g, mu, delta);
  if (budgets.contains("lipschitz")) {
    report.budget = budgets.at("lipschitz");
    report.pass = Rational(report.max_displacement) <= report.budget;
  }
  std::ostringstream s;
  s << "audit,input_digest,measured,budget,pass\n";
  s << audit_row("lipschitz", digest_graph(g), std::to_string(report.max_displacement), report.budget.str(), report.pass);
  return {report.pass ? 0 : 1, s.str()};
}

Result cmd_qconvex(const Options& o) {
  const MetricGraph g = load_graph(o);
  const Distance k = quasiconvexity_constant(g, o.set, parse_mode(o.mode));
  std::ostringstream s;
  s << "quantity,value,witness\n";
  s << "qconvex," << k << "," << o.mode << "\n";
  return {0, s.str()};
}

Result cmd_assemble(const Options& o) {
  const Instance inst = load_instance(o.instance);
  const TotalSpace total = assemble_total_space(inst.tos);
  std::ostringstream s;
  s << "quantity,value,witness\n";
  s << "tree_vertices," << inst.tos.tree_vertex_count() << "," << inst.digest << "\n";
  s << "total_vertices," << total.graph().vertex_count() << "," << digest_graph(total.graph()) << "\n";
  s << "total_edges," << total.graph().edge_count() << ",\n";
  return {0, s.str()};
}

Result cmd_verify(const Options& o) {
  const Instance inst = load_instance(o.instance);
  const TotalSpace total = assemble_total_space(inst.tos);
  const FamilyReport fam = verify_family(inst.tos, total, FourPointOptions{o.cap, o.samples, o.seed, 0});
  std::ostringstream s;
  s << "audit,input_digest,measured,budget,pass\n";
  for (const auto& row : fam.deltas) {
    s << audit_row("delta:" + row.name, inst.digest, row.delta.str(), inst.tos.params().delta.str(), row.pass);
  }
  for (const auto& row : fam.qi.rows) {
    s << audit_row("qi:e" + std::to_string(row.edge) + (row.hi_side ? ":hi" : ":lo"), inst.digest,
                   "K=" + row.best.K.str() + ";eps=" + row.best.epsilon.str() + (row.best.saturated ? ";saturated" : ""),
                   "K=" + inst.tos.params().K.str() + ";eps=" + inst.tos.params().epsilon.str(), row.pass);
  }
  std::vector<Distance> Ms;
  for (Distance M = 1; M <= 8; ++M) Ms.push_back(M);
  bool monotone = true;
  Distance previous = 0;
  for (const auto& row : verify_uniform_properness(inst.tos, total, Ms)) {
    monotone = monotone && row.N >= previous;
    previous = row.N;
    s << audit_row("properness:M=" + std::to_string(row.M), inst.digest, std::to_string(row.N), "nondecreasing", monotone);
  }
  return {fam.pass && monotone ? 0 : 1, s.str()};
}

Result cmd_ladder(const Options& o) {
  const Instance inst = load_instance(o.instance);
  const TotalSpace total = assemble_total_space(inst.tos);
  const auto budgets = parse_budgets(o.budgets);
  const auto [C, D] = ladder_constants(inst, budgets);
  const MetricGraph& root_space = inst.tos.vertex_space(inst.tos.root());
  GeodesicSegment lambda;
  if (o.from && o.to) {
    lambda = geodesic(root_space, *o.from, *o.to);
  } else {
    const Distance L = o.length.value_or(root_space.diameter());
    const std::vector<Distance> lengths{L};
    auto family = length_family(inst.tos, lengths);
    if (family.empty()) fail(ErrorKind::InvalidArgument, "no root-space pair at distance " + std::to_string(L));
    lambda = family.front();
  }
  const Ladder ladder = build_ladder(inst.tos, total, lambda, C, D);
  const Retraction pi(inst.tos, total, ladder);
  std::size_t unfixed = 0;
  for (const Vertex b : ladder_vertices(total, ladder)) unfixed += pi(b) != b ? 1 : 0;
  const auto lip = audit_retraction_lipschitz(inst.tos, total, ladder);
  const Distance Cprime = audit_quasiconvexity(inst.tos, total, ladder, parse_mode(o.mode));
  const auto vert = audit_vertical_bound(inst.tos, total, ladder);

  std::ostringstream s;
  s << "tree_vertex,generation,parent,p,q,segment\n";
  for (const auto& e : ladder.entries) {
    s << e.tree_vertex << "," << e.generation << "," << (e.parent ? std::to_string(*e.parent) : "-") << ","
      << (e.parent ? std::to_string(e.p) : "-") << "," << (e.parent ? std::to_string(e.q) : "-") << ",";
    for (std::size_t i = 0; i < e.segment.vertices.size(); ++i) s << (i ? " " : "") << e.segment.vertices[i];
    s << "\n";
  }
  s << "audit,input_digest,measured,budget,pass\n";
  bool pass = unfixed == 0;
  s << audit_row("retraction_fixes_ladder", inst.digest, std::to_string(unfixed), "0", unfixed == 0);
  auto bounded = [&](const std::string& name, const Rational& measured) {
    if (!budgets.contains(name)) return std::pair<std::string, bool>{"-", true};
    return std::pair<std::string, bool>{budgets.at(name).str(), measured <= budgets.at(name)};
  };
  const auto [c0_budget, c0_pass] = bounded("C0", Rational(lip.lipschitz_C0));
  s << audit_row("C0", inst.digest, std::to_string(lip.lipschitz_C0), c0_budget, c0_pass);
  const auto [cp_budget, cp_pass] = bounded("Cprime", Rational(Cprime));
  s << audit_row("Cprime:" + o.mode, inst.digest, std::to_string(Cprime), cp_budget, cp_pass);
  const auto [a_budget, a_pass] = bounded("A", vert.vertical_A);
  s << audit_row(vert.ladder_trivial ? "A:trivial" : "A", inst.digest, vert.vertical_A.str(), a_budget, a_pass);
  s << audit_row("C", inst.digest, std::to_string(C), "-", true);
  s << audit_row("D", inst.digest, std::to_string(D), "-", true);
  pass = pass && c0_pass && cp_pass && a_pass;
  return {pass ? 0 : 1, s.str()};
}

Result cmd_mn_profile(const Options& o) {
  const Instance inst = load_instance(o.instance);
  const TotalSpace total = assemble_total_space(inst.tos);
  const auto budgets = parse_budgets(o.budgets);
  const auto [C, D] = ladder_constants(inst, budgets);
  std::vector<Distance> Ns = o.N_values;
  if (Ns.empty()) {
    for (Distance N = 0; N <= 10; ++N) Ns.push_back(N);
  }
  const auto family = tangent_family(inst.tos, inst.basepoint, Ns, o.min_length);
  const GeodesicMode mode = parse_mode(o.mode);
  const TheoremCheck check = theorem_check(inst.tos, total, inst.basepoint, family, C, D, mode);
  std::ostringstream s;
  s << "N,f,M,mode,lambda_digest\n";
  for (const auto& row : check.profile.rows) {
    s << row.N << "," << row.f << "," << row.M << "," << o.mode << "," << row.lambda_digest << "\n";
  }
  const bool pass = check.report.pass && check.report.monotone;
  std::string witness = "A=" + check.A.str() + ";Cprime=" + std::to_string(check.Cprime);
  if (!check.report.detail.empty()) witness += ";" + clean(check.report.detail);
  if (!check.report.monotone) witness += ";M not monotone";
  s << "criterion," << yes_no(pass) << "," << witness << "\n";
  return {pass ? 0 : 1, s.str()};
}

Result cmd_distortion(const Options& o) {
  if (o.model.empty()) fail(ErrorKind::ParseError, "distortion needs --model");
  const auto table = distortion_profile(GroupPresentationModel::parse(o.model), SubgroupSpec::parse(o.subgroup), o.radii);
  std::ostringstream s;
  s << "R,diam,disto_num,disto_den\n";
  for (const auto& row : table.rows) {
    s << row.radius << "," << row.intrinsic_diameter << "," << row.disto.num() << "," << row.disto.den() << "\n";
  }
  return {0, s.str()};
}

Result cmd_twist(const Options& o) {
  const auto r = twist_bounds_check(o.twist);
  std::ostringstream s;
  s << "lower,proxy,upper,pass\n";
  s << r.lower << "," << r.proxy << "," << r.upper << "," << yes_no(r.pass) << "\n";
  return {r.pass ? 0 : 1, s.str()};
}

void write_outputs(const Options& o, const std::string& config_digest, const std::string& report, int status) {
  if (o.out_dir.empty()) return;
  const std::filesystem::path dir(o.out_dir);
  std::filesystem::create_directories(dir);
  const std::string report_name = o.command + ".csv";
  {
    std::ofstream f(dir / report_name, std::ios::binary);
    f << report;
  }
  nlohmann::json manifest;
  manifest["config_digest"] = config_digest;
  manifest["config"] = config_json(o);
  manifest["exit_status"] = status;
  manifest["reports"] = {{{"file", report_name}, {"digest", digest_hex(report)}}};
  std::ofstream f(dir / "manifest.json", std::ios::binary);
  f << manifest.dump(2) << "\n";
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out) {
  Options o;
  CLI::App app{"Cannon-Thurston ladder audits on finite graph models", "ctmap"};
  app.require_subcommand(1);
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--seed", o.seed, "sampling seed");
    sub->add_option("--budget", o.budgets, "audit budget override name=value")->take_all();
    sub->add_option("--out", o.out_dir, "directory for report files and manifest");
    sub->add_option("--mode", o.mode, "canonical or exhaustive geodesics");
    sub->add_option("--cap", o.cap, "vertex cap for exhaustive quadruple scans");
  };
  auto add_graph = [&](CLI::App* sub) {
    sub->add_option("--graph", o.graph_file, "edge-list file");
    sub->add_option("--model", o.model, "free:k, fbc:k:<automorphism>, tiling:p:q");
    sub->add_option("--radius", o.radius, "ball radius for --model");
  };
  auto add_instance = [&](CLI::App* sub) {
    sub->add_option("instance", o.instance, "tree-of-spaces JSON file")->required();
  };

  auto* delta = app.add_subcommand("delta", "four-point hyperbolicity constant");
  add_common(delta);
  add_graph(delta);
  delta->add_option("--samples", o.samples, "sample this many quadruples instead of scanning");

  auto* project = app.add_subcommand("project", "projection Lipschitz audit onto geodesic(from, to)");
  add_common(project);
  add_graph(project);
  project->add_option("--from", o.from)->required();
  project->add_option("--to", o.to)->required();

  auto* qconvex = app.add_subcommand("qconvex", "quasiconvexity constant of a vertex set");
  add_common(qconvex);
  add_graph(qconvex);
  qconvex->add_option("--set", o.set, "vertex ids")->delimiter(',')->required();

  auto* assemble = app.add_subcommand("assemble", "assemble the total space of an instance");
  add_common(assemble);
  add_instance(assemble);

  auto* verify = app.add_subcommand("verify", "check declared delta, K, epsilon and properness");
  add_common(verify);
  add_instance(verify);

  auto* ladder = app.add_subcommand("ladder", "build the ladder over a root-space geodesic and audit it");
  add_common(ladder);
  add_instance(ladder);
  ladder->add_option("--from", o.from);
  ladder->add_option("--to", o.to);
  ladder->add_option("--length", o.length, "use the first pair at this distance");

  auto* mn = app.add_subcommand("mn-profile", "M(N) profile and lower-bound criterion");
  add_common(mn);
  add_instance(mn);
  mn->add_option("--N", o.N_values, "N values")->delimiter(',');
  mn->add_option("--min-length", o.min_length, "minimum length of each tangent geodesic");

  auto* dist = app.add_subcommand("distortion", "subgroup distortion table");
  add_common(dist);
  dist->add_option("--model", o.model)->required();
  dist->add_option("--subgroup", o.subgroup, "fiber, whole or factor:<letters>");
  dist->add_option("--radii", o.radii)->delimiter(',');

  auto* twist = app.add_subcommand("twist", "twist product bounds");
  add_common(twist);
  twist->add_option("--a", o.twist, "coefficients")->delimiter(',');

  std::vector<const char*> argv{"ctmap"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& ex) {
    out << "error,ParseError," << clean(ex.what()) << "\n";
    return 2;
  }
  for (auto* sub : app.get_subcommands()) o.command = sub->get_name();

  try {
    const std::string config_digest = digest_hex(config_json(o).dump());
    Result result;
    if (o.command == "delta") result = cmd_delta(o);
    else if (o.command == "project") result = cmd_project(o);
    else if (o.command == "qconvex") result = cmd_qconvex(o);
    else if (o.command == "assemble") result = cmd_assemble(o);
    else if (o.command == "verify") result = cmd_verify(o);
    else if (o.command == "ladder") result = cmd_ladder(o);
    else if (o.command == "mn-profile") result = cmd_mn_profile(o);
    else if (o.command == "distortion") result = cmd_distortion(o);
    else result = cmd_twist(o);
    const std::string report = "# config " + config_digest + "\n" + result.report;
    out << report;
    write_outputs(o, config_digest, report, result.status);
    return result.status;
  } catch (const Error& ex) {
    out << "error," << to_string(ex.kind()) << "," << clean(ex.what()) << "\n";
    return 2;
  } catch (const std::exception& ex) {
    out << "error,InvalidArgument," << clean(ex.what()) << "\n";
    return 2;
  }
}

}  // namespace ctmap
