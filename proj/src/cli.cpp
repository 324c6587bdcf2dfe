#include "topobench/cli.hpp"

#include <fstream>
#include <map>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "topobench/benchmark.hpp"
#include "topobench/detail/format.hpp"
#include "topobench/rng.hpp"
#include "topobench/topologies.hpp"

namespace topobench::cli {

namespace {

using Json = nlohmann::ordered_json;

const std::map<std::string, Command> kCommands{
    {"gen", Command::gen},         {"tm", Command::tm},
    {"throughput", Command::throughput}, {"cut", Command::cut},
    {"bench", Command::bench},     {"ordering", Command::ordering},
    {"cutflow", Command::cutflow}, {"separation", Command::separation},
};

TopoSpec topo_spec(const RunConfig& config, const std::string& text) {
  TopoSpec spec = parse_topo_spec(text);
  spec.seed = config.seed;
  return spec;
}

// The network of single-topology commands: --in FILE wins over --topo.
Network load_network(const RunConfig& config) {
  if (!config.in_file.empty()) {
    TopoSpec spec;
    spec.family = Family::imported;
    spec.path = config.in_file;
    return build_topology(spec, config.servers_per_switch);
  }
  if (config.topo.empty()) throw Error(Errc::ParseError, "--topo or --in is required");
  if (config.topo.size() > 1) throw Error(Errc::ParseError, "this command takes a single --topo");
  return build_topology(topo_spec(config, config.topo.front()), config.servers_per_switch);
}

TopoSpec single_topo(const RunConfig& config) {
  if (config.topo.size() != 1) throw Error(Errc::ParseError, "exactly one --topo is required");
  return topo_spec(config, config.topo.front());
}

SolveOptions solve_options(const RunConfig& config) {
  return {config.solver, config.epsilon, config.servers_per_switch};
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream file(path, std::ios::binary);
  if (!file || !(file << text)) throw Error(Errc::ParseError, "cannot write '" + path + "'");
}

int run_gen(const RunConfig& config, std::ostream& out) {
  const Network net = load_network(config);
  const std::string text = export_edge_list(net);
  if (config.out_file.empty()) {
    out << text;
    return 0;
  }
  write_file(config.out_file, text);
  Json j;
  j["switches"] = net.switch_count();
  j["links"] = net.links().size();
  j["servers"] = net.total_servers();
  j["file"] = config.out_file;
  out << j.dump() << '\n';
  return 0;
}

int run_tm(const RunConfig& config, std::ostream& out) {
  const Network net = load_network(config);
  const TrafficMatrix tm = build_tm(net, parse_tm_spec(config.tm), config.seed);
  const std::string text = export_tm(tm);
  if (config.out_file.empty()) {
    out << text;
    return 0;
  }
  write_file(config.out_file, text);
  Json j;
  j["tm"] = parse_tm_spec(config.tm).to_string();
  j["demands"] = tm.size();
  j["total"] = tm.total();
  j["file"] = config.out_file;
  out << j.dump() << '\n';
  return 0;
}

int run_throughput(const RunConfig& config, std::ostream& out) {
  const Network net = load_network(config);
  const TrafficMatrix tm = build_tm(net, parse_tm_spec(config.tm), config.seed);
  FlowSolution sol = solve(net, tm, config.solver, config.epsilon);
  if (!config.timing) sol.solve_time_ms = 0;
  if (!config.out_file.empty()) write_file(config.out_file, flows_csv(net, sol));
  if (config.output == OutputFormat::csv) {
    out << "t,solver,epsilon,solve_time_ms\n"
        << detail::format_double(sol.t) << ',' << solver_name(sol.solver) << ','
        << detail::format_double(sol.epsilon) << ',' << detail::format_double(sol.solve_time_ms) << '\n';
  } else {
    out << solution_json(sol) << '\n';
  }
  return 0;
}

int run_cut(const RunConfig& config, std::ostream& out) {
  const Network net = load_network(config);
  std::optional<TrafficMatrix> tm;
  if (!config.tm.empty() && config.tm != "none") tm = build_tm(net, parse_tm_spec(config.tm), config.seed);
  const TrafficMatrix* demand = tm ? &*tm : nullptr;
  std::vector<CutResult> results;
  CutResult best;
  if (config.heuristic == "all") {
    const BestCut all = best_cut(net, demand, config.brute_cap, config.seed);
    best = all.best;
    results = all.per_heuristic;
  } else {
    const auto h = parse_heuristic(config.heuristic);
    if (!h) throw Error(Errc::ParseError, "unknown heuristic '" + config.heuristic + "'");
    switch (*h) {
      case Heuristic::brute: best = brute_force_cuts(net, demand, config.brute_cap, config.seed); break;
      case Heuristic::one_node: best = one_node_cuts(net, demand); break;
      case Heuristic::two_node: best = two_node_cuts(net, demand); break;
      case Heuristic::expanding: best = expanding_cuts(net, demand); break;
      case Heuristic::eigenvector: best = eigenvector_sweep(net, demand); break;
    }
    results = {best};
  }
  if (config.output == OutputFormat::csv) {
    out << "heuristic,crossing_capacity,uniform_sparsity,demand_sparsity,side\n";
    for (const CutResult& r : results) {
      std::string side;
      for (NodeId u : r.cut.side) side += (side.empty() ? "" : " ") + std::to_string(u);
      out << heuristic_name(r.heuristic) << ',' << detail::format_double(r.crossing_capacity) << ','
          << detail::format_double(r.uniform_sparsity) << ','
          << (r.demand_sparsity ? detail::format_double(*r.demand_sparsity) : "") << ',' << side << '\n';
    }
    return 0;
  }
  Json j = Json::parse(cut_json(best));
  Json per = Json::array();
  for (const CutResult& r : results) per.push_back(Json::parse(cut_json(r)));
  j["per_heuristic"] = per;
  out << j.dump() << '\n';
  return 0;
}

int run_bench(const RunConfig& config, std::ostream& out) {
  BenchmarkRecord rec = relative_throughput(single_topo(config), parse_tm_spec(config.tm), config.iterations,
                                            config.seed, solve_options(config));
  if (!config.timing) rec.runtime_ms = 0;
  if (config.output == OutputFormat::csv) {
    out << record_csv_header() << '\n' << record_csv(rec) << '\n';
  } else {
    out << record_json(rec) << '\n';
  }
  return 0;
}

int run_ordering(const RunConfig& config, std::ostream& out) {
  const OrderingRecord rec =
      tm_ordering_experiment(single_topo(config), config.iterations, config.seed, solve_options(config));
  if (config.output == OutputFormat::csv) {
    out << "topo,t_a2a,t_rm5,t_rm1,t_lm,lower_bound,norm_a2a,norm_rm5,norm_rm1,norm_lm\n"
        << '"' << rec.topo << '"';
    for (double v : {rec.t_a2a, rec.t_rm5, rec.t_rm1, rec.t_lm, rec.lower_bound, rec.norm_a2a, rec.norm_rm5,
                     rec.norm_rm1, rec.norm_lm}) {
      out << ',' << detail::format_double(v);
    }
    out << '\n';
  } else {
    out << ordering_json(rec) << '\n';
  }
  return 0;
}

int run_cutflow(const RunConfig& config, std::ostream& out) {
  if (config.topo.empty()) throw Error(Errc::ParseError, "--topo is required");
  if (config.output == OutputFormat::csv) out << "topo,t_lm,best_cut_sparsity,winning_heuristic,cut_equals_flow\n";
  for (const std::string& text : config.topo) {
    const CutFlowRecord rec = cut_vs_flow(topo_spec(config, text), config.seed, solve_options(config),
                                          config.brute_cap);
    if (config.output == OutputFormat::csv) {
      out << '"' << rec.topo << "\"," << detail::format_double(rec.t_lm) << ','
          << detail::format_double(rec.best_cut_sparsity) << ',' << heuristic_name(rec.winning_heuristic) << ','
          << (rec.cut_equals_flow ? "true" : "false") << '\n';
    } else {
      out << cutflow_json(rec) << '\n';
    }
  }
  return 0;
}

int run_separation(const RunConfig& config, std::ostream& out) {
  std::vector<std::uint64_t> seeds;
  for (int i = 0; i < config.iterations; ++i) seeds.push_back(derive_seed(config.seed, static_cast<std::uint64_t>(i)));
  const SeparationReport rep =
      separation_experiment(config.a_nodes, config.alpha, config.beta, config.b_nodes, config.b_degree,
                            config.b_path, seeds, solve_options(config), config.brute_cap);
  if (config.output == OutputFormat::csv) {
    out << "seed,t_a,phi_a,t_b,phi_b,flipped\n";
    for (const SeparationSample& s : rep.samples) {
      out << s.seed << ',' << detail::format_double(s.t_a) << ',' << detail::format_double(s.phi_a) << ','
          << detail::format_double(s.t_b) << ',' << detail::format_double(s.phi_b) << ','
          << (s.flipped ? "true" : "false") << '\n';
    }
  } else {
    out << separation_json(rep) << '\n';
  }
  return 0;
}

}  // namespace

RunConfig parse_command_line(int argc, const char* const* argv, std::string* help_text) {
  RunConfig config;
  CLI::App app{"Topology throughput and sparse-cut benchmarks", "topobench"};
  std::string command;
  std::string solver = "auto";
  std::string output = "json";
  app.add_option("command", command, "gen | tm | throughput | cut | bench | ordering | cutflow | separation")
      ->required();
  app.add_option("--topo", config.topo, "topology spec, e.g. fattree:k=4 (repeatable for cutflow)");
  app.add_option("--tm", config.tm, "a2a | rm[:seed=S] | lm | file:PATH (cut: none for uniform)");
  app.add_option("--solver", solver, "exact | approx | auto");
  app.add_option("--eps", config.epsilon, "approximation parameter in (0, 0.2]");
  app.add_option("--iters", config.iterations, "random graphs (bench), RM samples (ordering), seeds (separation)");
  app.add_option("--seed", config.seed, "master seed");
  app.add_option("--output", output, "json | csv");
  app.add_option("--brute-cap", config.brute_cap, "maximum cuts examined by brute force");
  app.add_option("--servers-per-switch", config.servers_per_switch, "servers on each hosting switch");
  app.add_option("--in", config.in_file, "edge-list file used instead of --topo");
  app.add_option("--out", config.out_file, "file for edge list, TM or flow CSV");
  app.add_option("--heuristic", config.heuristic, "all | brute | one_node | two_node | expanding | eigenvector");
  app.add_flag("--timing", config.timing, "report measured run times");
  app.add_option("--a-nodes", config.a_nodes, "separation: switches of the clustered graph");
  app.add_option("--alpha", config.alpha, "separation: intra-cluster degree");
  app.add_option("--beta", config.beta, "separation: inter-cluster degree");
  app.add_option("--b-nodes", config.b_nodes, "separation: expander nodes before subdivision");
  app.add_option("--b-degree", config.b_degree, "separation: expander half-degree");
  app.add_option("--b-path", config.b_path, "separation: hops per subdivided edge");
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    if (help_text) *help_text = app.help();
    return RunConfig{};
  } catch (const CLI::ParseError& e) {
    std::string msg = e.what();
    for (char& ch : msg) {
      if (ch == '\n') ch = ' ';
    }
    throw Error(Errc::ParseError, msg);
  }
  const auto cmd = kCommands.find(command);
  if (cmd == kCommands.end()) throw Error(Errc::ParseError, "unknown command '" + command + "'");
  config.command = cmd->second;
  if (solver == "exact") {
    config.solver = SolverChoice::exact;
  } else if (solver == "approx") {
    config.solver = SolverChoice::approx;
  } else if (solver == "auto") {
    config.solver = SolverChoice::automatic;
  } else {
    throw Error(Errc::ParseError, "unknown solver '" + solver + "'");
  }
  if (output == "json") {
    config.output = OutputFormat::json;
  } else if (output == "csv") {
    config.output = OutputFormat::csv;
  } else {
    throw Error(Errc::ParseError, "unknown output format '" + output + "'");
  }
  if (!(config.epsilon > 0 && config.epsilon <= 0.2)) {
    throw Error(Errc::ParseError, "--eps must be in (0, 0.2]");
  }
  if (config.iterations < 1) throw Error(Errc::ParseError, "--iters must be at least 1");
  if (config.brute_cap < 1) throw Error(Errc::ParseError, "--brute-cap must be positive");
  return config;
}

int run(const RunConfig& config, std::ostream& out) {
  switch (config.command) {
    case Command::gen: return run_gen(config, out);
    case Command::tm: return run_tm(config, out);
    case Command::throughput: return run_throughput(config, out);
    case Command::cut: return run_cut(config, out);
    case Command::bench: return run_bench(config, out);
    case Command::ordering: return run_ordering(config, out);
    case Command::cutflow: return run_cutflow(config, out);
    case Command::separation: return run_separation(config, out);
  }
  return 2;
}

int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  const auto fail = [&](std::string_view code, std::string message) {
    for (char& ch : message) {
      if (ch == '\n' || ch == '\r') ch = ' ';
    }
    Json j;
    j["error"] = code;
    j["message"] = message;
    err << j.dump() << '\n';
    return 2;
  };
  try {
    std::string help;
    const RunConfig config = parse_command_line(argc, argv, &help);
    if (!help.empty()) {
      out << help;
      return 0;
    }
    // Buffer so a failure part-way leaves no partial output behind.
    std::ostringstream buffer;
    const int code = run(config, buffer);
    out << buffer.str();
    return code;
  } catch (const Error& e) {
    const std::string what = e.what();
    const std::string prefix = std::string(errc_name(e.code())) + ": ";
    return fail(errc_name(e.code()), what.rfind(prefix, 0) == 0 ? what.substr(prefix.size()) : what);
  } catch (const std::exception& e) {
    return fail("InternalError", e.what());
  }
}

}  // namespace topobench::cli
