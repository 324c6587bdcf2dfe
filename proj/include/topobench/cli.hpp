#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "topobench/cuts.hpp"
#include "topobench/throughput.hpp"

namespace topobench::cli {

enum class Command { gen, tm, throughput, cut, bench, ordering, cutflow, separation };
enum class OutputFormat { json, csv };

struct RunConfig {
  Command command = Command::throughput;
  /// Topology specs; cutflow accepts several, every other command uses one.
  std::vector<std::string> topo;
  std::string tm = "a2a";
  SolverChoice solver = SolverChoice::automatic;
  double epsilon = 0.01;
  int iterations = 10;
  std::uint64_t seed = 0;
  OutputFormat output = OutputFormat::json;
  long long brute_cap = kDefaultBruteCap;
  int servers_per_switch = -1;
  std::string in_file;
  std::string out_file;
  std::string heuristic = "all";
  /// Report measured run times; off by default so output is reproducible.
  bool timing = false;
  // separation: Graph A (clustered random) and Graph B (subdivided expander)
  int a_nodes = 52, alpha = 5, beta = 1;
  int b_nodes = 8, b_degree = 2, b_path = 2;
};

/// Parses argv (argv[0] is the program name). Throws Error(ParseError); a
/// help request is reported through `help_text` with an empty config.
RunConfig parse_command_line(int argc, const char* const* argv, std::string* help_text = nullptr);

/// Executes a parsed config. Returns the process exit code.
int run(const RunConfig& config, std::ostream& out);

/// parse + run with every error mapped to exit code 2 and a one-line JSON
/// diagnostic on `err`.
int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace topobench::cli
