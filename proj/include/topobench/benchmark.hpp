#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "topobench/cuts.hpp"
#include "topobench/throughput.hpp"
#include "topobench/topologies.hpp"
#include "topobench/traffic.hpp"

namespace topobench {

/// "a2a", "rm", "rm:seed=S", "lm" or "file:PATH".
struct TmSpec {
  TmKind kind = TmKind::A2A;
  std::optional<std::uint64_t> seed;
  std::string path;

  std::string to_string() const;
};

TmSpec parse_tm_spec(std::string_view text);

/// Builds the TM on `net`. RM uses the spec's own seed when present and
/// `fallback_seed` otherwise.
TrafficMatrix build_tm(const Network& net, const TmSpec& spec, std::uint64_t fallback_seed);

struct SolveOptions {
  SolverChoice solver = SolverChoice::automatic;
  double epsilon = 0.01;
  /// Replaces the servers per hosting switch when >= 0.
  int servers_per_switch = -1;
};

struct BenchmarkRecord {
  std::string topo;
  std::string tm;
  std::uint64_t seed = 0;
  double t_topology = 0;
  std::vector<double> t_random;
  double t_random_mean = 0;
  double relative_throughput = 0;
  double ci_lo = 0;
  double ci_hi = 0;
  double runtime_ms = 0;
};

/// Throughput of the topology over the mean throughput of `iterations`
/// random graphs with identical degree sequence and server map. The 95%
/// interval is the Student-t interval of the random-graph mean, mapped
/// through t_topology / mean.
BenchmarkRecord relative_throughput(const TopoSpec& topo, const TmSpec& tm, int iterations, std::uint64_t seed,
                                    const SolveOptions& options = {});

/// Student-t half width of the 95% two-sided interval for the mean.
double ci95_half_width(const std::vector<double>& samples);

struct OrderingRecord {
  std::string topo;
  std::uint64_t seed = 0;
  int rm_samples = 0;
  double t_a2a = 0;
  double t_rm5 = 0;  // mean over samples
  double t_rm1 = 0;  // mean over samples
  double t_lm = 0;
  /// t_a2a / 2, the hose-model worst case for the default server layout.
  double lower_bound = 0;
  // Each TM over half the A2A throughput of its own server layout.
  double norm_a2a = 0;
  double norm_rm5 = 0;
  double norm_rm1 = 0;
  double norm_lm = 0;
};

/// A2A, RM with 5 and 1 servers per hosting switch, and LM. Every TM is
/// normalized by half the A2A throughput of the same server configuration,
/// the worst case any hose TM can reach.
OrderingRecord tm_ordering_experiment(const TopoSpec& topo, int rm_samples, std::uint64_t seed,
                                      const SolveOptions& options = {});

struct LowerBoundReport {
  double t_a2a = 0;
  double min_ratio = 0;
  std::vector<double> ratios;
};

/// Throughput under `trials` random hose TMs against half the A2A value.
/// Throws BoundViolated if any TM falls below t_A2A / 2 - 1e-6.
LowerBoundReport lower_bound_check(const Network& net, int trials, std::uint64_t seed, const SolveOptions& options = {});

struct CutFlowRecord {
  std::string topo;
  double t_lm = 0;
  double best_cut_sparsity = 0;
  Heuristic winning_heuristic = Heuristic::brute;
  bool cut_equals_flow = false;
};

/// LM throughput against the sparsest demand-weighted cut found. Throws
/// CutBelowFlow if a cut comes out sparser than the flow allows.
CutFlowRecord cut_vs_flow(const TopoSpec& topo, std::uint64_t seed, const SolveOptions& options = {},
                          long long brute_cap = kDefaultBruteCap);

struct SeparationSample {
  std::uint64_t seed = 0;
  double t_a = 0, phi_a = 0, t_b = 0, phi_b = 0;
  /// phi_a < phi_b and t_a > t_b.
  bool flipped = false;
};

struct SeparationReport {
  int n = 0, alpha = 0, beta = 0, base_nodes = 0, d = 0, p = 0;
  int switches_a = 0, switches_b = 0;
  std::vector<SeparationSample> samples;
  int flips = 0;
};

/// Graph A (clustered random) against Graph B (subdivided expander) under
/// A2A among all switches: best-found uniform cut and throughput of each.
SeparationReport separation_experiment(int n, int alpha, int beta, int base_nodes, int d, int p,
                                       const std::vector<std::uint64_t>& seeds, const SolveOptions& options = {},
                                       long long brute_cap = kDefaultBruteCap);

std::string record_json(const BenchmarkRecord& r);
std::string record_csv_header();
std::string record_csv(const BenchmarkRecord& r);
std::string ordering_json(const OrderingRecord& r);
std::string lower_bound_json(const LowerBoundReport& r);
std::string cutflow_json(const CutFlowRecord& r);
std::string separation_json(const SeparationReport& r);

}  // namespace topobench
