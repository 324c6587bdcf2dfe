#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "topobench/network.hpp"
#include "topobench/traffic.hpp"

namespace topobench {

/// Absolute slack for verify_solution (capacity, conservation, delivery).
inline constexpr double kFeasibilityTolerance = 1e-7;

/// Networks above this many switches are refused by solve_exact by default.
inline constexpr int kDefaultExactLimit = 64;

/// Demands of one source switch, aggregated over its servers.
struct Commodity {
  NodeId source = 0;
  /// (destination switch, demand), ascending by destination, source excluded.
  std::vector<std::pair<NodeId, double>> demands;
  double total = 0;
};

/// Switch-level multicommodity instance. Traffic between servers on the same
/// switch never touches a switch link; it is kept only in `local_demand`.
struct FlowProblem {
  std::vector<Commodity> commodities;
  double network_demand = 0;
  double local_demand = 0;
};

FlowProblem make_flow_problem(const Network& net, const TrafficMatrix& tm);

enum class SolverKind { exact_lp, approx_mcf };
enum class SolverChoice { exact, approx, automatic };

std::string_view solver_name(SolverKind kind);

struct FlowSolution {
  double t = 0;
  /// Proven upper bound on the optimum (dual objective, or the best
  /// length-function bound for the approximate solver).
  double t_upper = 0;
  SolverKind solver = SolverKind::exact_lp;
  double epsilon = 0;
  double solve_time_ms = 0;
  /// Source switch of each commodity, parallel to edge_flows.
  std::vector<NodeId> sources;
  /// edge_flows[k][e]: flow of commodity k on net.edges()[e].
  std::vector<std::vector<double>> edge_flows;
};

struct ExactOptions {
  int max_switches = kDefaultExactLimit;
};

FlowSolution solve_exact(const Network& net, const TrafficMatrix& tm, const ExactOptions& options = {});

/// Max-concurrent-flow by multiplicative length updates over shortest-path
/// trees. Returns t with t >= (1 - epsilon) * optimum, certified by t_upper.
FlowSolution solve_approx(const Network& net, const TrafficMatrix& tm, double epsilon);

/// `automatic` picks exact up to the exact-solve limit, approx(0.01) above.
FlowSolution solve(const Network& net, const TrafficMatrix& tm, SolverChoice choice = SolverChoice::automatic,
                   double epsilon = 0.01);

std::optional<Error> check_solution(const Network& net, const TrafficMatrix& tm, const FlowSolution& sol);
void verify_solution(const Network& net, const TrafficMatrix& tm, const FlowSolution& sol);

/// Total capacity over demand-weighted shortest-path volume.
double volumetric_upper_bound(const Network& net, const TrafficMatrix& tm);

/// {"t", "solver", "epsilon", "solve_time_ms"} as a JSON object.
std::string solution_json(const FlowSolution& sol);
/// "commodity,src,dst,flow" rows for edges with nonzero flow.
std::string flows_csv(const Network& net, const FlowSolution& sol);

}  // namespace topobench
