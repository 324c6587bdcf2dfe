#include "topobench/throughput.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <queue>
#include <sstream>

#include <Eigen/SparseCore>
#include <json.hpp>

#include "topobench/detail/format.hpp"
#include "topobench/lp.hpp"

namespace topobench {

namespace {

std::size_t idx(int i) { return static_cast<std::size_t>(i); }

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

bool usable(const Edge& e) { return e.capacity > kCapacityTolerance; }

FlowProblem checked_problem(const Network& net, const TrafficMatrix& tm) {
  validate_hose(tm);
  FlowProblem problem = make_flow_problem(net, tm);
  if (problem.network_demand <= 0) {
    throw Error(Errc::Unbounded, "no demand crosses a switch link; throughput is unbounded");
  }
  return problem;
}

// Scales flows down uniformly if round-off left any edge a hair over capacity.
void clamp_to_capacity(const Network& net, FlowSolution& sol) {
  double worst = 1.0;
  for (int e = 0; e < net.edge_count(); ++e) {
    double load = 0;
    for (auto& flows : sol.edge_flows) {
      flows[idx(e)] = std::max(flows[idx(e)], 0.0);
      load += flows[idx(e)];
    }
    const double cap = net.edge(e).capacity;
    if (load > cap) worst = std::max(worst, cap > 0 ? load / cap : std::numeric_limits<double>::infinity());
  }
  if (worst > 1.0) {
    for (auto& flows : sol.edge_flows) {
      for (double& f : flows) f = std::isfinite(worst) ? f / worst : 0.0;
    }
    sol.t = std::isfinite(worst) ? sol.t / worst : 0.0;
  }
}

/*
  Shortest-path tree under positive edge lengths. `order` lists nodes in
  settling order, so walking it backwards visits children before parents.
*/
struct Tree {
  std::vector<double> dist;
  std::vector<int> parent_edge;
  std::vector<NodeId> order;
};

void shortest_tree(const Network& net, const std::vector<double>& length, NodeId source, Tree& tree) {
  const auto n = idx(net.switch_count());
  const double inf = std::numeric_limits<double>::infinity();
  tree.dist.assign(n, inf);
  tree.parent_edge.assign(n, -1);
  tree.order.clear();
  using Item = std::pair<double, NodeId>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
  tree.dist[idx(source)] = 0;
  heap.push({0.0, source});
  while (!heap.empty()) {
    const auto [d, u] = heap.top();
    heap.pop();
    if (d > tree.dist[idx(u)]) continue;
    tree.order.push_back(u);
    for (int e : net.out_edges(u)) {
      if (!std::isfinite(length[idx(e)])) continue;
      const NodeId v = net.edge(e).dst;
      const double nd = d + length[idx(e)];
      if (nd < tree.dist[idx(v)]) {
        tree.dist[idx(v)] = nd;
        tree.parent_edge[idx(v)] = e;
        heap.push({nd, v});
      }
    }
  }
}

/*
  Garg-Koenemann style maximum concurrent flow.

  Commodity k has demand vector D_k. Lengths start at delta / c_e and grow by
  (1 + eps' * f / c_e) when flow f is pushed. Each phase routes every
  commodity's (prescaled) demand once along shortest-path trees. Two numbers
  are tracked throughout:
    - a feasible value: scale the accumulated flow down to its congestion;
    - an upper bound: for any lengths l, t* <= sum c_e l_e / sum_k D_k . dist_l.
  The run stops as soon as the feasible value is within (1 - eps) of the
  bound. Otherwise a stage ends when sum c_e l_e reaches 1, after which a
  stage with a smaller step restarts from scratch; eps' = eps / 3 is enough
  for the classical guarantee.
*/
class ConcurrentFlow {
 public:
  ConcurrentFlow(const Network& net, const FlowProblem& problem, double epsilon)
      : net_(net), problem_(problem), epsilon_(epsilon), edges_(idx(net.edge_count())),
        commodities_(problem.commodities.size()) {}

  FlowSolution run() {
    initial_routing();
    if (best_t_ <= 0) return finish();
    for (const double divisor : {2.0, 3.0, 4.0, 6.0, 8.0}) {
      if (stage(epsilon_ / divisor)) break;
    }
    return finish();
  }

 private:
  double capacity(std::size_t e) const { return net_.edge(static_cast<int>(e)).capacity; }

  // Routes demand on hop-shortest trees; gives the prescale and a first primal.
  void initial_routing() {
    std::vector<double> length(edges_);
    for (std::size_t e = 0; e < edges_; ++e) {
      length[e] = usable(net_.edge(static_cast<int>(e))) ? 1.0 : std::numeric_limits<double>::infinity();
    }
    std::vector<double> flows(commodities_ * edges_, 0.0);
    std::vector<double> load(edges_, 0.0);
    Tree tree;
    for (std::size_t k = 0; k < commodities_; ++k) {
      const Commodity& com = problem_.commodities[k];
      shortest_tree(net_, length, com.source, tree);
      for (const auto& [dst, amount] : com.demands) {
        if (!std::isfinite(tree.dist[idx(dst)])) {
          // Some demand cannot be routed at all: the optimum is 0.
          best_t_ = 0;
          upper_ = 0;
          best_flows_.assign(commodities_ * edges_, 0.0);
          return;
        }
      }
      push_tree(tree, com, 1.0, &flows[k * edges_], load);
    }
    double congestion = 0;
    for (std::size_t e = 0; e < edges_; ++e) congestion = std::max(congestion, load[e] / capacity(e));
    scale_ = 1.0 / congestion;
    best_t_ = scale_;
    best_flows_ = std::move(flows);
    for (double& f : best_flows_) f *= scale_;
  }

  // Adds factor * D_k along the tree into `flows` and `load`.
  void push_tree(const Tree& tree, const Commodity& com, double factor, double* flows,
                 std::vector<double>& load) {
    subtree_.assign(idx(net_.switch_count()), 0.0);
    for (const auto& [dst, amount] : com.demands) subtree_[idx(dst)] = amount * factor;
    for (auto it = tree.order.rbegin(); it != tree.order.rend(); ++it) {
      const int e = tree.parent_edge[idx(*it)];
      if (e < 0 || subtree_[idx(*it)] <= 0) continue;
      flows[idx(e)] += subtree_[idx(*it)];
      load[idx(e)] += subtree_[idx(*it)];
      subtree_[idx(net_.edge(e).src)] += subtree_[idx(*it)];
    }
  }

  double upper_bound(const std::vector<double>& length, double volume) {
    double alpha = 0;
    for (const Commodity& com : problem_.commodities) {
      shortest_tree(net_, length, com.source, tree_);
      for (const auto& [dst, amount] : com.demands) alpha += amount * tree_.dist[idx(dst)];
    }
    return volume / alpha;
  }

  // Feasible t of the current accumulated flow.
  double feasible_t(const std::vector<double>& load, const std::vector<double>& routed) const {
    double congestion = 0;
    for (std::size_t e = 0; e < edges_; ++e) {
      if (load[e] > 0) congestion = std::max(congestion, load[e] / capacity(e));
    }
    const double least = *std::min_element(routed.begin(), routed.end());
    if (congestion <= 0 || least <= 0) return 0;
    return least * scale_ / congestion;
  }

  void keep(const std::vector<double>& flows, const std::vector<double>& load,
            const std::vector<double>& routed) {
    const double t = feasible_t(load, routed);
    if (t <= best_t_) return;
    best_t_ = t;
    best_flows_.assign(flows.size(), 0.0);
    // Commodity k delivered routed[k] * scale * D_k; trim each to exactly t * D_k.
    for (std::size_t k = 0; k < commodities_; ++k) {
      const double factor = t / (routed[k] * scale_);
      for (std::size_t e = 0; e < edges_; ++e) best_flows_[k * edges_ + e] = flows[k * edges_ + e] * factor;
    }
  }

  bool certified() const { return best_t_ >= (1.0 - epsilon_) * upper_; }

  // One run at step size `step`. Returns true once certified.
  bool stage(double step) {
    const double m = static_cast<double>(std::count_if(net_.edges().begin(), net_.edges().end(), usable));
    // Lengths are stored relative to exp(offset) to keep delta representable.
    double offset = -std::log(m / (1.0 - step)) / step;
    std::vector<double> length(edges_);
    double volume = 0;  // sum c_e * length_e, relative to exp(offset)
    for (std::size_t e = 0; e < edges_; ++e) {
      if (usable(net_.edge(static_cast<int>(e)))) {
        length[e] = 1.0 / capacity(e);
        volume += 1.0;
      } else {
        length[e] = std::numeric_limits<double>::infinity();
      }
    }
    std::vector<double> flows(commodities_ * edges_, 0.0);
    std::vector<double> load(edges_, 0.0);
    std::vector<double> routed(commodities_, 0.0);
    const auto exhausted = [&] { return offset + std::log(volume) >= 0; };

    while (true) {
      upper_ = std::min(upper_, upper_bound(length, volume));
      if (routed.front() > 0) {
        if (feasible_t(load, routed) >= (1.0 - epsilon_) * upper_) {
          keep(flows, load, routed);
          if (certified()) return true;
        }
      }
      if (certified()) return true;
      if (exhausted()) break;
      for (std::size_t k = 0; k < commodities_ && !exhausted(); ++k) {
        const Commodity& com = problem_.commodities[k];
        double remaining = 1.0;
        while (remaining > 0 && !exhausted()) {
          shortest_tree(net_, length, com.source, tree_);
          step_load_.assign(edges_, 0.0);
          step_flow_.assign(edges_, 0.0);
          push_tree(tree_, com, remaining * scale_, step_flow_.data(), step_load_);
          double sigma = 1.0;
          for (std::size_t e = 0; e < edges_; ++e) {
            if (step_load_[e] > 0) sigma = std::min(sigma, capacity(e) / step_load_[e]);
          }
          double peak = 0;
          for (std::size_t e = 0; e < edges_; ++e) {
            if (step_load_[e] <= 0) continue;
            const double f = sigma * step_load_[e];
            flows[k * edges_ + e] += f;
            load[e] += f;
            const double grown = length[e] * (1.0 + step * f / capacity(e));
            volume += capacity(e) * (grown - length[e]);
            length[e] = grown;
            peak = std::max(peak, grown);
          }
          routed[k] += sigma * remaining;
          remaining = sigma >= 1.0 ? 0.0 : remaining * (1.0 - sigma);
          if (peak > 1e100) {
            for (double& l : length) l *= 1e-100;
            volume *= 1e-100;
            offset += 100.0 * std::log(10.0);
          }
        }
      }
    }
    keep(flows, load, routed);
    return certified();
  }

  FlowSolution finish() {
    FlowSolution sol;
    sol.solver = SolverKind::approx_mcf;
    sol.epsilon = epsilon_;
    sol.t = best_t_;
    sol.t_upper = std::isfinite(upper_) ? std::max(upper_, best_t_) : best_t_;
    for (std::size_t k = 0; k < commodities_; ++k) {
      sol.sources.push_back(problem_.commodities[k].source);
      sol.edge_flows.emplace_back(best_flows_.begin() + static_cast<std::ptrdiff_t>(k * edges_),
                                  best_flows_.begin() + static_cast<std::ptrdiff_t>((k + 1) * edges_));
    }
    return sol;
  }

  const Network& net_;
  const FlowProblem& problem_;
  double epsilon_;
  std::size_t edges_;
  std::size_t commodities_;
  double scale_ = 1.0;
  double best_t_ = 0;
  double upper_ = std::numeric_limits<double>::infinity();
  std::vector<double> best_flows_;
  Tree tree_;
  std::vector<double> subtree_;
  std::vector<double> step_load_;
  std::vector<double> step_flow_;
};

}  // namespace

std::string_view solver_name(SolverKind kind) {
  return kind == SolverKind::exact_lp ? "exact_lp" : "approx_mcf";
}

FlowProblem make_flow_problem(const Network& net, const TrafficMatrix& tm) {
  const int n = net.switch_count();
  const auto dense = switch_demands(net, tm);
  FlowProblem problem;
  for (NodeId s = 0; s < n; ++s) {
    Commodity com;
    com.source = s;
    for (NodeId w = 0; w < n; ++w) {
      const double d = dense[idx(s) * idx(n) + idx(w)];
      if (d <= 0) continue;
      if (w == s) {
        problem.local_demand += d;
      } else {
        com.demands.emplace_back(w, d);
        com.total += d;
      }
    }
    if (!com.demands.empty()) {
      problem.network_demand += com.total;
      problem.commodities.push_back(std::move(com));
    }
  }
  return problem;
}

/*
  Edge formulation, standard form. Columns: f[k][e] for every commodity and
  usable edge, one slack per usable edge, tau[k] per commodity, then t.
  Rows: conservation of commodity k at every switch but its source
  (inflow - outflow - tau_k * D_k(u) = 0; the source row is implied),
  capacity (sum_k f[k][e] + slack_e = c_e), and tau_k - t = 0. The per-
  commodity copy of t keeps the t column from coupling every conservation
  row in the normal equations.
*/
FlowSolution solve_exact(const Network& net, const TrafficMatrix& tm, const ExactOptions& options) {
  const auto start = Clock::now();
  if (net.switch_count() > options.max_switches) {
    throw Error(Errc::TooLargeForExact, std::to_string(net.switch_count()) + " switches exceed the exact limit of " +
                                            std::to_string(options.max_switches));
  }
  const FlowProblem problem = checked_problem(net, tm);
  const int n = net.switch_count();
  const auto commodities = static_cast<int>(problem.commodities.size());
  std::vector<int> cols_of_edge(idx(net.edge_count()), -1);
  int usable_edges = 0;
  for (int e = 0; e < net.edge_count(); ++e) {
    if (usable(net.edge(e))) cols_of_edge[idx(e)] = usable_edges++;
  }

  const int flow_cols = commodities * usable_edges;
  const int slack_col = flow_cols;
  const int tau_col = slack_col + usable_edges;
  const int t_col = tau_col + commodities;
  const int cols = t_col + 1;
  const int cons_rows = commodities * (n - 1);
  const int cap_row = cons_rows;
  const int couple_row = cap_row + usable_edges;
  const int rows = couple_row + commodities;

  // Conservation row of commodity k at node u (source skipped).
  const auto cons = [&](int k, NodeId u) {
    const NodeId s = problem.commodities[idx(k)].source;
    if (u == s) return -1;
    return k * (n - 1) + (u < s ? u : u - 1);
  };

  std::vector<Eigen::Triplet<double>> entries;
  Eigen::VectorXd b = Eigen::VectorXd::Zero(rows);
  Eigen::VectorXd c = Eigen::VectorXd::Zero(cols);
  for (int k = 0; k < commodities; ++k) {
    for (int e = 0; e < net.edge_count(); ++e) {
      if (cols_of_edge[idx(e)] < 0) continue;
      const int col = k * usable_edges + cols_of_edge[idx(e)];
      const Edge& edge = net.edge(e);
      if (int r = cons(k, edge.src); r >= 0) entries.emplace_back(r, col, -1.0);
      if (int r = cons(k, edge.dst); r >= 0) entries.emplace_back(r, col, 1.0);
      entries.emplace_back(cap_row + cols_of_edge[idx(e)], col, 1.0);
    }
    for (const auto& [dst, amount] : problem.commodities[idx(k)].demands) {
      entries.emplace_back(cons(k, dst), tau_col + k, -amount);
    }
    entries.emplace_back(couple_row + k, tau_col + k, 1.0);
    entries.emplace_back(couple_row + k, t_col, -1.0);
  }
  for (int e = 0; e < net.edge_count(); ++e) {
    if (cols_of_edge[idx(e)] < 0) continue;
    entries.emplace_back(cap_row + cols_of_edge[idx(e)], slack_col + cols_of_edge[idx(e)], 1.0);
    b[cap_row + cols_of_edge[idx(e)]] = net.edge(e).capacity;
  }
  c[t_col] = -1.0;

  lp::Problem lp_problem;
  lp_problem.a.resize(rows, cols);
  lp_problem.a.setFromTriplets(entries.begin(), entries.end());
  lp_problem.b = std::move(b);
  lp_problem.c = std::move(c);
  const lp::Result res = lp::solve(lp_problem);
  if (res.status != lp::Status::optimal && res.status != lp::Status::near_optimal) {
    throw Error(Errc::SolverFailure, "interior-point method stopped after " + std::to_string(res.iterations) +
                                         " iterations (gap " + detail::format_double(res.relative_gap) + ")");
  }

  FlowSolution sol;
  sol.solver = SolverKind::exact_lp;
  sol.epsilon = 0;
  sol.t = std::max(res.x[t_col], 0.0);
  sol.t_upper = std::max(sol.t, -res.dual_objective);
  for (int k = 0; k < commodities; ++k) {
    sol.sources.push_back(problem.commodities[idx(k)].source);
    std::vector<double> flows(idx(net.edge_count()), 0.0);
    // Commodity k routes tau_k * D_k; rescale so it routes exactly t * D_k.
    const double tau = res.x[tau_col + k];
    const double factor = tau > 0 ? sol.t / tau : 0.0;
    for (int e = 0; e < net.edge_count(); ++e) {
      if (cols_of_edge[idx(e)] >= 0) flows[idx(e)] = res.x[k * usable_edges + cols_of_edge[idx(e)]] * factor;
    }
    sol.edge_flows.push_back(std::move(flows));
  }
  clamp_to_capacity(net, sol);
  sol.solve_time_ms = elapsed_ms(start);
  return sol;
}

FlowSolution solve_approx(const Network& net, const TrafficMatrix& tm, double epsilon) {
  const auto start = Clock::now();
  if (!(epsilon > 0 && epsilon <= 0.2)) {
    throw Error(Errc::InvalidParameter, "epsilon must be in (0, 0.2], got " + detail::format_double(epsilon));
  }
  const FlowProblem problem = checked_problem(net, tm);
  ConcurrentFlow solver(net, problem, epsilon);
  FlowSolution sol = solver.run();
  clamp_to_capacity(net, sol);
  sol.solve_time_ms = elapsed_ms(start);
  return sol;
}

FlowSolution solve(const Network& net, const TrafficMatrix& tm, SolverChoice choice, double epsilon) {
  switch (choice) {
    case SolverChoice::exact: return solve_exact(net, tm);
    case SolverChoice::approx: return solve_approx(net, tm, epsilon);
    case SolverChoice::automatic: break;
  }
  if (net.switch_count() <= kDefaultExactLimit) return solve_exact(net, tm);
  return solve_approx(net, tm, epsilon);
}

std::optional<Error> check_solution(const Network& net, const TrafficMatrix& tm, const FlowSolution& sol) {
  const FlowProblem problem = make_flow_problem(net, tm);
  const auto n = idx(net.switch_count());
  const auto edge_count = idx(net.edge_count());
  for (const auto& flows : sol.edge_flows) {
    if (flows.size() != edge_count) {
      return Error(Errc::ConservationViolated, "flow vector has " + std::to_string(flows.size()) + " entries for " +
                                                   std::to_string(edge_count) + " edges");
    }
  }
  for (std::size_t e = 0; e < edge_count; ++e) {
    double load = 0;
    for (const auto& flows : sol.edge_flows) {
      if (flows[e] < -kFeasibilityTolerance) {
        return Error(Errc::CapacityViolated, "negative flow on edge " + std::to_string(e));
      }
      load += flows[e];
    }
    const Edge& edge = net.edge(static_cast<int>(e));
    if (load > edge.capacity + kFeasibilityTolerance) {
      return Error(Errc::CapacityViolated, "edge " + std::to_string(edge.src) + "->" + std::to_string(edge.dst) +
                                               " carries " + detail::format_double(load) + " > " +
                                               detail::format_double(edge.capacity));
    }
  }

  std::vector<double> required(n);
  std::vector<double> net_in(n);
  for (const Commodity& com : problem.commodities) {
    const auto it = std::find(sol.sources.begin(), sol.sources.end(), com.source);
    std::fill(net_in.begin(), net_in.end(), 0.0);
    if (it != sol.sources.end()) {
      const auto& flows = sol.edge_flows[static_cast<std::size_t>(it - sol.sources.begin())];
      for (std::size_t e = 0; e < edge_count; ++e) {
        const Edge& edge = net.edge(static_cast<int>(e));
        net_in[idx(edge.dst)] += flows[e];
        net_in[idx(edge.src)] -= flows[e];
      }
    }
    std::fill(required.begin(), required.end(), 0.0);
    for (const auto& [dst, amount] : com.demands) required[idx(dst)] = sol.t * amount;
    for (std::size_t u = 0; u < n; ++u) {
      if (static_cast<NodeId>(u) == com.source) continue;
      if (net_in[u] < required[u] - kFeasibilityTolerance) {
        if (required[u] > 0) {
          return Error(Errc::DemandShort, "switch " + std::to_string(com.source) + " -> " + std::to_string(u) +
                                              " receives " + detail::format_double(net_in[u]) + " of " +
                                              detail::format_double(required[u]));
        }
        return Error(Errc::ConservationViolated, "commodity " + std::to_string(com.source) + " at switch " +
                                                     std::to_string(u));
      }
      if (net_in[u] > required[u] + kFeasibilityTolerance) {
        return Error(Errc::ConservationViolated, "commodity " + std::to_string(com.source) + " at switch " +
                                                     std::to_string(u));
      }
    }
  }
  // Flow of a source switch with no demand must vanish.
  for (std::size_t k = 0; k < sol.sources.size(); ++k) {
    const bool known = std::any_of(problem.commodities.begin(), problem.commodities.end(),
                                   [&](const Commodity& com) { return com.source == sol.sources[k]; });
    if (known) continue;
    for (double f : sol.edge_flows[k]) {
      if (std::abs(f) > kFeasibilityTolerance) {
        return Error(Errc::ConservationViolated, "flow for switch " + std::to_string(sol.sources[k]) +
                                                     " which has no demand");
      }
    }
  }
  return std::nullopt;
}

void verify_solution(const Network& net, const TrafficMatrix& tm, const FlowSolution& sol) {
  if (auto err = check_solution(net, tm, sol)) throw *err;
}

double volumetric_upper_bound(const Network& net, const TrafficMatrix& tm) {
  validate_hose(tm);
  const auto dense = switch_demands(net, tm);
  const auto apsp = all_pairs_shortest_paths(net);
  const int n = net.switch_count();
  double volume = 0;
  for (NodeId u = 0; u < n; ++u) {
    for (NodeId v = 0; v < n; ++v) {
      const double d = dense[idx(u) * idx(n) + idx(v)];
      if (u == v || d <= 0) continue;
      if (apsp(u, v) == DistanceMatrix::kUnreachable) return 0.0;
      volume += d * apsp(u, v);
    }
  }
  if (volume <= 0) throw Error(Errc::ZeroDemand, "no demand crosses a switch link");
  return net.total_capacity() / volume;
}

std::string solution_json(const FlowSolution& sol) {
  nlohmann::ordered_json j;
  j["t"] = sol.t;
  j["solver"] = solver_name(sol.solver);
  j["epsilon"] = sol.epsilon;
  j["solve_time_ms"] = sol.solve_time_ms;
  return j.dump();
}

std::string flows_csv(const Network& net, const FlowSolution& sol) {
  std::ostringstream out;
  out << "commodity,src,dst,flow\n";
  for (std::size_t k = 0; k < sol.edge_flows.size(); ++k) {
    for (int e = 0; e < net.edge_count(); ++e) {
      const double f = sol.edge_flows[k][idx(e)];
      if (f == 0) continue;
      out << sol.sources[k] << ',' << net.edge(e).src << ',' << net.edge(e).dst << ',' << detail::format_double(f)
          << '\n';
    }
  }
  return out.str();
}

}  // namespace topobench
