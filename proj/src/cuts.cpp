#include "topobench/cuts.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>

#include <json.hpp>

#include "topobench/rng.hpp"

namespace topobench {

namespace {

std::size_t idx(int i) { return static_cast<std::size_t>(i); }

struct SwitchDemand {
  NodeId src;
  NodeId dst;
  double amount;
};

/*
  Scores bipartitions given as membership flags. Both orientations of a
  bipartition are scored; crossing capacity and demand only count S -> S-bar.
*/
class CutScorer {
 public:
  CutScorer(const Network& net, const TrafficMatrix* tm, Heuristic heuristic)
      : net_(net), has_tm_(tm != nullptr), heuristic_(heuristic) {
    if (tm) {
      const int n = net.switch_count();
      const auto dense = switch_demands(net, *tm);
      for (NodeId u = 0; u < n; ++u) {
        for (NodeId v = 0; v < n; ++v) {
          const double d = dense[idx(u) * idx(n) + idx(v)];
          if (u != v && d > 0) demands_.push_back({u, v, d});
        }
      }
    }
  }

  // Scores S (flags set) and its complement; keeps the better of the two if
  // it beats the current best.
  void offer(const std::vector<char>& in_side) {
    double cap_out = 0, cap_in = 0, dem_out = 0, dem_in = 0;
    int size = 0;
    for (char f : in_side) size += f ? 1 : 0;
    const int n = net_.switch_count();
    if (size == 0 || size == n) return;
    for (const Edge& e : net_.edges()) {
      const bool a = in_side[idx(e.src)], b = in_side[idx(e.dst)];
      if (a && !b) cap_out += e.capacity;
      if (!a && b) cap_in += e.capacity;
    }
    for (const SwitchDemand& d : demands_) {
      const bool a = in_side[idx(d.src)], b = in_side[idx(d.dst)];
      if (a && !b) dem_out += d.amount;
      if (!a && b) dem_in += d.amount;
    }
    const double pairs = static_cast<double>(size) * static_cast<double>(n - size);
    consider(in_side, false, cap_out, dem_out, pairs);
    consider(in_side, true, cap_in, dem_in, pairs);
  }

  bool found() const { return found_; }

  CutResult result() const {
    if (!found_) {
      if (has_tm_) throw Error(Errc::ZeroDemandAcrossCut, "no examined cut separates any demand");
      throw Error(Errc::InvalidCut, "no cut examined");
    }
    return best_;
  }

 private:
  void consider(const std::vector<char>& in_side, bool complement, double cap, double demand, double pairs) {
    if (has_tm_ && demand <= 0) return;
    const double uniform = cap / pairs;
    const double score = has_tm_ ? cap / demand : uniform;
    if (found_ && !(score < best_score_)) return;
    found_ = true;
    best_score_ = score;
    best_.heuristic = heuristic_;
    best_.crossing_capacity = cap;
    best_.uniform_sparsity = uniform;
    best_.demand_sparsity = has_tm_ ? std::optional<double>(cap / demand) : std::nullopt;
    best_.cut.side.clear();
    for (std::size_t u = 0; u < in_side.size(); ++u) {
      if (static_cast<bool>(in_side[u]) != complement) best_.cut.side.push_back(static_cast<NodeId>(u));
    }
  }

  const Network& net_;
  bool has_tm_;
  Heuristic heuristic_;
  std::vector<SwitchDemand> demands_;
  bool found_ = false;
  double best_score_ = 0;
  CutResult best_;
};

void require_cuttable(const Network& net) {
  if (net.switch_count() < 2) throw Error(Errc::InvalidCut, "a cut needs at least 2 switches");
}

// Calls visit(in_side) for the bipartitions brute force examines; returns
// whether the enumeration was exhaustive. Node n-1 always sits outside S.
bool enumerate_bipartitions(int n, long long cap, std::uint64_t seed,
                            const std::function<void(const std::vector<char>&)>& visit) {
  std::vector<char> in_side(idx(n), 0);
  const int free_nodes = n - 1;
  const bool exhaustive = free_nodes < 62 && (1LL << free_nodes) - 1 <= cap;
  if (exhaustive) {
    const long long total = (1LL << free_nodes) - 1;
    for (long long mask = 1; mask <= total; ++mask) {
      for (int u = 0; u < free_nodes; ++u) in_side[idx(u)] = static_cast<char>((mask >> u) & 1);
      visit(in_side);
    }
    return true;
  }
  Rng rng(seed);
  for (long long drawn = 0; drawn < cap;) {
    bool any = false;
    for (int u = 0; u < free_nodes; ++u) {
      in_side[idx(u)] = static_cast<char>(rng.next() >> 63);
      any = any || in_side[idx(u)];
    }
    if (!any) continue;
    visit(in_side);
    ++drawn;
  }
  return false;
}

// Orthonormal basis of the second-smallest eigenspace plus its eigenvalue.
struct Eigenspace {
  Eigen::MatrixXd basis;
  double value = 0;
  Eigen::MatrixXd laplacian;
};

Eigenspace second_eigenspace(const Network& net) {
  const int n = net.switch_count();
  if (n < 2) throw Error(Errc::InvalidCut, "a cut needs at least 2 switches");
  Eigen::MatrixXd adj = Eigen::MatrixXd::Zero(n, n);
  for (const Edge& e : net.edges()) {
    adj(e.src, e.dst) += 0.5 * e.capacity;
    adj(e.dst, e.src) += 0.5 * e.capacity;
  }
  const Eigen::VectorXd deg = adj.rowwise().sum();
  if (deg.minCoeff() <= 0) throw Error(Errc::Disconnected, "isolated switch has no capacity");
  const Eigen::VectorXd inv_sqrt = deg.cwiseSqrt().cwiseInverse();
  Eigenspace out;
  out.laplacian = Eigen::MatrixXd::Identity(n, n) - inv_sqrt.asDiagonal() * adj * inv_sqrt.asDiagonal();
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(out.laplacian);
  if (solver.info() != Eigen::Success) throw Error(Errc::EigenNoConvergence, "symmetric eigensolver failed");
  const Eigen::VectorXd& values = solver.eigenvalues();
  out.value = values[1];
  int width = 1;
  while (1 + width < n && std::abs(values[1 + width] - out.value) <= 1e-8) ++width;
  out.basis = solver.eigenvectors().middleCols(1, width);
  return out;
}

/*
  Sweep candidates. With a repeated eigenvalue the eigenvector is not unique,
  so the projection of the centered node-index vector onto the eigenspace is
  used as a canonical choice, followed by each basis vector. Signs are fixed
  so results do not depend on the eigensolver's sign convention.
*/
std::vector<Eigen::VectorXd> sweep_vectors(const Eigenspace& space) {
  const auto n = space.basis.rows();
  Eigen::VectorXd ramp(n);
  for (Eigen::Index i = 0; i < n; ++i) ramp[i] = static_cast<double>(i) - 0.5 * static_cast<double>(n - 1);
  std::vector<Eigen::VectorXd> out;
  const Eigen::VectorXd projected = space.basis * (space.basis.transpose() * ramp);
  if (projected.norm() > 1e-6) out.push_back(projected.normalized());
  for (Eigen::Index j = 0; j < space.basis.cols(); ++j) {
    Eigen::VectorXd v = space.basis.col(j);
    double orient = v.dot(ramp);
    if (std::abs(orient) < 1e-9) {
      for (Eigen::Index i = 0; i < n; ++i) {
        if (std::abs(v[i]) > 1e-9) {
          orient = v[i];
          break;
        }
      }
    }
    if (orient < 0) v = -v;
    out.push_back(v);
  }
  return out;
}

std::vector<NodeId> ascending_order(const Eigen::VectorXd& v) {
  std::vector<NodeId> order(static_cast<std::size_t>(v.size()));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](NodeId a, NodeId b) { return v[a] < v[b]; });
  return order;
}

double residual(const Eigen::MatrixXd& lap, const Eigen::VectorXd& x) {
  const double lambda = x.dot(lap * x) / x.squaredNorm();
  return (lap * x - lambda * x).norm() / x.norm();
}

}  // namespace

std::string_view heuristic_name(Heuristic h) {
  switch (h) {
    case Heuristic::brute: return "brute";
    case Heuristic::one_node: return "one_node";
    case Heuristic::two_node: return "two_node";
    case Heuristic::expanding: return "expanding";
    case Heuristic::eigenvector: return "eigenvector";
  }
  return "brute";
}

std::optional<Heuristic> parse_heuristic(std::string_view name) {
  for (Heuristic h : {Heuristic::brute, Heuristic::one_node, Heuristic::two_node, Heuristic::expanding,
                      Heuristic::eigenvector}) {
    if (heuristic_name(h) == name) return h;
  }
  return std::nullopt;
}

CutResult sparsity(const Network& net, const Cut& cut, const TrafficMatrix* tm) {
  const int n = net.switch_count();
  std::vector<char> in_side(idx(n), 0);
  for (NodeId u : cut.side) {
    if (u < 0 || u >= n) throw Error(Errc::InvalidCut, "switch " + std::to_string(u) + " out of range");
    if (in_side[idx(u)]) throw Error(Errc::InvalidCut, "switch " + std::to_string(u) + " listed twice");
    in_side[idx(u)] = 1;
  }
  if (cut.side.empty() || static_cast<int>(cut.side.size()) == n) {
    throw Error(Errc::InvalidCut, "cut side must be a proper nonempty subset");
  }
  double cap = 0, demand = 0;
  for (const Edge& e : net.edges()) {
    if (in_side[idx(e.src)] && !in_side[idx(e.dst)]) cap += e.capacity;
  }
  CutResult out;
  out.cut.side = cut.side;
  std::sort(out.cut.side.begin(), out.cut.side.end());
  out.crossing_capacity = cap;
  const double size = static_cast<double>(cut.side.size());
  out.uniform_sparsity = cap / (size * (static_cast<double>(n) - size));
  if (tm) {
    for (const Demand& d : tm->demands()) {
      net.server_index(d.src);
      net.server_index(d.dst);
      if (in_side[idx(d.src.node)] && !in_side[idx(d.dst.node)]) demand += d.amount;
    }
    if (demand <= 0) throw Error(Errc::ZeroDemandAcrossCut, "no demand crosses the cut");
    out.demand_sparsity = cap / demand;
  }
  return out;
}

CutResult brute_force_cuts(const Network& net, const TrafficMatrix* tm, long long cap, std::uint64_t seed) {
  require_cuttable(net);
  CutScorer scorer(net, tm, Heuristic::brute);
  const bool exhaustive =
      enumerate_bipartitions(net.switch_count(), cap, seed, [&](const std::vector<char>& s) { scorer.offer(s); });
  CutResult out = scorer.result();
  out.exhaustive = exhaustive;
  return out;
}

CutResult one_node_cuts(const Network& net, const TrafficMatrix* tm) {
  require_cuttable(net);
  CutScorer scorer(net, tm, Heuristic::one_node);
  std::vector<char> in_side(idx(net.switch_count()), 0);
  for (int u = 0; u < net.switch_count(); ++u) {
    in_side[idx(u)] = 1;
    scorer.offer(in_side);
    in_side[idx(u)] = 0;
  }
  return scorer.result();
}

CutResult two_node_cuts(const Network& net, const TrafficMatrix* tm) {
  require_cuttable(net);
  CutScorer scorer(net, tm, Heuristic::two_node);
  const int n = net.switch_count();
  std::vector<char> in_side(idx(n), 0);
  for (int u = 0; u < n; ++u) {
    for (int v = u + 1; v < n; ++v) {
      in_side[idx(u)] = in_side[idx(v)] = 1;
      scorer.offer(in_side);
      in_side[idx(u)] = in_side[idx(v)] = 0;
    }
  }
  return scorer.result();
}

CutResult expanding_cuts(const Network& net, const TrafficMatrix* tm) {
  require_cuttable(net);
  CutScorer scorer(net, tm, Heuristic::expanding);
  const int n = net.switch_count();
  const auto apsp = all_pairs_shortest_paths(net);
  const int diameter = apsp.diameter();
  std::vector<char> in_side(idx(n));
  for (NodeId v = 0; v < n; ++v) {
    for (int k = 0; k < diameter; ++k) {
      for (NodeId u = 0; u < n; ++u) {
        const int d = apsp(v, u);
        in_side[idx(u)] = static_cast<char>(d != DistanceMatrix::kUnreachable && d <= k);
      }
      scorer.offer(in_side);
    }
  }
  return scorer.result();
}

Fiedler fiedler_vector(const Network& net) {
  const Eigenspace space = second_eigenspace(net);
  const Eigen::VectorXd x = sweep_vectors(space).front();
  Fiedler out;
  out.vector.assign(x.data(), x.data() + x.size());
  out.value = x.dot(space.laplacian * x);
  out.residual = residual(space.laplacian, x);
  if (out.residual > 1e-8) {
    throw Error(Errc::EigenNoConvergence, "residual " + std::to_string(out.residual));
  }
  return out;
}

CutResult eigenvector_sweep(const Network& net, const TrafficMatrix* tm) {
  require_cuttable(net);
  const Eigenspace space = second_eigenspace(net);
  CutScorer scorer(net, tm, Heuristic::eigenvector);
  const int n = net.switch_count();
  for (const Eigen::VectorXd& x : sweep_vectors(space)) {
    if (const double r = residual(space.laplacian, x); r > 1e-8) {
      throw Error(Errc::EigenNoConvergence, "residual " + std::to_string(r));
    }
    std::vector<char> in_side(idx(n), 0);
    const auto order = ascending_order(x);
    for (int i = 0; i + 1 < n; ++i) {
      in_side[idx(order[idx(i)])] = 1;
      scorer.offer(in_side);
    }
  }
  return scorer.result();
}

BestCut best_cut(const Network& net, const TrafficMatrix* tm, long long brute_cap, std::uint64_t seed) {
  BestCut out;
  const std::function<CutResult()> runs[] = {
      [&] { return brute_force_cuts(net, tm, brute_cap, seed); },
      [&] { return one_node_cuts(net, tm); },
      [&] { return two_node_cuts(net, tm); },
      [&] { return expanding_cuts(net, tm); },
      [&] { return eigenvector_sweep(net, tm); },
  };
  for (const auto& run : runs) {
    try {
      out.per_heuristic.push_back(run());
    } catch (const Error& err) {
      // A heuristic that sees no demand-separating cut simply has no vote.
      if (err.code() != Errc::ZeroDemandAcrossCut) throw;
    }
  }
  if (out.per_heuristic.empty()) throw Error(Errc::ZeroDemandAcrossCut, "no heuristic found a cut with demand");
  out.best = out.per_heuristic.front();
  for (const CutResult& r : out.per_heuristic) {
    if (r.score() < out.best.score()) out.best = r;
  }
  return out;
}

CutResult min_bisection(const Network& net, long long brute_cap, std::uint64_t seed) {
  const int n = net.switch_count();
  if (n < 2 || n % 2 != 0) throw Error(Errc::InvalidParameter, "bisection needs an even number of switches");
  std::optional<CutResult> best;
  const auto take = [&](const std::vector<char>& in_side, Heuristic h, bool exhaustive) {
    Cut cut;
    for (int u = 0; u < n; ++u) {
      if (in_side[idx(u)]) cut.side.push_back(u);
    }
    if (static_cast<int>(cut.side.size()) * 2 != n) return;
    CutResult r = sparsity(net, cut);
    r.heuristic = h;
    r.exhaustive = exhaustive;
    if (!best || r.crossing_capacity < best->crossing_capacity) best = r;
  };
  const bool exhaustive = enumerate_bipartitions(n, brute_cap, seed, [&](const std::vector<char>& s) {
    take(s, Heuristic::brute, false);
  });
  const Eigenspace space = second_eigenspace(net);
  for (const Eigen::VectorXd& x : sweep_vectors(space)) {
    std::vector<char> in_side(idx(n), 0);
    const auto order = ascending_order(x);
    for (int i = 0; i < n / 2; ++i) in_side[idx(order[idx(i)])] = 1;
    take(in_side, Heuristic::eigenvector, false);
  }
  // Exhaustive enumeration makes the minimum exact whichever source found it.
  best->exhaustive = exhaustive;
  return *best;
}

std::string cut_json(const CutResult& result) {
  nlohmann::ordered_json j;
  j["heuristic"] = heuristic_name(result.heuristic);
  j["side"] = result.cut.side;
  j["crossing_capacity"] = result.crossing_capacity;
  j["uniform_sparsity"] = result.uniform_sparsity;
  j["demand_sparsity"] = result.demand_sparsity ? nlohmann::ordered_json(*result.demand_sparsity) : nullptr;
  return j.dump();
}

}  // namespace topobench
