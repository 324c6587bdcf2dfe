#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "topobench/network.hpp"
#include "topobench/traffic.hpp"

namespace topobench {

inline constexpr long long kDefaultBruteCap = 100000;

/// One side S of a switch bipartition, ascending; the complement is implicit.
struct Cut {
  std::vector<NodeId> side;
};

enum class Heuristic { brute, one_node, two_node, expanding, eigenvector };

std::string_view heuristic_name(Heuristic h);
std::optional<Heuristic> parse_heuristic(std::string_view name);

struct CutResult {
  Cut cut;
  Heuristic heuristic = Heuristic::brute;
  double crossing_capacity = 0;
  double uniform_sparsity = 0;
  /// Unset when no TM was given.
  std::optional<double> demand_sparsity;
  /// Brute force only: every bipartition was examined.
  bool exhaustive = false;

  /// The value minimized: demand sparsity when a TM is present, else uniform.
  double score() const { return demand_sparsity ? *demand_sparsity : uniform_sparsity; }
};

/// Evaluates a cut. Throws InvalidCut for an empty/full/out-of-range side and
/// ZeroDemandAcrossCut when a TM is given but nothing crosses S -> S-bar.
CutResult sparsity(const Network& net, const Cut& cut, const TrafficMatrix* tm = nullptr);

/// Exhaustive over all 2^(n-1) - 1 bipartitions when that fits in `cap`;
/// otherwise the best of `cap` bipartitions drawn from a seeded random order.
CutResult brute_force_cuts(const Network& net, const TrafficMatrix* tm = nullptr, long long cap = kDefaultBruteCap,
                           std::uint64_t seed = 0);
CutResult one_node_cuts(const Network& net, const TrafficMatrix* tm = nullptr);
CutResult two_node_cuts(const Network& net, const TrafficMatrix* tm = nullptr);
/// Balls B(v, k) for every v and 0 <= k < diameter.
CutResult expanding_cuts(const Network& net, const TrafficMatrix* tm = nullptr);
/// Sweep over nodes sorted by the Fiedler vector of the normalized Laplacian.
CutResult eigenvector_sweep(const Network& net, const TrafficMatrix* tm = nullptr);

struct BestCut {
  CutResult best;
  /// Best result of each heuristic that produced a usable cut, in enum order.
  std::vector<CutResult> per_heuristic;
};

BestCut best_cut(const Network& net, const TrafficMatrix* tm = nullptr, long long brute_cap = kDefaultBruteCap,
                 std::uint64_t seed = 0);

/// Fiedler vector of the normalized Laplacian with its eigenvalue and the
/// residual ||L x - lambda x||. Exposed for tests.
struct Fiedler {
  std::vector<double> vector;
  double value = 0;
  double residual = 0;
};
Fiedler fiedler_vector(const Network& net);

/// Minimum crossing capacity over |S| = n/2 cuts seen by brute force (capped)
/// and by the eigenvector sweep. Throws InvalidParameter when n is odd.
CutResult min_bisection(const Network& net, long long brute_cap = kDefaultBruteCap, std::uint64_t seed = 0);

/// {"heuristic", "side", "crossing_capacity", "uniform_sparsity", "demand_sparsity"}.
std::string cut_json(const CutResult& result);

}  // namespace topobench
