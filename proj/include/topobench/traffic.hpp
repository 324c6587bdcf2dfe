#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "topobench/network.hpp"

namespace topobench {

/// Slack on the hose constraint (row/column sums <= 1).
inline constexpr double kHoseTolerance = 1e-9;

enum class TmKind { A2A, RM, LM, custom };

std::string_view tm_kind_name(TmKind kind);

struct Demand {
  ServerId src;
  ServerId dst;
  double amount = 0;

  friend bool operator==(const Demand&, const Demand&) = default;
};

/*
  Sparse server-to-server traffic matrix. Entries are kept sorted by
  (src, dst) with one entry per pair; adding to an existing pair accumulates.
*/
class TrafficMatrix {
 public:
  TrafficMatrix() = default;
  explicit TrafficMatrix(TmKind kind) : kind_(kind) {}
  TrafficMatrix(TmKind kind, std::vector<Demand> demands);

  TmKind kind() const noexcept { return kind_; }
  std::span<const Demand> demands() const noexcept { return demands_; }
  std::size_t size() const noexcept { return demands_.size(); }
  double total() const;
  /// Demand for (src, dst), 0 when absent.
  double at(ServerId src, ServerId dst) const;

  friend bool operator==(const TrafficMatrix&, const TrafficMatrix&) = default;

 private:
  TmKind kind_ = TmKind::custom;
  std::vector<Demand> demands_;
};

/// A permutation over the network's dense server indices.
struct Matching {
  std::vector<int> target;
  double total_weight = 0;
};

struct LongestMatching {
  TrafficMatrix tm;
  Matching matching;
};

/// Dense row-major square matrix of matching weights.
using WeightMatrix = std::vector<std::vector<double>>;

TrafficMatrix tm_all_to_all(const Network& net);
/// Uniform random fixed-point-free permutation of servers, demand 1 per pair.
TrafficMatrix tm_random_matching(const Network& net, std::uint64_t seed);
/// Permutation maximizing the summed switch distance between paired servers.
LongestMatching tm_longest_matching(const Network& net);
/// Random dense hose TM: uniform entries, zero diagonal, balanced by
/// iterative proportional scaling, then scaled so the largest row or column
/// sum is exactly 1.
TrafficMatrix tm_random_hose(const Network& net, std::uint64_t seed);

/// Maximum-weight perfect matching (assignment problem). Among optimal
/// permutations the lexicographically smallest is returned.
Matching max_weight_perfect_matching(const WeightMatrix& weights);

std::optional<Error> find_hose_violation(const TrafficMatrix& tm);
void validate_hose(const TrafficMatrix& tm);

/// Switch-level demand D[u*n + v] summed over servers; the diagonal holds
/// traffic between servers on the same switch.
std::vector<double> switch_demands(const Network& net, const TrafficMatrix& tm);

/// Lines "src_switch src_slot dst_switch dst_slot demand".
std::string export_tm(const TrafficMatrix& tm);
TrafficMatrix import_tm(std::string_view text);

}  // namespace topobench
