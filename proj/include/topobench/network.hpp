#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "topobench/error.hpp"

namespace topobench {

using NodeId = std::int32_t;

/// Absolute slack used wherever capacities are compared in floating point.
inline constexpr double kCapacityTolerance = 1e-9;

/// One directed switch-to-switch edge.
struct Edge {
  NodeId src = 0;
  NodeId dst = 0;
  double capacity = 1.0;

  friend bool operator==(const Edge&, const Edge&) = default;
};

/// One undirected link; expands to two directed edges of equal capacity.
struct Link {
  NodeId u = 0;
  NodeId v = 0;
  double capacity = 1.0;
};

/// A server is identified by the switch it hangs off and its slot there.
struct ServerId {
  NodeId node = 0;
  int slot = 0;

  friend auto operator<=>(const ServerId&, const ServerId&) = default;
};

/*
  Network: capacitated directed switch graph with servers attached per switch.

  Servers are not graph nodes: their links to the switch have unbounded
  capacity, so all server traffic is aggregated at the hosting switch. Edges
  are kept sorted by (src, dst); two networks with the same edge multiset and
  server map compare equal regardless of construction order. Construction
  does not validate; call validate() for the structural invariants.
*/
class Network {
 public:
  Network() = default;
  Network(int switch_count, std::vector<Edge> edges, std::vector<int> servers_per_switch);

  static Network from_links(int switch_count, std::span<const Link> links,
                            std::vector<int> servers_per_switch);
  static Network from_links(int switch_count, std::span<const Link> links,
                            int servers_per_switch = 1);

  int switch_count() const noexcept { return switch_count_; }
  std::span<const Edge> edges() const noexcept { return edges_; }
  const Edge& edge(int index) const { return edges_[static_cast<std::size_t>(index)]; }
  int edge_count() const noexcept { return static_cast<int>(edges_.size()); }

  /// Indices into edges() of the edges leaving `node`, ascending by dst.
  std::span<const int> out_edges(NodeId node) const;
  int degree(NodeId node) const { return static_cast<int>(out_edges(node).size()); }
  std::vector<int> degrees() const;
  /// Index of edge (src, dst), or -1.
  int find_edge(NodeId src, NodeId dst) const;

  std::span<const int> servers_per_switch() const noexcept { return servers_; }
  int servers_at(NodeId node) const { return servers_[static_cast<std::size_t>(node)]; }
  int total_servers() const noexcept { return total_servers_; }
  /// Dense server numbering: servers of switch 0 first, then switch 1, ...
  int server_index(ServerId id) const;
  ServerId server_at(int index) const;
  std::vector<ServerId> servers() const;

  double total_capacity() const;

  /// Undirected links with u < v, one per reciprocal edge pair.
  std::vector<Link> links() const;

  Network with_servers(std::vector<int> servers_per_switch) const;
  Network with_scaled_capacity(double factor) const;

  friend bool operator==(const Network& a, const Network& b) {
    return a.switch_count_ == b.switch_count_ && a.edges_ == b.edges_ && a.servers_ == b.servers_;
  }

 private:
  int switch_count_ = 0;
  std::vector<Edge> edges_;
  std::vector<int> servers_;
  std::vector<int> adj_offsets_;
  std::vector<int> adj_edges_;
  std::vector<int> server_offsets_;
  int total_servers_ = 0;
};

/// First violated structural invariant, if any.
std::optional<Error> find_violation(const Network& net);
/// Throws the first violated invariant.
void validate(const Network& net);

bool is_connected(const Network& net);

/// Hop-count distances over switch-switch edges.
class DistanceMatrix {
 public:
  static constexpr int kUnreachable = -1;

  DistanceMatrix() = default;
  DistanceMatrix(int n, std::vector<int> dist) : n_(n), dist_(std::move(dist)) {}

  int size() const noexcept { return n_; }
  int operator()(NodeId u, NodeId v) const {
    return dist_[static_cast<std::size_t>(u) * static_cast<std::size_t>(n_) + static_cast<std::size_t>(v)];
  }
  int diameter() const;

 private:
  int n_ = 0;
  std::vector<int> dist_;
};

std::vector<int> bfs_distances(const Network& net, NodeId source);
DistanceMatrix all_pairs_shortest_paths(const Network& net);
/// Mean hop distance over ordered switch pairs u != v.
double average_path_length(const Network& net);

std::string export_edge_list(const Network& net);
/// Parses "u v [cap]" lines and "server u k" lines; '#' starts a comment line.
/// Switches without a server line get `default_servers`. Validates the result.
Network import_edge_list(std::string_view text, int default_servers = 1);

}  // namespace topobench
