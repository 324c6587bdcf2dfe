#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "topobench/network.hpp"

namespace topobench {

enum class Family {
  hypercube,
  fattree,
  bcube,
  dcell,
  flattened_butterfly,
  dragonfly,
  hyperx,
  jellyfish,
  clustered_random,
  subdivided_expander,
  imported,
};

std::string_view family_name(Family family);

/// Parsed "family:key=val,key=val" topology description.
///
/// Values are integers except for hyperx, whose `dims` and `trunk` take
/// 'x'-separated lists (e.g. "hyperx:dims=3x3,trunk=2x1,t=1"). The imported
/// family carries its edge-list path in `path`.
struct TopoSpec {
  Family family = Family::hypercube;
  std::map<std::string, std::string> params;
  std::uint64_t seed = 0;
  std::string path;

  std::string to_string() const;
  friend bool operator==(const TopoSpec&, const TopoSpec&) = default;
};

TopoSpec parse_topo_spec(std::string_view text);

/// Builds the network a spec describes. `seed` feeds the random families;
/// `servers_override` (when >= 0) replaces the server count on every switch
/// that hosts servers by default (or on every switch, for families that
/// spread servers uniformly). Imported specs read `spec.path`.
Network build_topology(const TopoSpec& spec, int servers_override = -1);

Network gen_hypercube(int d, int servers_per_switch = 1);
Network gen_fattree(int k);
Network gen_bcube(int n, int k);
Network gen_dcell(int n, int k);
Network gen_flattened_butterfly(int k, int n, int servers_per_switch = 1);
/// `groups` defaults to a*h+1; any other value is rejected.
Network gen_dragonfly(int a, int h, int p, int groups = -1);
Network gen_hyperx(const std::vector<int>& dims, const std::vector<int>& trunking, int servers_per_switch);
Network gen_jellyfish(int n, int r, int servers_per_switch, std::uint64_t seed);
Network gen_same_equipment_random(const Network& net, std::uint64_t seed);
Network gen_clustered_random(int n, int alpha, int beta, std::uint64_t seed, int servers_per_switch = 1);
Network gen_subdivided_expander(int base_nodes, int d, int p, std::uint64_t seed);

/// Number of switches in a BCube/DCell network that are real switches rather
/// than server proxies. Proxy switches come after them in node order.
int bcube_level_switches(int n, int k);
int dcell_mini_switches(int n, int k);

}  // namespace topobench
