#pragma once

// Small graphs and independent oracles shared by the test binaries.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <vector>

#include "topobench/network.hpp"
#include "topobench/rng.hpp"
#include "topobench/traffic.hpp"

namespace testing_support {

using topobench::Link;
using topobench::Network;
using topobench::NodeId;

inline Network cycle(int n, int servers = 1) {
  std::vector<Link> links;
  for (int i = 0; i < n; ++i) links.push_back({i, (i + 1) % n, 1.0});
  return Network::from_links(n, links, servers);
}

inline Network complete(int n, int servers = 1) {
  std::vector<Link> links;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) links.push_back({i, j, 1.0});
  return Network::from_links(n, links, servers);
}

inline Network path(int n, int servers = 1) {
  std::vector<Link> links;
  for (int i = 0; i + 1 < n; ++i) links.push_back({i, i + 1, 1.0});
  return Network::from_links(n, links, servers);
}

// Centre 0 with leaves 1..leaves.
inline Network star(int leaves, int servers = 1) {
  std::vector<Link> links;
  for (int i = 1; i <= leaves; ++i) links.push_back({0, i, 1.0});
  return Network::from_links(leaves + 1, links, servers);
}

// Two K4s (0-3 and 4-7) joined by the single link 3-4.
inline Network bridge(int servers = 1) {
  std::vector<Link> links;
  for (int base : {0, 4})
    for (int i = 0; i < 4; ++i)
      for (int j = i + 1; j < 4; ++j) links.push_back({base + i, base + j, 1.0});
  links.push_back({3, 4, 1.0});
  return Network::from_links(8, links, servers);
}

// Random connected simple graph: a random spanning tree plus extra links.
inline Network random_connected(int n, int extra, std::uint64_t seed, int servers = 1) {
  topobench::Rng rng(seed);
  std::vector<Link> links;
  std::vector<std::vector<char>> adj(static_cast<std::size_t>(n), std::vector<char>(static_cast<std::size_t>(n), 0));
  const auto add = [&](int u, int v) {
    if (u == v || adj[u][v]) return false;
    adj[u][v] = adj[v][u] = 1;
    links.push_back({std::min(u, v), std::max(u, v), 1.0});
    return true;
  };
  for (int v = 1; v < n; ++v) add(v, static_cast<int>(rng.below(static_cast<std::uint64_t>(v))));
  for (int tries = 0, added = 0; added < extra && tries < 100 * (extra + 1); ++tries) {
    if (add(static_cast<int>(rng.below(n)), static_cast<int>(rng.below(n)))) ++added;
  }
  return Network::from_links(n, links, servers);
}

/*
  Dense tableau simplex for  max c'x  s.t.  A x <= b,  x >= 0,  b >= 0.
  Bland's rule; the slack basis is feasible because b >= 0.
*/
inline double simplex_max(const std::vector<std::vector<double>>& a, const std::vector<double>& b,
                          const std::vector<double>& c) {
  const std::size_t m = a.size(), n = c.size();
  std::vector<std::vector<double>> t(m + 1, std::vector<double>(n + m + 1, 0.0));
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) t[i][j] = a[i][j];
    t[i][n + i] = 1.0;
    t[i][n + m] = b[i];
  }
  for (std::size_t j = 0; j < n; ++j) t[m][j] = -c[j];
  std::vector<std::size_t> basis(m);
  for (std::size_t i = 0; i < m; ++i) basis[i] = n + i;
  const double eps = 1e-12;
  while (true) {
    std::size_t enter = n + m;
    for (std::size_t j = 0; j < n + m; ++j) {
      if (t[m][j] < -eps) {
        enter = j;
        break;
      }
    }
    if (enter == n + m) break;
    std::size_t leave = m;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < m; ++i) {
      if (t[i][enter] > eps) {
        const double ratio = t[i][n + m] / t[i][enter];
        if (ratio < best - eps || (std::abs(ratio - best) <= eps && leave < m && basis[i] < basis[leave])) {
          best = ratio;
          leave = i;
        }
      }
    }
    if (leave == m) return std::numeric_limits<double>::infinity();
    const double piv = t[leave][enter];
    for (double& x : t[leave]) x /= piv;
    for (std::size_t i = 0; i <= m; ++i) {
      if (i == leave || t[i][enter] == 0) continue;
      const double f = t[i][enter];
      for (std::size_t j = 0; j <= n + m; ++j) t[i][j] -= f * t[leave][j];
    }
    basis[leave] = enter;
  }
  return t[m][n + m];
}

/*
  Throughput through the path formulation: one variable per simple path of
  each switch pair with demand, plus t. Independent of the edge formulation
  and of the interior-point code. Only for tiny graphs.
*/
inline double path_lp_throughput(const Network& net, const topobench::TrafficMatrix& tm) {
  const int n = net.switch_count();
  const auto dense = topobench::switch_demands(net, tm);
  std::vector<std::vector<int>> paths;  // edge indices
  std::vector<int> path_pair;
  std::vector<std::pair<int, int>> pairs;
  std::vector<double> pair_demand;
  for (int s = 0; s < n; ++s) {
    for (int w = 0; w < n; ++w) {
      const double d = dense[static_cast<std::size_t>(s * n + w)];
      if (s == w || d <= 0) continue;
      const int pair_index = static_cast<int>(pairs.size());
      pairs.push_back({s, w});
      pair_demand.push_back(d);
      std::vector<char> seen(static_cast<std::size_t>(n), 0);
      std::vector<int> stack;
      std::function<void(int)> dfs = [&](int u) {
        if (u == w) {
          paths.push_back(stack);
          path_pair.push_back(pair_index);
          return;
        }
        seen[u] = 1;
        for (int e : net.out_edges(u)) {
          const int v = net.edge(e).dst;
          if (seen[v]) continue;
          stack.push_back(e);
          dfs(v);
          stack.pop_back();
        }
        seen[u] = 0;
      };
      dfs(s);
    }
  }
  const std::size_t vars = paths.size() + 1;  // last is t
  std::vector<std::vector<double>> a;
  std::vector<double> b;
  for (int e = 0; e < net.edge_count(); ++e) {
    std::vector<double> row(vars, 0.0);
    for (std::size_t p = 0; p < paths.size(); ++p)
      for (int pe : paths[p])
        if (pe == e) row[p] += 1.0;
    a.push_back(row);
    b.push_back(net.edge(e).capacity);
  }
  for (std::size_t q = 0; q < pairs.size(); ++q) {
    std::vector<double> row(vars, 0.0);
    for (std::size_t p = 0; p < paths.size(); ++p)
      if (path_pair[p] == static_cast<int>(q)) row[p] = -1.0;
    row[vars - 1] = pair_demand[q];
    a.push_back(row);
    b.push_back(0.0);
  }
  std::vector<double> c(vars, 0.0);
  c[vars - 1] = 1.0;
  return simplex_max(a, b, c);
}

// Exhaustive minimum over all bipartitions (both orientations), uniform or
// demand-weighted. Reference for the cut heuristics.
inline double brute_sparsest(const Network& net, const topobench::TrafficMatrix* tm) {
  const int n = net.switch_count();
  std::vector<double> dense;
  if (tm) dense = topobench::switch_demands(net, *tm);
  double best = std::numeric_limits<double>::infinity();
  for (long long mask = 1; mask + 1 < (1LL << n); ++mask) {
    double cap = 0, dem = 0;
    for (const auto& e : net.edges())
      if (((mask >> e.src) & 1) && !((mask >> e.dst) & 1)) cap += e.capacity;
    const int size = __builtin_popcountll(static_cast<unsigned long long>(mask));
    if (tm) {
      for (int u = 0; u < n; ++u)
        for (int v = 0; v < n; ++v)
          if (((mask >> u) & 1) && !((mask >> v) & 1)) dem += dense[static_cast<std::size_t>(u * n + v)];
      if (dem > 0) best = std::min(best, cap / dem);
    } else {
      best = std::min(best, cap / (static_cast<double>(size) * (n - size)));
    }
  }
  return best;
}

}  // namespace testing_support
