#include "topobench/topologies.hpp"

#include <algorithm>
#include <fstream>
#include <functional>
#include <numeric>
#include <optional>
#include <queue>
#include <sstream>

#include "topobench/detail/format.hpp"
#include "topobench/rng.hpp"

namespace topobench {

namespace {

std::size_t idx(int i) { return static_cast<std::size_t>(i); }

void require(bool ok, Errc code, const std::string& what) {
  if (!ok) throw Error(code, what);
}

long long checked_pow(long long base, int exp) {
  long long out = 1;
  for (int i = 0; i < exp; ++i) {
    out *= base;
    require(out <= 10'000'000, Errc::InvalidParameter, "topology too large");
  }
  return out;
}

/*
  Mutable simple graph used while sampling random topologies. Every edge is
  kept once in `edges` (u < v) and in both adjacency lists.
*/
class GraphBuilder {
 public:
  explicit GraphBuilder(int n) : adj_(idx(n)) {}

  int size() const { return static_cast<int>(adj_.size()); }
  bool has(int u, int v) const {
    const auto& a = adj_[idx(u)];
    return std::find(a.begin(), a.end(), v) != a.end();
  }
  void add(int u, int v) {
    adj_[idx(u)].push_back(v);
    adj_[idx(v)].push_back(u);
    edges_.emplace_back(std::min(u, v), std::max(u, v));
  }
  void remove(int u, int v) {
    auto drop = [](std::vector<int>& a, int x) { a.erase(std::find(a.begin(), a.end(), x)); };
    drop(adj_[idx(u)], v);
    drop(adj_[idx(v)], u);
    edges_.erase(std::find(edges_.begin(), edges_.end(), std::pair{std::min(u, v), std::max(u, v)}));
  }
  const std::vector<std::pair<int, int>>& edges() const { return edges_; }
  const std::vector<int>& neighbors(int u) const { return adj_[idx(u)]; }

  std::vector<int> components() const {
    std::vector<int> comp(adj_.size(), -1);
    int count = 0;
    for (int s = 0; s < size(); ++s) {
      if (comp[idx(s)] >= 0) continue;
      std::queue<int> q;
      q.push(s);
      comp[idx(s)] = count;
      while (!q.empty()) {
        const int u = q.front();
        q.pop();
        for (int v : adj_[idx(u)]) {
          if (comp[idx(v)] < 0) {
            comp[idx(v)] = count;
            q.push(v);
          }
        }
      }
      ++count;
    }
    return comp;
  }

  /// True if u and v stay connected once edge (u,v) is removed.
  bool is_on_cycle(int u, int v) const {
    std::vector<char> seen(adj_.size(), 0);
    std::queue<int> q;
    q.push(u);
    seen[idx(u)] = 1;
    while (!q.empty()) {
      const int x = q.front();
      q.pop();
      for (int y : adj_[idx(x)]) {
        if ((x == u && y == v) || (x == v && y == u) || seen[idx(y)]) continue;
        if (y == v) return true;
        seen[idx(y)] = 1;
        q.push(y);
      }
    }
    return false;
  }

  std::vector<Link> links() const {
    std::vector<Link> out;
    out.reserve(edges_.size());
    for (const auto& [u, v] : edges_) out.push_back({u, v, 1.0});
    return out;
  }

 private:
  std::vector<std::vector<int>> adj_;
  std::vector<std::pair<int, int>> edges_;
};

using PairFilter = std::function<bool(int, int)>;

/*
  Random link addition with edge-swap repair. `free` holds the number of
  unused ports per node; links are only placed between nodes accepted by
  `allowed`. When no admissible pair of free ports remains, an existing link
  (x,y) from `pool` is broken and the stuck ports p,q are joined to x and y.
  Returns false if the procedure cannot make progress.
*/
bool fill_ports(GraphBuilder& g, std::vector<int>& free, const PairFilter& allowed,
                std::vector<std::pair<int, int>>& pool, Rng& rng) {
  const int n = g.size();
  const auto ok = [&](int u, int v) { return u != v && allowed(u, v) && !g.has(u, v); };
  int swaps = 0;
  const int max_swaps = 50 * n + 1000;

  while (true) {
    std::vector<int> open;
    for (int u = 0; u < n; ++u) {
      if (free[idx(u)] > 0) open.push_back(u);
    }
    if (open.empty()) return true;

    bool linked = false;
    for (int attempt = 0; attempt < 4 * static_cast<int>(open.size()) + 16 && !linked; ++attempt) {
      const int u = open[idx(static_cast<int>(rng.below(open.size())))];
      const int v = open[idx(static_cast<int>(rng.below(open.size())))];
      if (ok(u, v)) {
        g.add(u, v);
        pool.emplace_back(std::min(u, v), std::max(u, v));
        --free[idx(u)];
        --free[idx(v)];
        linked = true;
      }
    }
    if (linked) continue;

    std::vector<std::pair<int, int>> candidates;
    for (std::size_t i = 0; i < open.size(); ++i) {
      for (std::size_t j = i + 1; j < open.size(); ++j) {
        if (ok(open[i], open[j])) candidates.emplace_back(open[i], open[j]);
      }
    }
    if (!candidates.empty()) {
      const auto [u, v] = candidates[idx(static_cast<int>(rng.below(candidates.size())))];
      g.add(u, v);
      pool.emplace_back(u, v);
      --free[idx(u)];
      --free[idx(v)];
      continue;
    }

    if (++swaps > max_swaps) return false;
    const int p = open[idx(static_cast<int>(rng.below(open.size())))];
    int q = p;
    if (free[idx(p)] < 2) {
      std::vector<int> others;
      for (int u : open) {
        if (u != p) others.push_back(u);
      }
      if (others.empty()) return false;
      q = others[idx(static_cast<int>(rng.below(others.size())))];
    }
    struct Swap {
      int x, y;
    };
    std::vector<Swap> swaps_ok;
    for (const auto& [a, b] : pool) {
      for (const auto& [x, y] : {std::pair{a, b}, std::pair{b, a}}) {
        if (x == p || x == q || y == p || y == q) continue;
        if (ok(p, x) && ok(q, y) && !(p == q && x == y)) swaps_ok.push_back({x, y});
      }
    }
    if (swaps_ok.empty()) return false;
    const Swap s = swaps_ok[idx(static_cast<int>(rng.below(swaps_ok.size())))];
    g.remove(s.x, s.y);
    pool.erase(std::find(pool.begin(), pool.end(), std::pair{std::min(s.x, s.y), std::max(s.x, s.y)}));
    g.add(p, s.x);
    g.add(q, s.y);
    pool.emplace_back(std::min(p, s.x), std::max(p, s.x));
    pool.emplace_back(std::min(q, s.y), std::max(q, s.y));
    --free[idx(p)];
    --free[idx(q)];
  }
}

/*
  Joins components with degree-preserving swaps: a cycle edge (a,b) of one
  component and any edge (c,d) of another become (a,c) and (b,d). Removing a
  cycle edge keeps its component connected, so every swap merges two
  components. A disconnected graph with at least n-1 edges always has a
  component containing a cycle.
*/
bool connect_components(GraphBuilder& g, Rng& rng) {
  while (true) {
    const auto comp = g.components();
    const int count = *std::max_element(comp.begin(), comp.end()) + 1;
    if (count <= 1) return true;

    const auto& edges = g.edges();
    if (edges.empty()) return false;
    const std::size_t start = rng.below(edges.size());
    std::optional<std::pair<int, int>> cyc;
    for (std::size_t i = 0; i < edges.size() && !cyc; ++i) {
      const auto e = edges[(start + i) % edges.size()];
      if (g.is_on_cycle(e.first, e.second)) cyc = e;
    }
    if (!cyc) return false;
    const int home = comp[idx(cyc->first)];
    std::vector<std::pair<int, int>> other;
    for (const auto& e : edges) {
      if (comp[idx(e.first)] != home) other.push_back(e);
    }
    if (other.empty()) return false;
    const auto [c, d] = other[idx(static_cast<int>(rng.below(other.size())))];
    const auto [a, b] = *cyc;
    g.remove(a, b);
    g.remove(c, d);
    g.add(a, c);
    g.add(b, d);
  }
}

bool graphical(std::vector<int> degrees) {
  long long sum = 0;
  for (int d : degrees) {
    if (d < 0) return false;
    sum += d;
  }
  if (sum % 2 != 0) return false;
  std::sort(degrees.rbegin(), degrees.rend());
  const auto n = static_cast<long long>(degrees.size());
  long long left = 0;
  for (long long k = 1; k <= n; ++k) {
    left += degrees[idx(static_cast<int>(k - 1))];
    long long right = k * (k - 1);
    for (long long i = k; i < n; ++i) right += std::min<long long>(degrees[idx(static_cast<int>(i))], k);
    if (left > right) return false;
  }
  return true;
}

constexpr int kMaxRestarts = 200;

// Disconnected samples are redrawn; joining components by a swap leaves a
// two-link bottleneck, so it is only the fallback for sparse sequences
// where a connected draw is rare.
bool settle_connectivity(GraphBuilder& g, Rng& rng, int attempt) {
  const auto comp = g.components();
  if (std::all_of(comp.begin(), comp.end(), [](int c) { return c == 0; })) return true;
  if (attempt < kMaxRestarts / 2) return false;
  return connect_components(g, rng);
}

/// Jellyfish-style sampling of a connected simple graph with the given degrees.
std::vector<Link> sample_by_link_addition(const std::vector<int>& degrees, Rng& rng) {
  const int n = static_cast<int>(degrees.size());
  for (int attempt = 0; attempt < kMaxRestarts; ++attempt) {
    GraphBuilder g(n);
    std::vector<int> free = degrees;
    std::vector<std::pair<int, int>> pool;
    if (!fill_ports(g, free, [](int, int) { return true; }, pool, rng)) continue;
    if (!settle_connectivity(g, rng, attempt)) continue;
    return g.links();
  }
  throw Error(Errc::Infeasible, "could not sample a connected simple graph");
}

std::vector<int> servers_list(int n, int per_switch) {
  require(per_switch >= 0, Errc::InvalidParameter, "servers per switch must be >= 0");
  return std::vector<int>(idx(n), per_switch);
}

}  // namespace

std::string_view family_name(Family family) {
  switch (family) {
    case Family::hypercube: return "hypercube";
    case Family::fattree: return "fattree";
    case Family::bcube: return "bcube";
    case Family::dcell: return "dcell";
    case Family::flattened_butterfly: return "flattened_butterfly";
    case Family::dragonfly: return "dragonfly";
    case Family::hyperx: return "hyperx";
    case Family::jellyfish: return "jellyfish";
    case Family::clustered_random: return "clustered_random";
    case Family::subdivided_expander: return "subdivided_expander";
    case Family::imported: return "imported";
  }
  return "unknown";
}

Network gen_hypercube(int d, int servers_per_switch) {
  require(d >= 1 && d <= 20, Errc::InvalidParameter, "hypercube needs 1 <= d <= 20");
  const int n = 1 << d;
  std::vector<Link> links;
  for (int u = 0; u < n; ++u) {
    for (int b = 0; b < d; ++b) {
      const int v = u ^ (1 << b);
      if (u < v) links.push_back({u, v, 1.0});
    }
  }
  return Network::from_links(n, links, servers_list(n, servers_per_switch));
}

Network gen_fattree(int k) {
  require(k >= 2, Errc::InvalidParameter, "fat-tree needs k >= 2");
  require(k % 2 == 0, Errc::OddK, "fat-tree k must be even");
  const int half = k / 2;
  const int pod_switches = k;  // half edge + half aggregation
  const int core_base = k * pod_switches;
  const int n = core_base + half * half;
  std::vector<Link> links;
  std::vector<int> servers(idx(n), 0);
  for (int pod = 0; pod < k; ++pod) {
    const int edge0 = pod * pod_switches;
    const int agg0 = edge0 + half;
    for (int e = 0; e < half; ++e) {
      servers[idx(edge0 + e)] = half;
      for (int a = 0; a < half; ++a) links.push_back({edge0 + e, agg0 + a, 1.0});
    }
    for (int a = 0; a < half; ++a) {
      for (int c = 0; c < half; ++c) links.push_back({agg0 + a, core_base + a * half + c, 1.0});
    }
  }
  return Network::from_links(n, links, std::move(servers));
}

int bcube_level_switches(int n, int k) { return static_cast<int>((k + 1) * checked_pow(n, k)); }

Network gen_bcube(int n, int k) {
  require(n >= 2 && k >= 0, Errc::InvalidParameter, "BCube needs n >= 2, k >= 0");
  const int per_level = static_cast<int>(checked_pow(n, k));
  const int proxies = static_cast<int>(checked_pow(n, k + 1));
  const int level_switches = (k + 1) * per_level;
  const int total = level_switches + proxies;
  std::vector<Link> links;
  std::vector<int> servers(idx(total), 0);
  for (int addr = 0; addr < proxies; ++addr) {
    const int proxy = level_switches + addr;
    servers[idx(proxy)] = 1;
    int low = 1;  // n^level
    for (int level = 0; level <= k; ++level) {
      // Index of the level switch: the address with digit `level` removed.
      const int sw = (addr / (low * n)) * low + addr % low;
      links.push_back({level * per_level + sw, proxy, 1.0});
      low *= n;
    }
  }
  return Network::from_links(total, links, std::move(servers));
}

int dcell_mini_switches(int n, int k) {
  long long t = n;
  for (int level = 1; level <= k; ++level) t = t * (t + 1);
  return static_cast<int>(t / n);
}

Network gen_dcell(int n, int k) {
  require(n >= 2, Errc::InvalidParameter, "DCell needs n >= 2");
  require(k >= 0, Errc::InvalidParameter, "DCell needs k >= 0");
  require(k <= 2, Errc::UnsupportedLevel, "DCell levels above 2 are not supported");
  // sizes[l] = t_l, servers in a DCell_l.
  std::vector<long long> sizes{n};
  for (int level = 1; level <= k; ++level) sizes.push_back(sizes.back() * (sizes.back() + 1));
  require(sizes.back() <= 1'000'000, Errc::InvalidParameter, "DCell too large");
  const int servers = static_cast<int>(sizes.back());
  const int minis = servers / n;
  const auto proxy = [&](long long uid) { return minis + static_cast<int>(uid); };

  std::vector<Link> links;
  for (int m = 0; m < minis; ++m) {
    for (int s = 0; s < n; ++s) links.push_back({m, proxy(static_cast<long long>(m) * n + s), 1.0});
  }
  // DCell_l = t_{l-1}+1 copies of DCell_{l-1}; copy i's server j-1 links to copy j's server i.
  std::function<void(int, long long)> wire = [&](int level, long long offset) {
    if (level == 0) return;
    const long long sub = sizes[idx(level - 1)];
    const long long copies = sub + 1;
    for (long long i = 0; i < copies; ++i) wire(level - 1, offset + i * sub);
    for (long long i = 0; i < copies; ++i) {
      for (long long j = i + 1; j < copies; ++j) {
        links.push_back({proxy(offset + i * sub + (j - 1)), proxy(offset + j * sub + i), 1.0});
      }
    }
  };
  wire(k, 0);

  std::vector<int> server_map(idx(minis + servers), 0);
  for (int s = 0; s < servers; ++s) server_map[idx(minis + s)] = 1;
  return Network::from_links(minis + servers, links, std::move(server_map));
}

Network gen_hyperx(const std::vector<int>& dims, const std::vector<int>& trunking, int servers_per_switch) {
  require(!dims.empty(), Errc::InvalidParameter, "HyperX needs at least one dimension");
  require(dims.size() == trunking.size(), Errc::InvalidParameter, "HyperX dims and trunking differ in length");
  long long total = 1;
  for (std::size_t i = 0; i < dims.size(); ++i) {
    require(dims[i] >= 2, Errc::InvalidParameter, "HyperX dimension sizes must be >= 2");
    require(trunking[i] >= 1, Errc::InvalidParameter, "HyperX trunking must be >= 1");
    total *= dims[i];
    require(total <= 1'000'000, Errc::InvalidParameter, "HyperX too large");
  }
  const int n = static_cast<int>(total);
  std::vector<Link> links;
  for (int u = 0; u < n; ++u) {
    int stride = 1;
    for (std::size_t i = 0; i < dims.size(); ++i) {
      const int coord = (u / stride) % dims[i];
      for (int value = coord + 1; value < dims[i]; ++value) {
        links.push_back({u, u + (value - coord) * stride, static_cast<double>(trunking[i])});
      }
      stride *= dims[i];
    }
  }
  return Network::from_links(n, links, servers_list(n, servers_per_switch));
}

Network gen_flattened_butterfly(int k, int n, int servers_per_switch) {
  require(k >= 2 && n >= 2, Errc::InvalidParameter, "flattened butterfly needs k >= 2, n >= 2");
  const auto dims = static_cast<std::size_t>(n - 1);
  return gen_hyperx(std::vector<int>(dims, k), std::vector<int>(dims, 1), servers_per_switch);
}

Network gen_dragonfly(int a, int h, int p, int groups) {
  require(a >= 1 && h >= 0 && p >= 0, Errc::InvalidParameter, "dragonfly needs a >= 1, h >= 0, p >= 0");
  require(a * h >= 1, Errc::InvalidParameter, "dragonfly needs a*h >= 1");
  const int g = groups < 0 ? a * h + 1 : groups;
  require(a * h == g - 1, Errc::InfeasibleGlobalWiring,
          "one global link per group pair needs a*h = groups-1");
  std::vector<Link> links;
  const auto router = [a](int group, int r) { return group * a + r; };
  for (int grp = 0; grp < g; ++grp) {
    for (int r = 0; r < a; ++r) {
      for (int s = r + 1; s < a; ++s) links.push_back({router(grp, r), router(grp, s), 1.0});
    }
  }
  for (int i = 0; i < g; ++i) {
    for (int j = i + 1; j < g; ++j) {
      // Group i's links to groups i+1, i+2, ... go round-robin over its routers.
      const int ri = ((j - i - 1 + g) % g) % a;
      const int rj = ((i - j - 1 + g) % g) % a;
      links.push_back({router(i, ri), router(j, rj), 1.0});
    }
  }
  const int n = g * a;
  return Network::from_links(n, links, servers_list(n, p));
}

Network gen_jellyfish(int n, int r, int servers_per_switch, std::uint64_t seed) {
  require(r < n, Errc::Infeasible, "jellyfish degree must be below the switch count");
  require(r >= 2, Errc::InvalidParameter, "jellyfish degree must be >= 2");
  require((static_cast<long long>(n) * r) % 2 == 0, Errc::Infeasible, "n*r must be even");
  Rng rng(seed);
  const auto links = sample_by_link_addition(std::vector<int>(idx(n), r), rng);
  return Network::from_links(n, links, servers_list(n, servers_per_switch));
}

Network gen_same_equipment_random(const Network& net, std::uint64_t seed) {
  validate(net);
  const int n = net.switch_count();
  std::vector<int> degrees = net.degrees();
  if (!graphical(degrees)) throw Error(Errc::DegreeSequenceInfeasible, "degree sequence is not graphical");

  Rng rng(seed);
  for (int attempt = 0; attempt < kMaxRestarts; ++attempt) {
    // Configuration model: shuffle stubs and pair neighbours.
    std::vector<int> stubs;
    for (int u = 0; u < n; ++u) stubs.insert(stubs.end(), idx(degrees[idx(u)]), u);
    rng.shuffle(std::span<int>(stubs));
    GraphBuilder g(n);
    std::vector<int> free(idx(n), 0);
    std::vector<std::pair<int, int>> pool;
    for (std::size_t i = 0; i + 1 < stubs.size(); i += 2) {
      const int u = stubs[i];
      const int v = stubs[i + 1];
      if (u != v && !g.has(u, v)) {
        g.add(u, v);
        pool.emplace_back(std::min(u, v), std::max(u, v));
      } else {
        ++free[idx(u)];
        ++free[idx(v)];
      }
    }
    // Self-loops and multi-edges were rejected; re-place their stubs with swaps.
    if (!fill_ports(g, free, [](int, int) { return true; }, pool, rng)) continue;
    if (!settle_connectivity(g, rng, attempt)) continue;
    const auto links = g.links();
    return Network::from_links(n, links, std::vector<int>(net.servers_per_switch().begin(),
                                                          net.servers_per_switch().end()));
  }
  throw Error(Errc::DegreeSequenceInfeasible, "no connected simple graph found for the degree sequence");
}

Network gen_clustered_random(int n, int alpha, int beta, std::uint64_t seed, int servers_per_switch) {
  require(n >= 4 && n % 2 == 0, Errc::Infeasible, "clustered random graph needs an even n >= 4");
  const int half = n / 2;
  require(alpha >= 0 && beta >= 0, Errc::Infeasible, "degrees must be non-negative");
  require(alpha + beta < half, Errc::Infeasible, "alpha + beta must be below n/2");
  require(alpha < half - 1, Errc::Infeasible, "alpha must leave each cluster non-complete");
  require((static_cast<long long>(half) * alpha) % 2 == 0, Errc::Infeasible, "(n/2)*alpha must be even");
  require(beta > 0, Errc::Disconnected, "beta = 0 leaves the clusters disconnected");

  const auto cluster = [half](int u) { return u < half ? 0 : 1; };
  Rng rng(seed);
  for (int attempt = 0; attempt < kMaxRestarts; ++attempt) {
    GraphBuilder g(n);
    std::vector<int> free(idx(n), alpha);
    std::vector<std::pair<int, int>> intra;
    if (!fill_ports(g, free, [&](int u, int v) { return cluster(u) == cluster(v); }, intra, rng)) continue;
    std::fill(free.begin(), free.end(), beta);
    std::vector<std::pair<int, int>> inter;
    if (!fill_ports(g, free, [&](int u, int v) { return cluster(u) != cluster(v); }, inter, rng)) continue;
    const auto comp = g.components();
    if (*std::max_element(comp.begin(), comp.end()) != 0) continue;
    const auto links = g.links();
    return Network::from_links(n, links, servers_list(n, servers_per_switch));
  }
  throw Error(Errc::Infeasible, "could not sample a connected clustered random graph");
}

Network gen_subdivided_expander(int base_nodes, int d, int p, std::uint64_t seed) {
  require(d >= 1 && p >= 1, Errc::InvalidParameter, "subdivided expander needs d >= 1, p >= 1");
  const Network base = gen_jellyfish(base_nodes, 2 * d, 1, seed);
  if (p == 1) return base;
  std::vector<Link> links;
  int next = base_nodes;
  for (const Link& l : base.links()) {
    int prev = l.u;
    for (int step = 1; step < p; ++step) {
      links.push_back({prev, next, 1.0});
      prev = next++;
    }
    links.push_back({prev, l.v, 1.0});
  }
  std::vector<int> servers(idx(next), 0);
  std::fill(servers.begin(), servers.begin() + base_nodes, 1);
  return Network::from_links(next, links, std::move(servers));
}

// ---------------------------------------------------------------------------
// Spec strings

namespace {

const std::vector<std::pair<std::string_view, Family>>& family_aliases() {
  static const std::vector<std::pair<std::string_view, Family>> table{
      {"hypercube", Family::hypercube},
      {"fattree", Family::fattree},
      {"fat_tree", Family::fattree},
      {"bcube", Family::bcube},
      {"dcell", Family::dcell},
      {"flattened_butterfly", Family::flattened_butterfly},
      {"flatbf", Family::flattened_butterfly},
      {"dragonfly", Family::dragonfly},
      {"hyperx", Family::hyperx},
      {"jellyfish", Family::jellyfish},
      {"clustered_random", Family::clustered_random},
      {"clustered", Family::clustered_random},
      {"subdivided_expander", Family::subdivided_expander},
      {"subdivided", Family::subdivided_expander},
      {"imported", Family::imported},
      {"file", Family::imported},
  };
  return table;
}

int int_param(const TopoSpec& spec, const std::string& key, std::optional<int> fallback = std::nullopt) {
  const auto it = spec.params.find(key);
  if (it == spec.params.end()) {
    if (fallback) return *fallback;
    throw Error(Errc::ParseError, std::string(family_name(spec.family)) + " needs parameter '" + key + "'");
  }
  const auto value = detail::parse_number<int>(it->second);
  if (!value) throw Error(Errc::ParseError, "parameter '" + key + "' must be an integer");
  return *value;
}

std::vector<int> list_param(const TopoSpec& spec, const std::string& key) {
  const auto it = spec.params.find(key);
  if (it == spec.params.end()) {
    throw Error(Errc::ParseError, "hyperx needs parameter '" + key + "'");
  }
  std::vector<int> out;
  std::string_view rest = it->second;
  while (!rest.empty()) {
    const auto cut = rest.find('x');
    const auto value = detail::parse_number<int>(rest.substr(0, cut));
    if (!value) throw Error(Errc::ParseError, "bad list value in '" + key + "'");
    out.push_back(*value);
    if (cut == std::string_view::npos) break;
    rest.remove_prefix(cut + 1);
  }
  return out;
}

std::uint64_t spec_seed(const TopoSpec& spec) {
  const auto it = spec.params.find("seed");
  if (it == spec.params.end()) return spec.seed;
  const auto value = detail::parse_number<std::uint64_t>(it->second);
  if (!value) throw Error(Errc::ParseError, "seed must be a non-negative integer");
  return *value;
}

}  // namespace

std::string TopoSpec::to_string() const {
  std::string out(family_name(family));
  if (family == Family::imported) return "file:" + path;
  char sep = ':';
  for (const auto& [key, value] : params) {
    out += sep;
    out += key + "=" + value;
    sep = ',';
  }
  return out;
}

TopoSpec parse_topo_spec(std::string_view text) {
  text = detail::trim(text);
  const auto colon = text.find(':');
  const std::string_view name = text.substr(0, colon);
  TopoSpec spec;
  const auto& aliases = family_aliases();
  const auto it = std::find_if(aliases.begin(), aliases.end(), [&](const auto& a) { return a.first == name; });
  if (it == aliases.end()) throw Error(Errc::ParseError, "unknown topology family '" + std::string(name) + "'");
  spec.family = it->second;
  if (colon == std::string_view::npos) return spec;
  std::string_view rest = text.substr(colon + 1);
  if (spec.family == Family::imported && name == "file") {
    spec.path = std::string(rest);
    return spec;
  }
  while (!rest.empty()) {
    const auto comma = rest.find(',');
    const std::string_view item = rest.substr(0, comma);
    const auto eq = item.find('=');
    if (eq == std::string_view::npos || eq == 0) {
      throw Error(Errc::ParseError, "expected key=value in '" + std::string(item) + "'");
    }
    spec.params[std::string(item.substr(0, eq))] = std::string(item.substr(eq + 1));
    if (comma == std::string_view::npos) break;
    rest.remove_prefix(comma + 1);
  }
  if (spec.family == Family::imported) {
    const auto p = spec.params.find("path");
    if (p != spec.params.end()) spec.path = p->second;
  }
  return spec;
}

Network build_topology(const TopoSpec& spec, int servers_override) {
  Network net;
  switch (spec.family) {
    case Family::hypercube:
      net = gen_hypercube(int_param(spec, "d"), int_param(spec, "s", 1));
      break;
    case Family::fattree:
      net = gen_fattree(int_param(spec, "k"));
      break;
    case Family::bcube:
      net = gen_bcube(int_param(spec, "n"), int_param(spec, "k"));
      break;
    case Family::dcell:
      net = gen_dcell(int_param(spec, "n"), int_param(spec, "k"));
      break;
    case Family::flattened_butterfly:
      net = gen_flattened_butterfly(int_param(spec, "k"), int_param(spec, "n"), int_param(spec, "s", 1));
      break;
    case Family::dragonfly:
      net = gen_dragonfly(int_param(spec, "a"), int_param(spec, "h"), int_param(spec, "p", 1),
                          int_param(spec, "g", -1));
      break;
    case Family::hyperx:
      net = gen_hyperx(list_param(spec, "dims"), list_param(spec, "trunk"), int_param(spec, "t", 1));
      break;
    case Family::jellyfish:
      net = gen_jellyfish(int_param(spec, "n"), int_param(spec, "r"), int_param(spec, "s", 1), spec_seed(spec));
      break;
    case Family::clustered_random:
      net = gen_clustered_random(int_param(spec, "n"), int_param(spec, "alpha"), int_param(spec, "beta"),
                                 spec_seed(spec), int_param(spec, "s", 1));
      break;
    case Family::subdivided_expander:
      net = gen_subdivided_expander(int_param(spec, "N"), int_param(spec, "d"), int_param(spec, "p"),
                                    spec_seed(spec));
      break;
    case Family::imported: {
      std::ifstream in(spec.path);
      if (!in) throw Error(Errc::ParseError, "cannot open edge list '" + spec.path + "'");
      std::stringstream buffer;
      buffer << in.rdbuf();
      net = import_edge_list(buffer.str(), servers_override >= 0 ? servers_override : 1);
      return net;
    }
  }
  if (servers_override >= 0) {
    std::vector<int> servers(net.servers_per_switch().begin(), net.servers_per_switch().end());
    for (int& s : servers) {
      if (s > 0) s = servers_override;
    }
    net = net.with_servers(std::move(servers));
  }
  return net;
}

}  // namespace topobench
