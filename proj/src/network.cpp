#include "topobench/network.hpp"

#include <algorithm>
#include <numeric>
#include <queue>
#include <sstream>

#include "topobench/detail/format.hpp"

namespace topobench {

Network::Network(int switch_count, std::vector<Edge> edges, std::vector<int> servers_per_switch)
    : switch_count_(switch_count), edges_(std::move(edges)), servers_(std::move(servers_per_switch)) {
  if (switch_count_ < 0) throw Error(Errc::InvalidParameter, "switch count must be >= 0");
  if (static_cast<int>(servers_.size()) != switch_count_) {
    throw Error(Errc::InvalidParameter, "server map must have one entry per switch");
  }
  for (int s : servers_) {
    if (s < 0) throw Error(Errc::InvalidParameter, "server count must be >= 0");
  }
  std::stable_sort(edges_.begin(), edges_.end(), [](const Edge& a, const Edge& b) {
    return a.src != b.src ? a.src < b.src : a.dst < b.dst;
  });

  // CSR adjacency; out-of-range endpoints are left for validate() to report.
  adj_offsets_.assign(static_cast<std::size_t>(switch_count_) + 1, 0);
  for (const Edge& e : edges_) {
    if (e.src >= 0 && e.src < switch_count_) ++adj_offsets_[static_cast<std::size_t>(e.src) + 1];
  }
  std::partial_sum(adj_offsets_.begin(), adj_offsets_.end(), adj_offsets_.begin());
  adj_edges_.resize(static_cast<std::size_t>(adj_offsets_.back()));
  std::vector<int> fill(adj_offsets_.begin(), adj_offsets_.end() - 1);
  for (int i = 0; i < static_cast<int>(edges_.size()); ++i) {
    const Edge& e = edges_[static_cast<std::size_t>(i)];
    if (e.src >= 0 && e.src < switch_count_) adj_edges_[static_cast<std::size_t>(fill[static_cast<std::size_t>(e.src)]++)] = i;
  }

  server_offsets_.assign(static_cast<std::size_t>(switch_count_) + 1, 0);
  for (int u = 0; u < switch_count_; ++u) {
    server_offsets_[static_cast<std::size_t>(u) + 1] = server_offsets_[static_cast<std::size_t>(u)] + servers_[static_cast<std::size_t>(u)];
  }
  total_servers_ = server_offsets_.back();
}

Network Network::from_links(int switch_count, std::span<const Link> links,
                            std::vector<int> servers_per_switch) {
  std::vector<Edge> edges;
  edges.reserve(links.size() * 2);
  for (const Link& l : links) {
    edges.push_back({l.u, l.v, l.capacity});
    edges.push_back({l.v, l.u, l.capacity});
  }
  return Network(switch_count, std::move(edges), std::move(servers_per_switch));
}

Network Network::from_links(int switch_count, std::span<const Link> links, int servers_per_switch) {
  return from_links(switch_count, links,
                    std::vector<int>(static_cast<std::size_t>(std::max(switch_count, 0)), servers_per_switch));
}

std::span<const int> Network::out_edges(NodeId node) const {
  const auto begin = static_cast<std::size_t>(adj_offsets_[static_cast<std::size_t>(node)]);
  const auto end = static_cast<std::size_t>(adj_offsets_[static_cast<std::size_t>(node) + 1]);
  return std::span<const int>(adj_edges_).subspan(begin, end - begin);
}

std::vector<int> Network::degrees() const {
  std::vector<int> out(static_cast<std::size_t>(switch_count_));
  for (NodeId u = 0; u < switch_count_; ++u) out[static_cast<std::size_t>(u)] = degree(u);
  return out;
}

int Network::find_edge(NodeId src, NodeId dst) const {
  for (int e : out_edges(src)) {
    if (edges_[static_cast<std::size_t>(e)].dst == dst) return e;
  }
  return -1;
}

int Network::server_index(ServerId id) const {
  if (id.node < 0 || id.node >= switch_count_ || id.slot < 0 || id.slot >= servers_at(id.node)) {
    throw Error(Errc::NodeOutOfRange, "no server (" + std::to_string(id.node) + "," + std::to_string(id.slot) + ")");
  }
  return server_offsets_[static_cast<std::size_t>(id.node)] + id.slot;
}

ServerId Network::server_at(int index) const {
  if (index < 0 || index >= total_servers_) {
    throw Error(Errc::NodeOutOfRange, "server index " + std::to_string(index));
  }
  const auto it = std::upper_bound(server_offsets_.begin(), server_offsets_.end(), index);
  const auto node = static_cast<NodeId>(std::distance(server_offsets_.begin(), it) - 1);
  return {node, index - server_offsets_[static_cast<std::size_t>(node)]};
}

std::vector<ServerId> Network::servers() const {
  std::vector<ServerId> out;
  out.reserve(static_cast<std::size_t>(total_servers_));
  for (NodeId u = 0; u < switch_count_; ++u) {
    for (int s = 0; s < servers_at(u); ++s) out.push_back({u, s});
  }
  return out;
}

double Network::total_capacity() const {
  double sum = 0;
  for (const Edge& e : edges_) sum += e.capacity;
  return sum;
}

std::vector<Link> Network::links() const {
  std::vector<Link> out;
  for (const Edge& e : edges_) {
    if (e.src < e.dst) out.push_back({e.src, e.dst, e.capacity});
  }
  return out;
}

Network Network::with_servers(std::vector<int> servers_per_switch) const {
  return Network(switch_count_, edges_, std::move(servers_per_switch));
}

Network Network::with_scaled_capacity(double factor) const {
  std::vector<Edge> scaled = edges_;
  for (Edge& e : scaled) e.capacity *= factor;
  return Network(switch_count_, std::move(scaled), servers_);
}

namespace {

std::string edge_name(const Edge& e) {
  return "(" + std::to_string(e.src) + "," + std::to_string(e.dst) + ")";
}

}  // namespace

bool is_connected(const Network& net) {
  if (net.switch_count() <= 1) return true;
  const auto dist = bfs_distances(net, 0);
  return std::none_of(dist.begin(), dist.end(), [](int d) { return d == DistanceMatrix::kUnreachable; });
}

std::optional<Error> find_violation(const Network& net) {
  const auto edges = net.edges();
  for (const Edge& e : edges) {
    if (e.src < 0 || e.src >= net.switch_count() || e.dst < 0 || e.dst >= net.switch_count()) {
      return Error(Errc::NodeOutOfRange, "edge " + edge_name(e));
    }
  }
  for (const Edge& e : edges) {
    if (e.capacity < 0) return Error(Errc::NegativeCapacity, "edge " + edge_name(e));
  }
  for (const Edge& e : edges) {
    if (e.src == e.dst) return Error(Errc::SelfLoop, "edge " + edge_name(e));
  }
  for (std::size_t i = 1; i < edges.size(); ++i) {
    if (edges[i].src == edges[i - 1].src && edges[i].dst == edges[i - 1].dst) {
      return Error(Errc::DuplicateEdge, "edge " + edge_name(edges[i]));
    }
  }
  for (const Edge& e : edges) {
    const int rev = net.find_edge(e.dst, e.src);
    if (rev < 0 || std::abs(net.edge(rev).capacity - e.capacity) > kCapacityTolerance) {
      return Error(Errc::AsymmetricLink, "edge " + edge_name(e) + " lacks an equal-capacity reverse");
    }
  }
  if (!is_connected(net)) return Error(Errc::Disconnected, "switch graph is not connected");
  return std::nullopt;
}

void validate(const Network& net) {
  if (auto err = find_violation(net)) throw *err;
}

int DistanceMatrix::diameter() const {
  int best = 0;
  for (int d : dist_) best = std::max(best, d);
  return best;
}

std::vector<int> bfs_distances(const Network& net, NodeId source) {
  std::vector<int> dist(static_cast<std::size_t>(net.switch_count()), DistanceMatrix::kUnreachable);
  std::queue<NodeId> frontier;
  dist[static_cast<std::size_t>(source)] = 0;
  frontier.push(source);
  while (!frontier.empty()) {
    const NodeId u = frontier.front();
    frontier.pop();
    for (int e : net.out_edges(u)) {
      const NodeId v = net.edge(e).dst;
      if (dist[static_cast<std::size_t>(v)] == DistanceMatrix::kUnreachable) {
        dist[static_cast<std::size_t>(v)] = dist[static_cast<std::size_t>(u)] + 1;
        frontier.push(v);
      }
    }
  }
  return dist;
}

DistanceMatrix all_pairs_shortest_paths(const Network& net) {
  const int n = net.switch_count();
  std::vector<int> dist;
  dist.reserve(static_cast<std::size_t>(n) * static_cast<std::size_t>(n));
  for (NodeId u = 0; u < n; ++u) {
    const auto row = bfs_distances(net, u);
    dist.insert(dist.end(), row.begin(), row.end());
  }
  return DistanceMatrix(n, std::move(dist));
}

double average_path_length(const Network& net) {
  const int n = net.switch_count();
  if (n < 2) return 0.0;
  const auto apsp = all_pairs_shortest_paths(net);
  long long total = 0;
  for (NodeId u = 0; u < n; ++u) {
    for (NodeId v = 0; v < n; ++v) {
      if (u != v) total += apsp(u, v);
    }
  }
  return static_cast<double>(total) / (static_cast<double>(n) * (n - 1));
}

std::string export_edge_list(const Network& net) {
  std::ostringstream out;
  out << "# switches " << net.switch_count() << "\n";
  for (const Link& l : net.links()) {
    out << l.u << ' ' << l.v;
    if (l.capacity != 1.0) out << ' ' << detail::format_double(l.capacity);
    out << '\n';
  }
  for (NodeId u = 0; u < net.switch_count(); ++u) {
    out << "server " << u << ' ' << net.servers_at(u) << '\n';
  }
  return out.str();
}

Network import_edge_list(std::string_view text, int default_servers) {
  std::vector<Edge> edges;
  std::vector<std::pair<NodeId, int>> server_lines;
  NodeId max_id = -1;

  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t eol = std::min(text.find('\n', pos), text.size());
    const std::string_view line = detail::trim(text.substr(pos, eol - pos));
    pos = eol + 1;
    ++line_no;
    if (line.empty() || line.front() == '#') continue;

    std::vector<std::string_view> tokens;
    std::size_t t = 0;
    while (t < line.size()) {
      const std::size_t start = line.find_first_not_of(" \t", t);
      if (start == std::string_view::npos) break;
      const std::size_t end = std::min(line.find_first_of(" \t", start), line.size());
      tokens.push_back(line.substr(start, end - start));
      t = end;
    }
    const auto fail = [&](const std::string& why) {
      return Error(Errc::ParseError, "line " + std::to_string(line_no) + ": " + why);
    };

    if (tokens.front() == "server") {
      if (tokens.size() != 3) throw fail("expected 'server u k'");
      const auto u = detail::parse_number<NodeId>(tokens[1]);
      const auto k = detail::parse_number<int>(tokens[2]);
      if (!u || !k || *u < 0 || *k < 0) throw fail("bad server line");
      server_lines.emplace_back(*u, *k);
      max_id = std::max(max_id, *u);
      continue;
    }
    if (tokens.size() != 2 && tokens.size() != 3) throw fail("expected 'u v [cap]'");
    const auto u = detail::parse_number<NodeId>(tokens[0]);
    const auto v = detail::parse_number<NodeId>(tokens[1]);
    if (!u || !v || *u < 0 || *v < 0) throw fail("bad node id");
    double cap = 1.0;
    if (tokens.size() == 3) {
      const auto c = detail::parse_number<double>(tokens[2]);
      if (!c) throw fail("bad capacity");
      cap = *c;
    }
    edges.push_back({*u, *v, cap});
    edges.push_back({*v, *u, cap});
    max_id = std::max({max_id, *u, *v});
  }

  const int n = max_id + 1;
  std::vector<int> servers(static_cast<std::size_t>(n), default_servers);
  for (const auto& [u, k] : server_lines) servers[static_cast<std::size_t>(u)] = k;
  Network net(n, std::move(edges), std::move(servers));
  validate(net);
  return net;
}

}  // namespace topobench
