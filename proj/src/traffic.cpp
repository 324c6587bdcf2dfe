#include "topobench/traffic.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <sstream>

#include "topobench/detail/format.hpp"
#include "topobench/rng.hpp"

namespace topobench {

namespace {

std::size_t idx(int i) { return static_cast<std::size_t>(i); }

void require_servers(const Network& net) {
  if (net.total_servers() == 0) throw Error(Errc::NoServers, "network has no servers");
  if (net.total_servers() == 1) throw Error(Errc::SingleServer, "network has a single server");
}

bool pair_less(const Demand& a, const Demand& b) {
  return a.src != b.src ? a.src < b.src : a.dst < b.dst;
}

}  // namespace

std::string_view tm_kind_name(TmKind kind) {
  switch (kind) {
    case TmKind::A2A: return "a2a";
    case TmKind::RM: return "rm";
    case TmKind::LM: return "lm";
    case TmKind::custom: return "custom";
  }
  return "custom";
}

TrafficMatrix::TrafficMatrix(TmKind kind, std::vector<Demand> demands) : kind_(kind) {
  std::stable_sort(demands.begin(), demands.end(), pair_less);
  for (const Demand& d : demands) {
    if (!demands_.empty() && demands_.back().src == d.src && demands_.back().dst == d.dst) {
      demands_.back().amount += d.amount;
    } else {
      demands_.push_back(d);
    }
  }
}

double TrafficMatrix::total() const {
  double sum = 0;
  for (const Demand& d : demands_) sum += d.amount;
  return sum;
}

double TrafficMatrix::at(ServerId src, ServerId dst) const {
  const Demand probe{src, dst, 0};
  const auto it = std::lower_bound(demands_.begin(), demands_.end(), probe, pair_less);
  if (it != demands_.end() && it->src == src && it->dst == dst) return it->amount;
  return 0.0;
}

TrafficMatrix tm_all_to_all(const Network& net) {
  if (net.total_servers() < 2) {
    throw Error(Errc::NoServers, "all-to-all needs at least 2 servers");
  }
  const auto servers = net.servers();
  const double share = 1.0 / static_cast<double>(servers.size());
  std::vector<Demand> demands;
  demands.reserve(servers.size() * (servers.size() - 1));
  for (const ServerId& v : servers) {
    for (const ServerId& w : servers) {
      if (v != w) demands.push_back({v, w, share});
    }
  }
  return TrafficMatrix(TmKind::A2A, std::move(demands));
}

TrafficMatrix tm_random_matching(const Network& net, std::uint64_t seed) {
  require_servers(net);
  const int n = net.total_servers();
  Rng rng(seed);
  std::vector<int> perm(idx(n));
  // Rejection sampling of uniform permutations yields a uniform derangement.
  while (true) {
    std::iota(perm.begin(), perm.end(), 0);
    rng.shuffle(std::span<int>(perm));
    bool fixed_point = false;
    for (int i = 0; i < n && !fixed_point; ++i) fixed_point = perm[idx(i)] == i;
    if (!fixed_point) break;
  }
  std::vector<Demand> demands;
  demands.reserve(idx(n));
  for (int i = 0; i < n; ++i) demands.push_back({net.server_at(i), net.server_at(perm[idx(i)]), 1.0});
  return TrafficMatrix(TmKind::RM, std::move(demands));
}

LongestMatching tm_longest_matching(const Network& net) {
  require_servers(net);
  const auto apsp = all_pairs_shortest_paths(net);
  const auto servers = net.servers();
  const std::size_t n = servers.size();
  WeightMatrix weights(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      weights[i][j] = i == j ? 0.0 : apsp(servers[i].node, servers[j].node);
    }
  }
  LongestMatching out;
  out.matching = max_weight_perfect_matching(weights);
  std::vector<Demand> demands;
  for (std::size_t i = 0; i < n; ++i) {
    const auto j = static_cast<std::size_t>(out.matching.target[i]);
    if (j != i) demands.push_back({servers[i], servers[j], 1.0});
  }
  out.tm = TrafficMatrix(TmKind::LM, std::move(demands));
  return out;
}

TrafficMatrix tm_random_hose(const Network& net, std::uint64_t seed) {
  require_servers(net);
  const auto n = static_cast<std::size_t>(net.total_servers());
  Rng rng(seed);
  std::vector<double> m(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i != j) m[i * n + j] = rng.unit() + 1e-12;
    }
  }
  std::vector<double> rows(n), cols(n);
  const auto sums = [&] {
    std::fill(rows.begin(), rows.end(), 0.0);
    std::fill(cols.begin(), cols.end(), 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        rows[i] += m[i * n + j];
        cols[j] += m[i * n + j];
      }
    }
  };
  for (int round = 0; round < 200; ++round) {
    sums();
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) m[i * n + j] /= rows[i];
    }
    sums();
    double spread = 0;
    for (std::size_t j = 0; j < n; ++j) {
      spread = std::max(spread, std::abs(cols[j] - 1.0));
      for (std::size_t i = 0; i < n; ++i) m[i * n + j] /= cols[j];
    }
    if (spread < 1e-12) break;
  }
  sums();
  const double peak = std::max(*std::max_element(rows.begin(), rows.end()),
                               *std::max_element(cols.begin(), cols.end()));
  std::vector<Demand> demands;
  demands.reserve(n * (n - 1));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i != j) {
        demands.push_back({net.server_at(static_cast<int>(i)), net.server_at(static_cast<int>(j)),
                           m[i * n + j] / peak});
      }
    }
  }
  return TrafficMatrix(TmKind::custom, std::move(demands));
}

std::optional<Error> find_hose_violation(const TrafficMatrix& tm) {
  std::map<ServerId, double> out_sum;
  std::map<ServerId, double> in_sum;
  for (const Demand& d : tm.demands()) {
    if (d.src == d.dst) {
      return Error(Errc::SelfDemand, "demand from server (" + std::to_string(d.src.node) + "," +
                                         std::to_string(d.src.slot) + ") to itself");
    }
    if (d.amount < 0) return Error(Errc::HoseViolation, "negative demand");
    out_sum[d.src] += d.amount;
    in_sum[d.dst] += d.amount;
  }
  for (const auto* sums : {&out_sum, &in_sum}) {
    for (const auto& [server, sum] : *sums) {
      if (sum > 1.0 + kHoseTolerance) {
        return Error(Errc::HoseViolation, "server (" + std::to_string(server.node) + "," +
                                              std::to_string(server.slot) + ") " +
                                              (sums == &out_sum ? "sends " : "receives ") +
                                              detail::format_double(sum));
      }
    }
  }
  return std::nullopt;
}

void validate_hose(const TrafficMatrix& tm) {
  if (auto err = find_hose_violation(tm)) throw *err;
}

std::vector<double> switch_demands(const Network& net, const TrafficMatrix& tm) {
  const auto n = static_cast<std::size_t>(net.switch_count());
  std::vector<double> out(n * n, 0.0);
  for (const Demand& d : tm.demands()) {
    // Throws for servers the network does not have.
    net.server_index(d.src);
    net.server_index(d.dst);
    out[static_cast<std::size_t>(d.src.node) * n + static_cast<std::size_t>(d.dst.node)] += d.amount;
  }
  return out;
}

std::string export_tm(const TrafficMatrix& tm) {
  std::ostringstream out;
  for (const Demand& d : tm.demands()) {
    out << d.src.node << ' ' << d.src.slot << ' ' << d.dst.node << ' ' << d.dst.slot << ' '
        << detail::format_double(d.amount) << '\n';
  }
  return out.str();
}

TrafficMatrix import_tm(std::string_view text) {
  std::vector<Demand> demands;
  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto trimmed = detail::trim(line);
    if (trimmed.empty() || trimmed.front() == '#') continue;
    std::istringstream fields{std::string(trimmed)};
    std::string tok[5];
    std::string extra;
    if (!(fields >> tok[0] >> tok[1] >> tok[2] >> tok[3] >> tok[4]) || (fields >> extra)) {
      throw Error(Errc::ParseError, "line " + std::to_string(line_no) + ": expected 5 fields");
    }
    const auto su = detail::parse_number<int>(tok[0]);
    const auto ss = detail::parse_number<int>(tok[1]);
    const auto du = detail::parse_number<int>(tok[2]);
    const auto ds = detail::parse_number<int>(tok[3]);
    const auto amount = detail::parse_number<double>(tok[4]);
    if (!su || !ss || !du || !ds || !amount || *su < 0 || *ss < 0 || *du < 0 || *ds < 0 || *amount < 0) {
      throw Error(Errc::ParseError, "line " + std::to_string(line_no) + ": bad field");
    }
    demands.push_back({{*su, *ss}, {*du, *ds}, *amount});
  }
  return TrafficMatrix(TmKind::custom, std::move(demands));
}

}  // namespace topobench
