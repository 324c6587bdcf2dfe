#include <doctest.h>

#include <algorithm>
#include <map>
#include <set>

#include "helpers.hpp"
#include "topobench/topologies.hpp"

using namespace topobench;

namespace {

Errc error_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return Errc::SolverFailure;
}

bool all_degrees(const Network& net, int d) {
  const auto deg = net.degrees();
  return std::all_of(deg.begin(), deg.end(), [&](int x) { return x == d; });
}

std::multiset<int> degree_multiset(const Network& net) {
  const auto deg = net.degrees();
  return {deg.begin(), deg.end()};
}

double capacity_out(const Network& net, NodeId u) {
  double c = 0;
  for (int e : net.out_edges(u)) c += net.edge(e).capacity;
  return c;
}

}  // namespace

TEST_CASE("hypercube") {
  const Network h3 = gen_hypercube(3);
  CHECK(h3.switch_count() == 8);
  CHECK(h3.edge_count() == 24);
  CHECK(gen_hypercube(1).edge_count() == 2);
  CHECK(all_degrees(gen_hypercube(4), 4));
  for (const Edge& e : h3.edges()) CHECK(__builtin_popcount(static_cast<unsigned>(e.src ^ e.dst)) == 1);
}

TEST_CASE("fat-tree") {
  const Network ft4 = gen_fattree(4);
  CHECK(ft4.switch_count() == 20);
  CHECK(ft4.total_servers() == 16);
  const Network ft2 = gen_fattree(2);
  CHECK(ft2.switch_count() == 5);
  CHECK(ft2.total_servers() == 2);
  // Cores come last and have one link per pod.
  for (int core = 16; core < 20; ++core) CHECK(ft4.degree(core) == 4);
  for (int u = 0; u < 20; ++u) CHECK(ft4.degree(u) == 4 - (ft4.servers_at(u) > 0 ? 2 : 0));
  CHECK(error_of([] { gen_fattree(3); }) == Errc::OddK);
  const Network ft6 = gen_fattree(6);
  CHECK(ft6.switch_count() == 45);
  CHECK(ft6.total_servers() == 54);
}

TEST_CASE("BCube with server proxies") {
  const Network b21 = gen_bcube(2, 1);
  CHECK(bcube_level_switches(2, 1) == 4);
  CHECK(b21.switch_count() == 8);
  CHECK(b21.total_servers() == 4);
  const Network b41 = gen_bcube(4, 1);
  CHECK(bcube_level_switches(4, 1) == 8);
  CHECK(b41.total_servers() == 16);
  for (const auto& [n, k] : {std::pair{2, 1}, {4, 1}, {3, 2}}) {
    const Network net = gen_bcube(n, k);
    const int levels = bcube_level_switches(n, k);
    for (int u = levels; u < net.switch_count(); ++u) {
      CHECK(net.degree(u) == k + 1);
      CHECK(net.servers_at(u) == 1);
    }
    for (int u = 0; u < levels; ++u) {
      CHECK(net.servers_at(u) == 0);
      CHECK(net.degree(u) == n);
    }
  }
}

TEST_CASE("DCell server counts follow t_k = t_{k-1}(t_{k-1}+1)") {
  CHECK(gen_dcell(2, 1).total_servers() == 6);
  CHECK(gen_dcell(4, 1).total_servers() == 20);
  CHECK(gen_dcell(2, 2).total_servers() == 42);
  CHECK(gen_dcell(3, 2).total_servers() == 156);
  const Network d0 = gen_dcell(2, 0);
  CHECK(dcell_mini_switches(2, 0) == 1);
  CHECK(d0.total_servers() == 2);
  CHECK(error_of([] { gen_dcell(2, 3); }) == Errc::UnsupportedLevel);
  // Proxies: one link to their mini switch plus at most one per level.
  const Network d = gen_dcell(3, 1);
  for (int u = dcell_mini_switches(3, 1); u < d.switch_count(); ++u) CHECK(d.degree(u) == 2);
}

TEST_CASE("flattened butterfly") {
  CHECK(gen_flattened_butterfly(2, 4) == gen_hypercube(3));
  const Network fb = gen_flattened_butterfly(4, 3);
  CHECK(fb.switch_count() == 16);
  CHECK(all_degrees(fb, 6));
  CHECK(gen_flattened_butterfly(3, 2) == testing_support::complete(3));
}

TEST_CASE("dragonfly") {
  const Network big = gen_dragonfly(4, 2, 2);
  CHECK(big.switch_count() == 36);
  CHECK(big.total_servers() == 72);
  CHECK(all_degrees(big, 3 + 2));
  const Network small = gen_dragonfly(2, 1, 1);
  CHECK(small.switch_count() == 6);
  CHECK(small.total_servers() == 6);
  CHECK(all_degrees(small, 2));
  CHECK(error_of([] { gen_dragonfly(2, 1, 1, 5); }) == Errc::InfeasibleGlobalWiring);
  // Exactly one global link per group pair.
  std::map<std::pair<int, int>, int> global;
  for (const Link& l : big.links()) {
    const int gu = l.u / 4, gv = l.v / 4;
    if (gu != gv) ++global[{std::min(gu, gv), std::max(gu, gv)}];
  }
  CHECK(global.size() == 36);
  for (const auto& [pair, count] : global) CHECK(count == 1);
}

TEST_CASE("HyperX") {
  CHECK(gen_hyperx({2, 2, 2}, {1, 1, 1}, 1) == gen_hypercube(3));
  CHECK(gen_hyperx({4}, {1}, 1) == testing_support::complete(4));
  const Network hx = gen_hyperx({3, 3}, {2, 1}, 1);
  CHECK(hx.switch_count() == 9);
  for (int u = 0; u < 9; ++u) CHECK(capacity_out(hx, u) == doctest::Approx(6.0));
}

TEST_CASE("jellyfish") {
  const Network jf = gen_jellyfish(10, 3, 1, 7);
  CHECK(jf.links().size() == 15);
  CHECK(all_degrees(jf, 3));
  CHECK(is_connected(jf));
  CHECK(gen_jellyfish(4, 3, 1, 99) == testing_support::complete(4));
  CHECK(gen_jellyfish(20, 3, 1, 5) == gen_jellyfish(20, 3, 1, 5));
  CHECK(export_edge_list(gen_jellyfish(30, 5, 2, 11)) == export_edge_list(gen_jellyfish(30, 5, 2, 11)));
  CHECK(error_of([] { gen_jellyfish(4, 4, 1, 0); }) == Errc::Infeasible);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const Network net = gen_jellyfish(16, 4, 1, seed);
    CHECK_NOTHROW(validate(net));
    CHECK(all_degrees(net, 4));
  }
}

TEST_CASE("same-equipment random graph preserves degrees and servers") {
  for (const Network& net : {gen_hypercube(3), gen_fattree(4), gen_dragonfly(2, 2, 1), gen_bcube(2, 1)}) {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      const Network r = gen_same_equipment_random(net, seed);
      CHECK_NOTHROW(validate(r));
      CHECK(r.degrees() == net.degrees());
      CHECK(std::equal(r.servers_per_switch().begin(), r.servers_per_switch().end(),
                       net.servers_per_switch().begin(), net.servers_per_switch().end()));
      CHECK(degree_multiset(r) == degree_multiset(net));
    }
  }
  CHECK(gen_same_equipment_random(gen_fattree(4), 3) == gen_same_equipment_random(gen_fattree(4), 3));
}

TEST_CASE("clustered random graph") {
  const Network a = gen_clustered_random(8, 2, 1, 3);
  CHECK(all_degrees(a, 3));
  int crossing = 0;
  for (const Link& l : a.links()) crossing += (l.u < 4) != (l.v < 4) ? 1 : 0;
  CHECK(crossing == 4);
  CHECK(error_of([] { gen_clustered_random(8, 2, 0, 1); }) == Errc::Disconnected);
  CHECK(error_of([] { gen_clustered_random(8, 3, 0, 1); }) == Errc::Infeasible);
  CHECK(error_of([] { gen_clustered_random(9, 2, 1, 1); }) == Errc::Infeasible);

  const Network big = gen_clustered_random(48, 5, 1, 9);
  CHECK_NOTHROW(validate(big));
  for (int u = 0; u < 48; ++u) {
    int intra = 0, inter = 0;
    for (int e : big.out_edges(u)) ((big.edge(e).dst < 24) == (u < 24) ? intra : inter)++;
    CHECK(intra == 5);
    CHECK(inter == 1);
  }
}

TEST_CASE("subdivided expander") {
  const Network b = gen_subdivided_expander(8, 2, 2, 1);
  CHECK(b.switch_count() == 24);
  CHECK(b.total_servers() == 8);
  for (int u = 8; u < 24; ++u) {
    CHECK(b.degree(u) == 2);
    CHECK(b.servers_at(u) == 0);
  }
  CHECK(gen_subdivided_expander(8, 2, 1, 1) == gen_jellyfish(8, 4, 1, 1));
  CHECK(gen_subdivided_expander(8, 3, 3, 2).switch_count() == 8 + 24 * 2);
}

TEST_CASE("every generator output validates and links are symmetric") {
  const std::vector<Network> nets{
      gen_hypercube(4),          gen_fattree(4),          gen_bcube(3, 1),
      gen_dcell(2, 2),           gen_flattened_butterfly(3, 3), gen_dragonfly(3, 1, 2),
      gen_hyperx({2, 3}, {2, 1}, 2), gen_jellyfish(12, 3, 1, 4), gen_clustered_random(12, 3, 1, 4),
      gen_subdivided_expander(6, 1, 3, 4),
  };
  for (const Network& net : nets) {
    CHECK_NOTHROW(validate(net));
    CHECK(net.edge_count() % 2 == 0);
    for (const Edge& e : net.edges()) {
      const int back = net.find_edge(e.dst, e.src);
      REQUIRE(back >= 0);
      CHECK(net.edge(back).capacity == e.capacity);
    }
  }
}

TEST_CASE("topology spec strings") {
  const TopoSpec spec = parse_topo_spec("jellyfish:n=20,r=3,s=1");
  CHECK(spec.family == Family::jellyfish);
  CHECK(spec.params.at("n") == "20");
  CHECK(parse_topo_spec(spec.to_string()) == spec);
  CHECK(build_topology(parse_topo_spec("hypercube:d=3")) == gen_hypercube(3));
  CHECK(build_topology(parse_topo_spec("fattree:k=4"), 5).total_servers() == 40);
  CHECK(build_topology(parse_topo_spec("hyperx:dims=3x3,trunk=2x1,t=1")) == gen_hyperx({3, 3}, {2, 1}, 1));

  TopoSpec seeded = parse_topo_spec("jellyfish:n=12,r=3");
  seeded.seed = 5;
  CHECK(build_topology(seeded) == gen_jellyfish(12, 3, 1, 5));
  CHECK(build_topology(parse_topo_spec("jellyfish:n=12,r=3,seed=6")) == gen_jellyfish(12, 3, 1, 6));

  CHECK(error_of([] { parse_topo_spec("moebius:n=3"); }) == Errc::ParseError);
  CHECK(error_of([] { parse_topo_spec("hypercube:d"); }) == Errc::ParseError);
  CHECK(error_of([] { build_topology(parse_topo_spec("hypercube:x=3")); }) == Errc::ParseError);
}
