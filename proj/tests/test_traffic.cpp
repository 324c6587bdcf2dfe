#include <doctest.h>

#include <algorithm>
#include <map>
#include <numeric>
#include <set>

#include "helpers.hpp"
#include "topobench/topologies.hpp"

using namespace topobench;
using namespace testing_support;

namespace {

double brute_max_assignment(const WeightMatrix& w) {
  std::vector<int> perm(w.size());
  std::iota(perm.begin(), perm.end(), 0);
  double best = -1e300;
  do {
    double sum = 0;
    for (std::size_t i = 0; i < perm.size(); ++i) sum += w[i][static_cast<std::size_t>(perm[i])];
    best = std::max(best, sum);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

// Lexicographically first optimal permutation by enumeration.
std::vector<int> brute_lex_argmax(const WeightMatrix& w) {
  std::vector<int> perm(w.size());
  std::iota(perm.begin(), perm.end(), 0);
  const double best = brute_max_assignment(w);
  do {
    double sum = 0;
    for (std::size_t i = 0; i < perm.size(); ++i) sum += w[i][static_cast<std::size_t>(perm[i])];
    if (sum == best) return perm;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return {};
}

double matching_weight(const Network& net, const TrafficMatrix& tm) {
  const auto d = all_pairs_shortest_paths(net);
  double sum = 0;
  for (const Demand& dem : tm.demands()) sum += d(dem.src.node, dem.dst.node) * dem.amount;
  return sum;
}

}  // namespace

TEST_CASE("all-to-all") {
  const Network c4 = cycle(4);
  const TrafficMatrix tm = tm_all_to_all(c4);
  CHECK(tm.size() == 12);
  CHECK(tm.at({0, 0}, {1, 0}) == doctest::Approx(0.25));
  CHECK(tm.at({0, 0}, {0, 0}) == 0.0);
  CHECK_NOTHROW(validate_hose(tm));
  CHECK_THROWS_AS(tm_all_to_all(cycle(4).with_servers({1, 0, 0, 0})), Error);
}

TEST_CASE("random matching is a fixed-point-free permutation") {
  const Network net = gen_hypercube(3, 2);
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const TrafficMatrix tm = tm_random_matching(net, seed);
    CHECK(tm.size() == 16);
    std::set<ServerId> sources, targets;
    for (const Demand& d : tm.demands()) {
      CHECK(d.src != d.dst);
      CHECK(d.amount == 1.0);
      sources.insert(d.src);
      targets.insert(d.dst);
    }
    CHECK(sources.size() == 16);
    CHECK(targets.size() == 16);
    CHECK_NOTHROW(validate_hose(tm));
  }
  CHECK(tm_random_matching(net, 4) == tm_random_matching(net, 4));
  try {
    tm_random_matching(cycle(4).with_servers({1, 0, 0, 0}), 0);
    FAIL("single server accepted");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::SingleServer);
  }
  try {
    tm_random_matching(cycle(4).with_servers({0, 0, 0, 0}), 0);
    FAIL("no servers accepted");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::NoServers);
  }
}

TEST_CASE("longest matching on the hypercube pairs antipodes") {
  const Network h3 = gen_hypercube(3);
  const LongestMatching lm = tm_longest_matching(h3);
  CHECK(lm.matching.total_weight == 24.0);
  for (const Demand& d : lm.tm.demands()) CHECK(d.dst.node == (d.src.node ^ 7));
  CHECK(tm_longest_matching(cycle(4)).matching.total_weight == 8.0);
}

TEST_CASE("longest matching on the fat-tree is all distance 4") {
  for (int k : {4, 6}) {
    const Network ft = gen_fattree(k);
    const auto d = all_pairs_shortest_paths(ft);
    const LongestMatching lm = tm_longest_matching(ft);
    CHECK(lm.tm.size() == static_cast<std::size_t>(ft.total_servers()));
    for (const Demand& dem : lm.tm.demands()) CHECK(d(dem.src.node, dem.dst.node) == 4);
  }
}

TEST_CASE("longest matching beats random matchings") {
  for (std::uint64_t g = 0; g < 3; ++g) {
    const Network net = gen_jellyfish(14, 3, 1, g);
    const double lm = matching_weight(net, tm_longest_matching(net).tm);
    for (std::uint64_t seed = 0; seed < 100; ++seed) CHECK(lm >= matching_weight(net, tm_random_matching(net, seed)));
  }
}

TEST_CASE("assignment solver matches permutation enumeration") {
  Rng rng(2024);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 1 + static_cast<int>(rng.below(8));
    WeightMatrix w(static_cast<std::size_t>(n), std::vector<double>(static_cast<std::size_t>(n)));
    // Small integer weights produce many ties, exercising the canonical choice.
    for (auto& row : w)
      for (double& x : row) x = static_cast<double>(rng.below(trial % 2 ? 4 : 100));
    const Matching m = max_weight_perfect_matching(w);
    CHECK(m.total_weight == brute_max_assignment(w));
    CHECK(m.target == brute_lex_argmax(w));
  }
}

TEST_CASE("assignment solver edge cases") {
  CHECK(max_weight_perfect_matching({}).target.empty());
  CHECK_THROWS_AS(max_weight_perfect_matching({{1, 2}, {3}}), Error);
  const Matching neg = max_weight_perfect_matching({{-5, -1}, {-1, -5}});
  CHECK(neg.total_weight == -2.0);
}

TEST_CASE("random hose TMs saturate the hose constraint") {
  const Network net = gen_jellyfish(10, 3, 2, 1);
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const TrafficMatrix tm = tm_random_hose(net, seed);
    CHECK_NOTHROW(validate_hose(tm));
    std::map<ServerId, double> out, in;
    for (const Demand& d : tm.demands()) {
      CHECK(d.src != d.dst);
      out[d.src] += d.amount;
      in[d.dst] += d.amount;
    }
    double peak = 0;
    for (const auto& [s, v] : out) peak = std::max(peak, v);
    for (const auto& [s, v] : in) peak = std::max(peak, v);
    CHECK(peak == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("hose validation") {
  CHECK_NOTHROW(validate_hose(tm_all_to_all(complete(4))));
  const auto code = [](const TrafficMatrix& tm) {
    const auto err = find_hose_violation(tm);
    return err ? err->code() : Errc::SolverFailure;
  };
  CHECK(code(TrafficMatrix(TmKind::custom, {{{0, 0}, {1, 0}, 1.5}})) == Errc::HoseViolation);
  CHECK(code(TrafficMatrix(TmKind::custom, {{{0, 0}, {0, 0}, 0.1}})) == Errc::SelfDemand);
  CHECK(code(TrafficMatrix(TmKind::custom, {{{0, 0}, {1, 0}, 0.6}, {{2, 0}, {1, 0}, 0.6}})) == Errc::HoseViolation);
}

TEST_CASE("switch demand aggregation keeps local traffic on the diagonal") {
  const Network net = path(2).with_servers({2, 1});
  const TrafficMatrix tm = tm_all_to_all(net);
  const auto d = switch_demands(net, tm);
  CHECK(d[0] == doctest::Approx(2.0 / 3.0));  // (0,0)->(0,1) and back
  CHECK(d[1] == doctest::Approx(2.0 / 3.0));
  CHECK(d[2] == doctest::Approx(2.0 / 3.0));
  CHECK(d[3] == 0.0);
  double total = 0;
  for (double x : d) total += x;
  CHECK(total == doctest::Approx(tm.total()));
}

TEST_CASE("TM file round trip") {
  const Network net = gen_hypercube(2, 2);
  for (const TrafficMatrix& tm : {tm_all_to_all(net), tm_random_matching(net, 3), tm_random_hose(net, 3)}) {
    const TrafficMatrix back = import_tm(export_tm(tm));
    REQUIRE(back.size() == tm.size());
    for (std::size_t i = 0; i < tm.size(); ++i) {
      CHECK(back.demands()[i].src == tm.demands()[i].src);
      CHECK(back.demands()[i].dst == tm.demands()[i].dst);
      CHECK(back.demands()[i].amount == tm.demands()[i].amount);
    }
  }
  CHECK_THROWS_AS(import_tm("0 0 1 0\n"), Error);
  CHECK_THROWS_AS(import_tm("0 0 1 0 -1\n"), Error);
}
