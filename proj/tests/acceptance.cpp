// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "helpers.hpp"
#include "topobench/benchmark.hpp"
#include "topobench/cuts.hpp"
#include "topobench/throughput.hpp"
#include "topobench/topologies.hpp"

using namespace topobench;
using namespace testing_support;

namespace {

struct Verdict {
  bool ok = true;
  std::ostringstream detail;

  void require(bool cond, const std::string& what) {
    if (!cond) {
      ok = false;
      detail << "[failed: " << what << "] ";
    }
  }
};

std::string fmt(double x) {
  std::ostringstream s;
  s.precision(10);
  s << x;
  return s.str();
}

// 1. Exact throughput on the hand-derived instances.
void exact_values(Verdict& v) {
  const Network h3 = gen_hypercube(3);
  const std::vector<std::tuple<std::string, Network, TrafficMatrix, double>> cases{
      {"C4/A2A", cycle(4), tm_all_to_all(cycle(4)), 2.0},
      {"C4/LM", cycle(4), tm_longest_matching(cycle(4)).tm, 1.0},
      {"K4/A2A", complete(4), tm_all_to_all(complete(4)), 4.0},
      {"Q3/LM", h3, tm_longest_matching(h3).tm, 1.0},
      {"Q3/A2A", h3, tm_all_to_all(h3), 2.0},
  };
  for (const auto& [name, net, tm, expected] : cases) {
    const auto start = std::chrono::steady_clock::now();
    const double t = solve_exact(net, tm).t;
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    v.detail << name << "=" << fmt(t) << " ";
    v.require(std::abs(t - expected) <= 1e-6, name + " value");
    v.require(secs < 1.0, name + " took " + fmt(secs) + "s");
  }
}

// 2. No hose TM falls below half the A2A throughput.
void half_a2a_bound(Verdict& v) {
  double worst = 1e300;
  int trials = 0;
  for (std::uint64_t s = 0; s < 5; ++s) {
    const int n = 8 + 2 * static_cast<int>(s);  // 8..16 switches
    const Network net = gen_jellyfish(n, 3 + static_cast<int>(s % 2), 1, 100 + s);
    const LowerBoundReport rep = lower_bound_check(net, 10, 200 + s);
    worst = std::min(worst, rep.min_ratio);
    trials += static_cast<int>(rep.ratios.size());
  }
  v.detail << "TMs=" << trials << " min ratio=" << fmt(worst) << " ";
  v.require(trials >= 50, "at least 50 TMs");
  v.require(worst >= 0.5 - 1e-6, "ratio >= 0.5");
  const Network h3 = gen_hypercube(3);
  const double lm = solve_exact(h3, tm_longest_matching(h3).tm).t / solve_exact(h3, tm_all_to_all(h3)).t;
  v.detail << "Q3 LM ratio=" << fmt(lm);
  v.require(std::abs(lm - 0.5) <= 1e-6, "hypercube LM ratio is 0.5");
}

// 3. The sparsest LM cut found never undercuts the LM throughput.
void cut_above_flow(Verdict& v) {
  const std::vector<std::string> specs{
      "hypercube:d=3",
      "fattree:k=4",
      "bcube:n=2,k=1",
      "dcell:n=2,k=1",
      "flattened_butterfly:k=3,n=2",
      "dragonfly:a=2,h=1,p=1",
      "hyperx:dims=2x3,trunk=1x1",
      "jellyfish:n=8,r=3",
      "clustered_random:n=12,alpha=2,beta=1",
      "subdivided_expander:N=8,d=2,p=2",
  };
  for (const std::string& text : specs) {
    try {
      const CutFlowRecord r = cut_vs_flow(parse_topo_spec(text), 1);
      v.require(r.best_cut_sparsity >= r.t_lm - 1e-7, text + " cut below flow");
      if (text == "fattree:k=4") {
        v.detail << "fattree cut=" << fmt(r.best_cut_sparsity) << " flow=" << fmt(r.t_lm) << " ";
        v.require(std::abs(r.best_cut_sparsity - r.t_lm) <= 1e-6, "fat-tree equality");
      }
    } catch (const Error& e) {
      v.require(false, text + ": " + e.what());
    }
  }
  v.detail << specs.size() << " families";
}

// 4. Best cut equals the exhaustive optimum; the sweep is within 2x.
void cut_oracle(Verdict& v) {
  int instances = 0, sweep_misses = 0, mismatches = 0;
  double worst_sweep = 0;
  for (std::uint64_t seed = 0; seed < 36; ++seed) {
    const int n = 4 + static_cast<int>(seed % 11);  // 4..14
    const Network net = random_connected(n, static_cast<int>(seed % 7), 500 + seed);
    const TrafficMatrix tm = tm_random_hose(net, seed);
    for (const TrafficMatrix* t : {static_cast<const TrafficMatrix*>(nullptr), &tm}) {
      const double truth = brute_sparsest(net, t);
      const BestCut best = best_cut(net, t);
      if (!best.best.exhaustive && best.best.heuristic == Heuristic::brute) ++mismatches;
      if (std::abs(best.best.score() - truth) > 1e-9 * std::max(1.0, truth)) ++mismatches;
    }
    const double truth = brute_sparsest(net, nullptr);
    const double sweep = eigenvector_sweep(net).uniform_sparsity;
    worst_sweep = std::max(worst_sweep, sweep / truth);
    if (sweep > 2 * truth + 1e-12) ++sweep_misses;
    ++instances;
  }
  v.detail << "graphs=" << instances << " mismatches=" << mismatches << " worst sweep/opt=" << fmt(worst_sweep);
  v.require(mismatches == 0, "best cut equals oracle");
  v.require(sweep_misses == 0, "sweep within 2x");
}

// 5. Balanced cuts of the hypercube.
void hypercube_bisection(Verdict& v) {
  for (int d : {2, 3, 4}) {
    const double c = min_bisection(gen_hypercube(d)).crossing_capacity;
    v.detail << "d=" << d << ":" << fmt(c) << " ";
    v.require(c == static_cast<double>(1 << (d - 1)), "d=" + std::to_string(d));
  }
}

// 6. Assignment solver against permutation enumeration.
void matching_oracle(Verdict& v) {
  Rng rng(31337);
  int checked = 0;
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 1 + static_cast<int>(rng.below(8));
    WeightMatrix w(static_cast<std::size_t>(n), std::vector<double>(static_cast<std::size_t>(n)));
    for (auto& row : w)
      for (double& x : row) x = static_cast<double>(rng.below(50));
    std::vector<int> perm(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) perm[static_cast<std::size_t>(i)] = i;
    double best = -1;
    do {
      double sum = 0;
      for (int i = 0; i < n; ++i) sum += w[static_cast<std::size_t>(i)][static_cast<std::size_t>(perm[static_cast<std::size_t>(i)])];
      best = std::max(best, sum);
    } while (std::next_permutation(perm.begin(), perm.end()));
    v.require(max_weight_perfect_matching(w).total_weight == best, "trial " + std::to_string(trial));
    ++checked;
  }
  v.detail << "matrices=" << checked;
}

// 7. Approximate solver within epsilon of the exact value.
void approx_contract(Verdict& v) {
  double worst[2] = {0, 0};
  const double eps[2] = {0.05, 0.01};
  for (std::uint64_t s = 0; s < 20; ++s) {
    const int n = 10 + 2 * static_cast<int>(s % 6);  // 10..20
    const Network net = gen_jellyfish(n, 3, 1, 900 + s);
    const TrafficMatrix tm = s % 2 ? tm_longest_matching(net).tm : tm_all_to_all(net);
    const double exact = solve_exact(net, tm).t;
    for (int i = 0; i < 2; ++i) {
      const double approx = solve_approx(net, tm, eps[i]).t;
      const double rel = std::abs(approx - exact) / exact;
      worst[i] = std::max(worst[i], rel);
      v.require(rel <= eps[i], "instance " + std::to_string(s) + " eps " + fmt(eps[i]));
    }
  }
  v.detail << "instances=20 worst rel err: eps=0.05 -> " << fmt(worst[0]) << ", eps=0.01 -> " << fmt(worst[1]);
}

// 8. A2A >= RM(5) >= RM(1) >= LM >= 1 after normalizing by A2A/2.
void tm_ordering(Verdict& v) {
  for (const std::string& text :
       {"hypercube:d=4", "jellyfish:n=32,r=4,seed=1", "fattree:k=4", "flattened_butterfly:k=4,n=3"}) {
    const OrderingRecord r = tm_ordering_experiment(parse_topo_spec(text), 10, 0);
    v.detail << text << " (" << fmt(r.norm_a2a) << ", " << fmt(r.norm_rm5) << ", " << fmt(r.norm_rm1) << ", "
             << fmt(r.norm_lm) << ") ";
    const double slack = 0.98;
    v.require(r.norm_a2a >= slack * r.norm_rm5 && r.norm_rm5 >= slack * r.norm_rm1 &&
                  r.norm_rm1 >= slack * r.norm_lm,
              text + " chain");
    for (double x : {r.norm_a2a, r.norm_rm5, r.norm_rm1, r.norm_lm}) v.require(x >= 1 - 1e-6, text + " floor");
  }
}

// 9. Graph A has the sparser cut yet the higher throughput.
void separation(Verdict& v) {
  std::vector<std::uint64_t> seeds;
  for (std::uint64_t i = 0; i < 5; ++i) seeds.push_back(derive_seed(0, i));
  const SeparationReport rep = separation_experiment(52, 5, 1, 8, 2, 2, seeds);
  for (const SeparationSample& s : rep.samples)
    v.detail << "(phiA=" << fmt(s.phi_a) << " phiB=" << fmt(s.phi_b) << " tA=" << fmt(s.t_a) << " tB=" << fmt(s.t_b)
             << ") ";
  v.detail << "A: n=52 alpha=5 beta=1, B: N=8 d=2 p=2, flips=" << rep.flips << "/" << rep.samples.size();
  v.require(2 * rep.flips > static_cast<int>(rep.samples.size()), "majority of seeds flip");
}

std::string capture(const std::string& command) {
  std::array<char, 4096> buf{};
  std::string out;
  std::unique_ptr<FILE, int (*)(FILE*)> pipe(popen(command.c_str(), "r"), pclose);
  if (!pipe) return "<popen failed>";
  std::size_t got;
  while ((got = std::fread(buf.data(), 1, buf.size(), pipe.get())) > 0) out.append(buf.data(), got);
  return out;
}

// 10. Every CLI command gives identical bytes on a second run.
void determinism(Verdict& v) {
  const std::string cli = TOPOBENCH_CLI;
  const std::vector<std::string> commands{
      "gen --topo jellyfish:n=20,r=3 --seed 5",
      "tm --topo jellyfish:n=20,r=3 --tm rm --seed 5",
      "tm --topo hypercube:d=3 --tm lm",
      "throughput --topo jellyfish:n=16,r=3 --tm rm --seed 5",
      "throughput --topo jellyfish:n=16,r=3 --tm a2a --solver approx --eps 0.05 --seed 5",
      "cut --topo jellyfish:n=16,r=3 --tm lm --seed 5",
      "bench --topo fattree:k=4 --tm a2a --iters 10 --seed 7",
      "bench --topo hypercube:d=3 --tm rm --iters 5 --seed 7 --output csv",
      "ordering --topo hypercube:d=3 --iters 3 --seed 2",
      "cutflow --topo fattree:k=4 --topo hypercube:d=3 --seed 2",
      "separation --a-nodes 16 --alpha 3 --beta 1 --b-nodes 6 --b-degree 1 --b-path 2 --iters 2 --seed 2",
  };
  int same = 0;
  for (const std::string& c : commands) {
    const std::string full = cli + " " + c + " 2>&1";
    const std::string a = capture(full), b = capture(full);
    v.require(!a.empty() && a == b, c);
    v.require(a.find("\"error\"") == std::string::npos, c + " errored");
    if (a == b) ++same;
  }
  v.detail << same << "/" << commands.size() << " commands byte-identical";
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    std::string name;
    double limit_s;
    std::function<void(Verdict&)> fn;
  };
  const std::vector<Criterion> criteria{
      {1, "exact small-instance throughputs", 5, exact_values},
      {2, "hose TMs keep half the A2A throughput", 120, half_a2a_bound},
      {3, "cut >= flow on every family", 300, cut_above_flow},
      {4, "cut heuristics vs exhaustive oracle", 300, cut_oracle},
      {5, "hypercube bisection 2^(d-1)", 60, hypercube_bisection},
      {6, "assignment solver vs enumeration", 30, matching_oracle},
      {7, "approximate solver within epsilon", 300, approx_contract},
      {8, "TM ordering chain", 900, tm_ordering},
      {9, "cut/throughput separation", 600, separation},
      {10, "CLI determinism", 600, determinism},
  };
  int failed = 0;
  for (const Criterion& c : criteria) {
    Verdict v;
    const auto start = std::chrono::steady_clock::now();
    try {
      c.fn(v);
    } catch (const std::exception& e) {
      v.require(false, std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    v.require(secs < c.limit_s, "runtime limit " + fmt(c.limit_s) + "s");
    if (!v.ok) ++failed;
    std::cout << (v.ok ? "PASS" : "FAIL") << " criterion " << c.id << " (" << c.name << ", " << fmt(secs) << "s): "
              << v.detail.str() << std::endl;
  }
  std::cout << (failed ? "FAILED " : "ALL PASSED ") << (10 - failed) << "/10" << std::endl;
  return failed ? 1 : 0;
}
