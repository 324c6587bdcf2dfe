#include "topobench/benchmark.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <future>
#include <limits>
#include <numeric>
#include <sstream>

#include <boost/math/distributions/students_t.hpp>
#include <json.hpp>

#include "topobench/detail/format.hpp"
#include "topobench/rng.hpp"

namespace topobench {

namespace {

using Clock = std::chrono::steady_clock;
using Json = nlohmann::ordered_json;

double mean(const std::vector<double>& xs) {
  return xs.empty() ? 0.0 : std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
}

double throughput(const Network& net, const TrafficMatrix& tm, const SolveOptions& options) {
  return solve(net, tm, options.solver, options.epsilon).t;
}

// Runs fn(i) for i in [0, count) concurrently; results come back in index order.
template <typename Fn>
auto fan_out(int count, Fn fn) {
  using Result = decltype(fn(0));
  std::vector<std::future<Result>> futures;
  futures.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) futures.push_back(std::async(std::launch::async, fn, i));
  std::vector<Result> out;
  out.reserve(futures.size());
  for (auto& f : futures) out.push_back(f.get());
  return out;
}

Json finite_or_null(double x) { return std::isfinite(x) ? Json(x) : Json(nullptr); }

}  // namespace

std::string TmSpec::to_string() const {
  switch (kind) {
    case TmKind::A2A: return "a2a";
    case TmKind::LM: return "lm";
    case TmKind::RM: return seed ? "rm:seed=" + std::to_string(*seed) : "rm";
    case TmKind::custom: return "file:" + path;
  }
  return "a2a";
}

TmSpec parse_tm_spec(std::string_view text) {
  TmSpec spec;
  const auto colon = text.find(':');
  const std::string_view head = text.substr(0, colon);
  const std::string_view rest = colon == std::string_view::npos ? std::string_view{} : text.substr(colon + 1);
  if (head == "file") {
    if (rest.empty()) throw Error(Errc::ParseError, "file: TM spec needs a path");
    spec.kind = TmKind::custom;
    spec.path = std::string(rest);
    return spec;
  }
  if (head == "a2a") {
    spec.kind = TmKind::A2A;
  } else if (head == "lm") {
    spec.kind = TmKind::LM;
  } else if (head == "rm") {
    spec.kind = TmKind::RM;
  } else {
    throw Error(Errc::ParseError, "unknown TM spec '" + std::string(text) + "'");
  }
  if (colon == std::string_view::npos) return spec;
  if (spec.kind != TmKind::RM || rest.substr(0, 5) != "seed=") {
    throw Error(Errc::ParseError, "unexpected TM parameters '" + std::string(rest) + "'");
  }
  const auto seed = detail::parse_number<std::uint64_t>(rest.substr(5));
  if (!seed) throw Error(Errc::ParseError, "bad RM seed '" + std::string(rest.substr(5)) + "'");
  spec.seed = *seed;
  return spec;
}

TrafficMatrix build_tm(const Network& net, const TmSpec& spec, std::uint64_t fallback_seed) {
  switch (spec.kind) {
    case TmKind::A2A: return tm_all_to_all(net);
    case TmKind::RM: return tm_random_matching(net, spec.seed.value_or(fallback_seed));
    case TmKind::LM: return tm_longest_matching(net).tm;
    case TmKind::custom: break;
  }
  std::ifstream in(spec.path);
  if (!in) throw Error(Errc::ParseError, "cannot read TM file '" + spec.path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return import_tm(buffer.str());
}

double ci95_half_width(const std::vector<double>& samples) {
  if (samples.size() < 2) return 0.0;
  const double m = mean(samples);
  double ss = 0;
  for (double x : samples) ss += (x - m) * (x - m);
  const double n = static_cast<double>(samples.size());
  const double sd = std::sqrt(ss / (n - 1));
  const boost::math::students_t dist(n - 1);
  return boost::math::quantile(dist, 0.975) * sd / std::sqrt(n);
}

BenchmarkRecord relative_throughput(const TopoSpec& topo, const TmSpec& tm, int iterations, std::uint64_t seed,
                                    const SolveOptions& options) {
  if (iterations < 1) throw Error(Errc::InvalidParameter, "iterations must be at least 1");
  const auto start = Clock::now();
  const Network net = build_topology(topo, options.servers_per_switch);
  BenchmarkRecord rec;
  rec.topo = topo.to_string();
  rec.tm = tm.to_string();
  rec.seed = seed;
  rec.t_topology = throughput(net, build_tm(net, tm, derive_seed(seed, 0)), options);
  // Iteration i: random graph from derive_seed(seed, i + 1); RM re-sampled on it.
  rec.t_random = fan_out(iterations, [&](int i) {
    const std::uint64_t s = derive_seed(seed, static_cast<std::uint64_t>(i) + 1);
    const Network random = gen_same_equipment_random(net, s);
    TmSpec local = tm;
    if (local.kind == TmKind::RM) local.seed.reset();
    return throughput(random, build_tm(random, local, derive_seed(s, 1)), options);
  });
  rec.t_random_mean = mean(rec.t_random);
  rec.relative_throughput = rec.t_topology / rec.t_random_mean;
  const double h = ci95_half_width(rec.t_random);
  rec.ci_lo = rec.t_topology / (rec.t_random_mean + h);
  rec.ci_hi = rec.t_random_mean > h ? rec.t_topology / (rec.t_random_mean - h)
                                    : std::numeric_limits<double>::infinity();
  rec.runtime_ms = std::chrono::duration<double, std::milli>(Clock::now() - start).count();
  return rec;
}

OrderingRecord tm_ordering_experiment(const TopoSpec& topo, int rm_samples, std::uint64_t seed,
                                      const SolveOptions& options) {
  if (rm_samples < 1) throw Error(Errc::InvalidParameter, "need at least one RM sample");
  OrderingRecord rec;
  rec.topo = topo.to_string();
  rec.seed = seed;
  rec.rm_samples = rm_samples;
  const Network base = build_topology(topo, options.servers_per_switch);
  rec.t_a2a = throughput(base, tm_all_to_all(base), options);
  rec.t_lm = throughput(base, tm_longest_matching(base).tm, options);
  rec.lower_bound = rec.t_a2a / 2;
  rec.norm_a2a = rec.t_a2a / rec.lower_bound;
  rec.norm_lm = rec.t_lm / rec.lower_bound;

  const auto rm_mean = [&](int servers, std::uint64_t stream, double& norm) {
    const Network net = build_topology(topo, servers);
    const double bound = throughput(net, tm_all_to_all(net), options) / 2;
    const auto ts = fan_out(rm_samples, [&](int i) {
      return throughput(net, tm_random_matching(net, derive_seed(stream, static_cast<std::uint64_t>(i))), options);
    });
    norm = mean(ts) / bound;
    return mean(ts);
  };
  rec.t_rm5 = rm_mean(5, derive_seed(seed, 5), rec.norm_rm5);
  rec.t_rm1 = rm_mean(1, derive_seed(seed, 1), rec.norm_rm1);
  return rec;
}

LowerBoundReport lower_bound_check(const Network& net, int trials, std::uint64_t seed, const SolveOptions& options) {
  LowerBoundReport rep;
  const FlowSolution a2a = solve(net, tm_all_to_all(net), options.solver, options.epsilon);
  rep.t_a2a = a2a.t;
  const auto sols = fan_out(trials, [&](int i) {
    return solve(net, tm_random_hose(net, derive_seed(seed, static_cast<std::uint64_t>(i))), options.solver,
                 options.epsilon);
  });
  rep.min_ratio = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < sols.size(); ++i) {
    // Only a proven shortfall counts: the TM's certified upper bound against
    // the feasible A2A value.
    if (sols[i].t_upper < a2a.t / 2 - 1e-6) {
      throw Error(Errc::BoundViolated, "hose TM " + std::to_string(i) + " reaches only " +
                                           detail::format_double(sols[i].t_upper) + " < " +
                                           detail::format_double(a2a.t / 2));
    }
    rep.ratios.push_back(sols[i].t / a2a.t);
    rep.min_ratio = std::min(rep.min_ratio, rep.ratios.back());
  }
  if (rep.ratios.empty()) rep.min_ratio = 1.0;
  return rep;
}

CutFlowRecord cut_vs_flow(const TopoSpec& topo, std::uint64_t seed, const SolveOptions& options, long long brute_cap) {
  const Network net = build_topology(topo, options.servers_per_switch);
  const TrafficMatrix lm = tm_longest_matching(net).tm;
  CutFlowRecord rec;
  rec.topo = topo.to_string();
  rec.t_lm = throughput(net, lm, options);
  const BestCut cut = best_cut(net, &lm, brute_cap, seed);
  rec.best_cut_sparsity = cut.best.score();
  rec.winning_heuristic = cut.best.heuristic;
  if (rec.best_cut_sparsity < rec.t_lm - 1e-7) {
    throw Error(Errc::CutBelowFlow, rec.topo + ": cut " + detail::format_double(rec.best_cut_sparsity) +
                                        " below flow " + detail::format_double(rec.t_lm));
  }
  rec.cut_equals_flow = std::abs(rec.best_cut_sparsity - rec.t_lm) <= 1e-6;
  return rec;
}

SeparationReport separation_experiment(int n, int alpha, int beta, int base_nodes, int d, int p,
                                       const std::vector<std::uint64_t>& seeds, const SolveOptions& options,
                                       long long brute_cap) {
  SeparationReport rep;
  rep.n = n;
  rep.alpha = alpha;
  rep.beta = beta;
  rep.base_nodes = base_nodes;
  rep.d = d;
  rep.p = p;
  const auto one = [&](int i) {
    SeparationSample s;
    s.seed = seeds[static_cast<std::size_t>(i)];
    const Network a = gen_clustered_random(n, alpha, beta, s.seed, 1);
    const Network b_bare = gen_subdivided_expander(base_nodes, d, p, s.seed);
    // Uniform demand among every switch of B, path switches included.
    const Network b = b_bare.with_servers(std::vector<int>(static_cast<std::size_t>(b_bare.switch_count()), 1));
    s.t_a = throughput(a, tm_all_to_all(a), options);
    s.t_b = throughput(b, tm_all_to_all(b), options);
    s.phi_a = best_cut(a, nullptr, brute_cap, s.seed).best.uniform_sparsity;
    s.phi_b = best_cut(b, nullptr, brute_cap, s.seed).best.uniform_sparsity;
    s.flipped = s.phi_a < s.phi_b && s.t_a > s.t_b;
    return std::make_tuple(s, a.switch_count(), b.switch_count());
  };
  for (const auto& [s, na, nb] : fan_out(static_cast<int>(seeds.size()), one)) {
    rep.samples.push_back(s);
    rep.switches_a = na;
    rep.switches_b = nb;
    rep.flips += s.flipped ? 1 : 0;
  }
  return rep;
}

std::string record_json(const BenchmarkRecord& r) {
  Json j;
  j["topo"] = r.topo;
  j["tm"] = r.tm;
  j["seed"] = r.seed;
  j["t"] = r.t_topology;
  j["t_random"] = r.t_random;
  j["t_random_mean"] = r.t_random_mean;
  j["relative"] = r.relative_throughput;
  j["ci_lo"] = finite_or_null(r.ci_lo);
  j["ci_hi"] = finite_or_null(r.ci_hi);
  j["runtime_ms"] = r.runtime_ms;
  return j.dump();
}

std::string record_csv_header() { return "topo,tm,seed,t,t_random_mean,relative,ci_lo,ci_hi,runtime_ms"; }

std::string record_csv(const BenchmarkRecord& r) {
  // Topology specs contain commas, so text fields are quoted.
  const auto quote = [](const std::string& s) { return '"' + s + '"'; };
  std::ostringstream out;
  out << quote(r.topo) << ',' << quote(r.tm) << ',' << r.seed << ',' << detail::format_double(r.t_topology) << ','
      << detail::format_double(r.t_random_mean) << ',' << detail::format_double(r.relative_throughput) << ','
      << detail::format_double(r.ci_lo) << ',' << detail::format_double(r.ci_hi) << ','
      << detail::format_double(r.runtime_ms);
  return out.str();
}

std::string ordering_json(const OrderingRecord& r) {
  Json j;
  j["topo"] = r.topo;
  j["seed"] = r.seed;
  j["rm_samples"] = r.rm_samples;
  j["t_a2a"] = r.t_a2a;
  j["t_rm5"] = r.t_rm5;
  j["t_rm1"] = r.t_rm1;
  j["t_lm"] = r.t_lm;
  j["lower_bound"] = r.lower_bound;
  j["normalized"] = {{"a2a", r.norm_a2a}, {"rm5", r.norm_rm5}, {"rm1", r.norm_rm1}, {"lm", r.norm_lm}};
  return j.dump();
}

std::string lower_bound_json(const LowerBoundReport& r) {
  Json j;
  j["t_a2a"] = r.t_a2a;
  j["min_ratio"] = r.min_ratio;
  j["ratios"] = r.ratios;
  return j.dump();
}

std::string cutflow_json(const CutFlowRecord& r) {
  Json j;
  j["topo"] = r.topo;
  j["t_lm"] = r.t_lm;
  j["best_cut_sparsity"] = r.best_cut_sparsity;
  j["winning_heuristic"] = heuristic_name(r.winning_heuristic);
  j["cut_equals_flow"] = r.cut_equals_flow;
  return j.dump();
}

std::string separation_json(const SeparationReport& r) {
  Json j;
  j["graph_a"] = {{"n", r.n}, {"alpha", r.alpha}, {"beta", r.beta}, {"switches", r.switches_a}};
  j["graph_b"] = {{"N", r.base_nodes}, {"d", r.d}, {"p", r.p}, {"switches", r.switches_b}};
  Json samples = Json::array();
  for (const SeparationSample& s : r.samples) {
    samples.push_back({{"seed", s.seed}, {"t_a", s.t_a}, {"phi_a", s.phi_a}, {"t_b", s.t_b}, {"phi_b", s.phi_b},
                       {"flipped", s.flipped}});
  }
  j["samples"] = samples;
  j["flips"] = r.flips;
  return j.dump();
}

}  // namespace topobench
