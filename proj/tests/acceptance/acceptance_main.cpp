// Acceptance checks: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "oracles/oracles.hpp"
#include "peerwheel/bench.hpp"
#include "peerwheel/gossip_sim.hpp"
#include "peerwheel/random_source.hpp"
#include "peerwheel/sampler.hpp"
#include "peerwheel/stake_registry.hpp"
#include "peerwheel/stake_table.hpp"
#include "peerwheel/stats.hpp"
#include "peerwheel/verify.hpp"
#include "peerwheel/weight_profile.hpp"

#ifndef PEERWHEEL_CLI_PATH
#error "PEERWHEEL_CLI_PATH must name the peerwheel executable"
#endif

using namespace peerwheel;
using Clock = std::chrono::steady_clock;

namespace {

struct Verdict {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& why) {
    if (!ok) {
      pass = false;
      if (!detail.empty()) detail += "; ";
      detail += why;
    }
  }
};

std::string fmt(const char* format, auto... args) {
  char buf[256];
  std::snprintf(buf, sizeof buf, format, args...);
  return buf;
}

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

void budget(Verdict& v, Clock::time_point start, double limit) {
  const double took = seconds_since(start);
  v.require(took < limit, fmt("took %.2f s, limit %.0f s", took, limit));
  if (v.pass) v.detail = fmt("%.2f s", took);
}

Verdict distribution() {
  const auto start = Clock::now();
  Verdict v;
  const StakeTable table({1, 2, 3, 4});
  const std::array<double, 4> p{0.1, 0.2, 0.3, 0.4};
  for (SamplerKind kind : kAllSamplers) {
    const VerifyOutcome out = verify_sampler(table, kind, 1'000'000, 20'240'601);
    for (std::size_t i = 0; i < 4; ++i) {
      const double share = static_cast<double>(out.observed[i]) / 1e6;
      v.require(std::fabs(share - p[i]) <= 0.005, fmt("%s share[%zu]=%.4f", std::string(to_string(kind)).c_str(), i, share));
    }
    v.require(out.fit.p_value > 1e-3, fmt("%s p=%.3g", std::string(to_string(kind)).c_str(), out.fit.p_value));
  }
  budget(v, start, 10.0);
  return v;
}

Verdict locate_equivalence() {
  const auto start = Clock::now();
  Verdict v;
  RandomSource rng(1000);
  std::size_t mismatches = 0;
  for (int t = 0; t < 1000; ++t) {
    const std::size_t n = 1 + rng.uniform(64);
    const WideStake cap = 1 + rng.uniform(4096);
    std::vector<Stake> w(n, 0);
    WideStake total = 0;
    // Spread a random budget over the table so zeros and ties both show up.
    const WideStake target = 1 + rng.uniform(cap);
    while (total < target) {
      const auto bump = std::min<WideStake>(target - total, 1 + rng.uniform(64));
      w[rng.uniform(n)] += static_cast<Stake>(bump);
      total += bump;
    }
    const StakeTable table(w);
    for (WideStake u = 0; u < table.total(); ++u) {
      const std::size_t a = locate_linear(table, u);
      const std::size_t b = locate_binary(table, u);
      if (a != b || a != oracle::wheel_owner(w, u)) ++mismatches;
    }
  }
  v.require(mismatches == 0, fmt("%zu mismatches", mismatches));
  budget(v, start, 5.0);
  return v;
}

Verdict attempt_law() {
  const auto start = Clock::now();
  Verdict v;
  const std::vector<std::pair<std::string, std::vector<Stake>>> tables = {
      {"[1,2,3,4]", {1, 2, 3, 4}},
      {"[1,1,1,1]", {1, 1, 1, 1}},
      {"[1,0,0,0]", {1, 0, 0, 0}},
      {"zipf(1.0) N=100", make_weights(parse_weight_profile("zipf(1.0)"), 100)},
  };
  RandomSource rng(33);
  for (const auto& [name, weights] : tables) {
    const StakeTable table(weights);
    std::uint64_t attempts = 0;
    for (int d = 0; d < 1'000'000; ++d) attempts += select(table, SamplerKind::StochasticAcceptance, rng).attempts;
    const double mean = static_cast<double>(attempts) / 1e6;
    const double want = expected_attempts(table);
    v.require(std::fabs(mean - want) / want <= 0.02, fmt("%s mean %.4f vs %.4f", name.c_str(), mean, want));
  }
  budget(v, start, 10.0);
  return v;
}

Verdict scaling() {
  const auto start = Clock::now();
  Verdict v;
  constexpr std::uint64_t kDraws = 100'000;
  const StakeTable small(std::vector<Stake>(1'000, 1));
  const StakeTable large(std::vector<Stake>(1'000'000, 1));

  // Best of a few repetitions damps scheduler noise on the cheap cells.
  const auto ns = [&](const StakeTable& t, SamplerKind kind, int reps) {
    double best = INFINITY;
    for (int r = 0; r < reps; ++r) best = std::min(best, bench::time_cell(t, kind, kDraws, 1'000, 7 + r).ns_per_selection);
    return best;
  };
  std::map<SamplerKind, double> ratio;
  std::string table;
  for (SamplerKind kind : kAllSamplers) {
    const double lo = ns(small, kind, 3);
    const double hi = ns(large, kind, kind == SamplerKind::Linear ? 1 : 3);
    ratio[kind] = hi / lo;
    table += fmt("%s %.1f->%.1f ns (x%.2f) ", std::string(to_string(kind)).c_str(), lo, hi, ratio[kind]);
  }
  const double linear = ratio[SamplerKind::Linear];
  const double binary = ratio[SamplerKind::Binary];
  const double sa = ratio[SamplerKind::StochasticAcceptance];
  v.require(linear >= 50.0, "linear ratio below 50");
  v.require(sa <= 2.0, "stochastic acceptance ratio above 2");
  v.require(sa < binary && binary < linear, "binary ratio not strictly between");
  budget(v, start, 120.0);
  v.detail = table + "| " + v.detail;
  return v;
}

Verdict zero_exclusion_and_diversity() {
  const auto start = Clock::now();
  Verdict v;
  const std::vector<Stake> w{0, 5, 0, 0, 3, 0, 9, 0};
  const StakeTable table(w);
  RandomSource rng(55);
  for (SamplerKind kind : kAllSamplers) {
    std::size_t hits = 0;
    for (int d = 0; d < 100'000; ++d) hits += w[select(table, kind, rng).index] == 0;
    v.require(hits == 0, fmt("%s picked a zero-stake peer %zu times", std::string(to_string(kind)).c_str(), hits));
  }

  sim::SimConfig c;
  for (int i = 0; i < 10; ++i) {
    c.peers.push_back("p" + std::to_string(i));
    c.stakes.push_back(1);
  }
  c.rounds = 10'000;  // 10 peers x 1 fanout: 1e5 selections
  c.seed = 5;
  const sim::SimReport r = sim::run_simulation(c);
  v.require(r.total_selections == 100'000, "wrong selection total");
  v.require(r.gini < 0.01, fmt("gini %.4f", r.gini));
  v.require(std::fabs(r.shannon_entropy - std::log2(10.0)) <= 0.01, fmt("entropy %.4f", r.shannon_entropy));
  budget(v, start, 5.0);
  return v;
}

Verdict registry_consistency() {
  const auto start = Clock::now();
  Verdict v;
  RandomSource rng(66);
  std::size_t failures = 0;
  for (int seq = 0; seq < 10'000; ++seq) {
    StakeRegistry reg;
    std::map<std::string, Stake> model;
    const std::size_t pool = 1 + rng.uniform(100);
    const int ops = 1 + static_cast<int>(rng.uniform(200));
    for (int op = 0; op < ops; ++op) {
      const std::string id = "p" + std::to_string(rng.uniform(pool));
      if (rng.uniform(3) == 0) {
        reg.remove(id);
        model.erase(id);
      } else {
        const auto stake = static_cast<Stake>(rng.uniform(rng.uniform(2) ? 8 : 1'000'000));
        reg.upsert(id, stake);
        model[id] = stake;
      }
    }
    WideStake total = 0;
    Stake max = 0;
    for (const auto& [_, s] : model) {
      total += s;
      max = std::max(max, s);
    }
    if (total == 0) {
      failures += reg.total() != 0;
      continue;
    }
    const RegistrySnapshot snap = reg.snapshot();
    failures += snap.table.total() != total || snap.table.max_weight() != max || reg.total() != total;
  }
  v.require(failures == 0, fmt("%zu sequences disagree", failures));
  budget(v, start, 5.0);
  return v;
}

std::string run_command(const std::string& command) {
  std::string out;
  FILE* pipe = popen(command.c_str(), "r");
  if (!pipe) return "<popen failed>";
  std::array<char, 4096> buf;
  std::size_t n;
  while ((n = std::fread(buf.data(), 1, buf.size(), pipe)) > 0) out.append(buf.data(), n);
  const int status = pclose(pipe);
  return out + "\n<status " + std::to_string(status) + ">";
}

Verdict determinism() {
  Verdict v;
  const auto dir = std::filesystem::temp_directory_path() / "peerwheel_acceptance";
  std::filesystem::create_directories(dir);
  const auto stakes = (dir / "stakes.csv").string();
  const auto config = (dir / "sim.json").string();
  std::ofstream(stakes) << "A,1\nB,2\nC,3\nD,4\nE,0\n";
  std::ofstream(config) << R"js({"stakes": [5, 1, 0, 3, 8, 2], "rounds": 2000, "fanout": 2, "seed": 77})js";

  const std::string cli = PEERWHEEL_CLI_PATH;
  const std::vector<std::pair<std::string, std::string>> commands = {
      {"select", cli + " select --stakes " + stakes + " --count 5000 --seed 11 2>/dev/null"},
      {"verify", cli + " verify --stakes " + stakes + " --draws 100000 --seed 12"},
      {"simulate", cli + " simulate --config " + config},
  };
  for (const auto& [name, command] : commands) {
    const std::string first = run_command(command);
    const std::string second = run_command(command);
    v.require(first.find("<status 0>") != std::string::npos, name + " exited nonzero");
    v.require(first.size() > 20, name + " produced no output");
    v.require(first == second, name + " output differs between runs");
  }
  std::filesystem::remove_all(dir);
  if (v.pass) v.detail = "select, verify and simulate byte-identical across runs";
  return v;
}

Verdict special_function() {
  Verdict v;
  double worst = 0.0;
  for (std::size_t dof : {1, 3, 9, 15}) {
    for (double x : {0.5, 1.0, 4.0, 16.0, 30.0}) {
      const double diff = std::fabs(stats::chi_square_survival(x, dof) - oracle::chi_square_tail_by_quadrature(x, dof));
      worst = std::max(worst, diff);
      v.require(diff <= 1e-6, fmt("dof %zu x %.1f off by %.2e", dof, x, diff));
    }
  }
  if (v.pass) v.detail = fmt("max abs error %.2e", worst);
  return v;
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Verdict()>>> criteria = {
      {"distribution correctness", distribution},
      {"locate-kernel equivalence", locate_equivalence},
      {"attempt-count law", attempt_law},
      {"scaling shape", scaling},
      {"zero exclusion and diversity", zero_exclusion_and_diversity},
      {"registry consistency", registry_consistency},
      {"determinism", determinism},
      {"special-function accuracy", special_function},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Verdict v;
    try {
      v = criteria[i].second();
    } catch (const std::exception& e) {
      v.pass = false;
      v.detail = std::string("exception: ") + e.what();
    }
    failed += !v.pass;
    std::cout << (v.pass ? "PASS" : "FAIL") << " [" << i + 1 << "] " << criteria[i].first << ": " << v.detail
              << std::endl;
  }
  std::cout << (criteria.size() - failed) << "/" << criteria.size() << " criteria passed" << std::endl;
  return failed == 0 ? 0 : 1;
}
