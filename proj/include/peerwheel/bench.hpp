#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <vector>

#include "json.hpp"
#include "peerwheel/sampler.hpp"
#include "peerwheel/weight_profile.hpp"

namespace peerwheel::bench {

inline constexpr std::uint64_t kMinDrawsPerSize = 10'000;

struct BenchSpec {
  std::vector<std::size_t> sizes;
  WeightProfile weight_profile;
  std::vector<SamplerKind> samplers;
  std::uint64_t draws_per_size = 100'000;
  std::uint64_t seed = 0;
  std::uint64_t warmup_draws = 1'000;
};

struct BenchRow {
  std::size_t n = 0;
  SamplerKind sampler = SamplerKind::Linear;
  double ns_per_selection = 0.0;
  double mean_attempts = 0.0;
};

/// Sizes strictly ascending, at least one sampler, draws_per_size >= 1e4.
void validate(const BenchSpec& spec);

/// {"sizes": [...], "weight_profile": "uniform", "samplers": ["linear", ...],
///  "draws_per_size": n, "seed": s, "warmup_draws": w}
BenchSpec parse_bench_spec(const nlohmann::json& doc);

/// Times one (table, sampler) cell: warmup draws, then `draws` timed draws.
BenchRow time_cell(const StakeTable& table, SamplerKind kind, std::uint64_t draws, std::uint64_t warmup,
                   std::uint64_t seed);

/// Every (size, sampler) cell in order, single-threaded.
std::vector<BenchRow> run_bench(const BenchSpec& spec);

/// Header `N,sampler,ns_per_selection,mean_attempts`.
void write_csv(const std::vector<BenchRow>& rows, std::ostream& out);
std::vector<BenchRow> parse_csv(std::istream& in);
nlohmann::json to_json(const std::vector<BenchRow>& rows);

}  // namespace peerwheel::bench
