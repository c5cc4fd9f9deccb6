#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "peerwheel/random_source.hpp"
#include "peerwheel/stake_table.hpp"

namespace peerwheel {

enum class SamplerKind {
  Linear,
  Binary,
  StochasticAcceptance,
};

inline constexpr SamplerKind kAllSamplers[] = {
    SamplerKind::Linear, SamplerKind::Binary, SamplerKind::StochasticAcceptance};

/// CLI token: "linear", "binary" or "sa".
std::string_view to_string(SamplerKind kind) noexcept;
std::optional<SamplerKind> parse_sampler(std::string_view token) noexcept;

inline constexpr std::uint64_t kDefaultAttemptCap = std::uint64_t{1} << 20;

struct Selection {
  std::size_t index = 0;
  /// Acceptance-loop iterations; always 1 for the search-based samplers.
  std::uint64_t attempts = 1;

  friend bool operator==(const Selection&, const Selection&) = default;
};

/// p_i = w_i / total for every peer.
std::vector<double> exact_probabilities(const StakeTable& table);

/// Smallest i with prefix[i] > u, scanning from the left. u must lie in
/// [0, total); throws Error(OutOfRange) otherwise.
std::size_t locate_linear(const StakeTable& table, WideStake u);

/// Same contract as locate_linear, by binary search over the prefix sums.
std::size_t locate_binary(const StakeTable& table, WideStake u);

/// Acceptance test for a uniformly chosen candidate: true iff r < w_candidate.
/// With r uniform on [0, max_weight) this accepts with probability exactly
/// w_candidate / max_weight.
bool accept(const StakeTable& table, std::size_t candidate, Stake r);

/// Draws one peer with probability w_i / total.
///
/// Linear and Binary draw u uniform on [0, total) and locate it. The
/// stochastic-acceptance sampler repeats {uniform candidate, uniform r on
/// [0, max_weight), accept?} and throws Error(AttemptCapExceeded) once
/// attempt_cap candidates have been rejected.
Selection select(const StakeTable& table, SamplerKind kind, RandomSource& rng,
                 std::uint64_t attempt_cap = kDefaultAttemptCap);

/// Fills `out` with independent draws. Yields the same peers as repeated
/// select() calls on the same generator, but stochastic acceptance draws its
/// candidates a few steps ahead and prefetches their weights, so large
/// tables are not bound by one cache miss per draw. The generator ends up
/// advanced past the unused lookahead.
void select_many(const StakeTable& table, SamplerKind kind, RandomSource& rng, std::span<Selection> out,
                 std::uint64_t attempt_cap = kDefaultAttemptCap);

/// Mean of the geometric attempt count: N * max_weight / total.
double expected_attempts(const StakeTable& table);

}  // namespace peerwheel
