#include "peerwheel/sampler.hpp"

#include <algorithm>
#include <string>

#include "peerwheel/error.hpp"

namespace peerwheel {

std::string_view to_string(SamplerKind kind) noexcept {
  switch (kind) {
    case SamplerKind::Linear: return "linear";
    case SamplerKind::Binary: return "binary";
    case SamplerKind::StochasticAcceptance: return "sa";
  }
  return "unknown";
}

std::optional<SamplerKind> parse_sampler(std::string_view token) noexcept {
  if (token == "linear") return SamplerKind::Linear;
  if (token == "binary") return SamplerKind::Binary;
  if (token == "sa" || token == "stochastic_acceptance") return SamplerKind::StochasticAcceptance;
  return std::nullopt;
}

std::vector<double> exact_probabilities(const StakeTable& table) {
  const auto total = static_cast<double>(table.total());
  std::vector<double> probs;
  probs.reserve(table.size());
  for (Stake w : table.weights()) probs.push_back(static_cast<double>(w) / total);
  return probs;
}

namespace {

void check_point(const StakeTable& table, WideStake u) {
  if (u >= table.total()) {
    throw Error(ErrorCode::OutOfRange,
                "point " + std::to_string(u) + " outside [0, " + std::to_string(table.total()) + ")");
  }
}

}  // namespace

std::size_t locate_linear(const StakeTable& table, WideStake u) {
  check_point(table, u);
  // prefix.back() == total > u, so the scan stops inside the array.
  const WideStake* p = table.prefix().data();
  std::size_t i = 0;
  while (p[i] <= u) ++i;
  return i;
}

std::size_t locate_binary(const StakeTable& table, WideStake u) {
  check_point(table, u);
  const auto prefix = table.prefix();
  return static_cast<std::size_t>(std::upper_bound(prefix.begin(), prefix.end(), u) - prefix.begin());
}

bool accept(const StakeTable& table, std::size_t candidate, Stake r) {
  if (candidate >= table.size()) {
    throw Error(ErrorCode::OutOfRange, "candidate " + std::to_string(candidate) + " outside table of " +
                                           std::to_string(table.size()) + " peers");
  }
  if (r >= table.max_weight()) {
    throw Error(ErrorCode::OutOfRange,
                "acceptance draw " + std::to_string(r) + " outside [0, " + std::to_string(table.max_weight()) + ")");
  }
  return r < table.weights()[candidate];
}

Selection select(const StakeTable& table, SamplerKind kind, RandomSource& rng, std::uint64_t attempt_cap) {
  switch (kind) {
    case SamplerKind::Linear:
      return {locate_linear(table, rng.uniform(table.total())), 1};
    case SamplerKind::Binary:
      return {locate_binary(table, rng.uniform(table.total())), 1};
    case SamplerKind::StochasticAcceptance: {
      const auto weights = table.weights();
      const std::uint64_t n = weights.size();
      const Stake w_max = table.max_weight();
      for (std::uint64_t attempt = 1; attempt <= attempt_cap; ++attempt) {
        const auto candidate = static_cast<std::size_t>(rng.uniform(n));
        const auto r = static_cast<Stake>(rng.uniform(w_max));
        if (r < weights[candidate]) return {candidate, attempt};
      }
      throw Error(ErrorCode::AttemptCapExceeded,
                  "stochastic acceptance rejected " + std::to_string(attempt_cap) + " candidates in a row");
    }
  }
  throw Error(ErrorCode::InvalidConfig, "unknown sampler kind");
}

void select_many(const StakeTable& table, SamplerKind kind, RandomSource& rng, std::span<Selection> out,
                 std::uint64_t attempt_cap) {
  if (kind != SamplerKind::StochasticAcceptance) {
    for (Selection& s : out) s = select(table, kind, rng, attempt_cap);
    return;
  }
  if (out.empty()) return;

  // Ring of pending (candidate, r) pairs, consumed in the order drawn.
  constexpr std::size_t kLookahead = 16;
  const auto weights = table.weights();
  const std::uint64_t n = weights.size();
  const Stake w_max = table.max_weight();
  std::size_t candidates[kLookahead];
  Stake thresholds[kLookahead];
  const auto refill = [&](std::size_t slot) {
    candidates[slot] = static_cast<std::size_t>(rng.uniform(n));
    thresholds[slot] = static_cast<Stake>(rng.uniform(w_max));
    __builtin_prefetch(weights.data() + candidates[slot]);
  };
  for (std::size_t slot = 0; slot < kLookahead; ++slot) refill(slot);

  std::size_t head = 0;
  std::uint64_t attempts = 0;
  for (std::size_t d = 0; d < out.size();) {
    const std::size_t candidate = candidates[head];
    const bool accepted = thresholds[head] < weights[candidate];
    refill(head);
    head = (head + 1) % kLookahead;
    ++attempts;
    if (accepted) {
      out[d++] = {candidate, attempts};
      attempts = 0;
    } else if (attempts == attempt_cap) {
      throw Error(ErrorCode::AttemptCapExceeded,
                  "stochastic acceptance rejected " + std::to_string(attempt_cap) + " candidates in a row");
    }
  }
}

double expected_attempts(const StakeTable& table) {
  return static_cast<double>(table.size()) * static_cast<double>(table.max_weight()) /
         static_cast<double>(table.total());
}

}  // namespace peerwheel
