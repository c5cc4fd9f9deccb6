#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "peerwheel/sampler.hpp"
#include "peerwheel/stats.hpp"

namespace peerwheel {

struct VerifyOutcome {
  std::vector<std::uint64_t> observed;
  std::vector<double> expected;
  stats::FitResult fit;
  double mean_attempts = 0.0;
};

using DrawFn = std::function<Selection(RandomSource&)>;

/// Runs `draws` selections through `draw` (seeded with `seed`) and tests the
/// empirical counts against exact_probabilities(table).
VerifyOutcome verify_distribution(const StakeTable& table, const DrawFn& draw, std::uint64_t draws,
                                  std::uint64_t seed, double alpha = stats::kDefaultAlpha);

VerifyOutcome verify_sampler(const StakeTable& table, SamplerKind kind, std::uint64_t draws, std::uint64_t seed,
                             double alpha = stats::kDefaultAlpha, std::uint64_t attempt_cap = kDefaultAttemptCap);

}  // namespace peerwheel
