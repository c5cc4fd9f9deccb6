#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "peerwheel/stake_table.hpp"

namespace peerwheel {

/// Synthetic stake distributions for benchmarks and simulations.
///
///   uniform          every peer stakes 1
///   linear_ramp      peer i stakes i + 1
///   one_dominant(f)  peer 0 holds fraction f of the total, the rest stake 1
///   zipf(s)          peer i (1-based) stakes round((N / i)^s)
struct WeightProfile {
  enum class Kind { Uniform, LinearRamp, OneDominant, Zipf };

  Kind kind = Kind::Uniform;
  double param = 0.0;

  friend bool operator==(const WeightProfile&, const WeightProfile&) = default;
};

/// Accepts "uniform", "linear_ramp", "one_dominant(0.4)", "zipf(1.0)".
/// Throws Error(InvalidConfig) on anything else or an out-of-range parameter.
WeightProfile parse_weight_profile(std::string_view text);
std::string to_string(const WeightProfile& profile);

/// Throws Error(Overflow) when a weight does not fit in Stake, and
/// Error(InvalidConfig) when n is zero or the profile cannot be realized
/// (one_dominant needs n >= 2).
std::vector<Stake> make_weights(const WeightProfile& profile, std::size_t n);

}  // namespace peerwheel
