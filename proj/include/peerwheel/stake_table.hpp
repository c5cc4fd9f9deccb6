#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace peerwheel {

/// Stake held by one peer, in token base units.
using Stake = std::uint32_t;
/// Sums of stakes. Twice the width of Stake, so no sum of up to 2^32 peers
/// can overflow.
using WideStake = std::uint64_t;

/// Immutable snapshot of N peer stakes with the cumulative partition used by
/// the search-based samplers and the maximum used by stochastic acceptance.
///
/// Zero stakes are allowed (the peer is present but unselectable); a table
/// whose stakes are all zero cannot be built.
class StakeTable {
 public:
  /// Throws Error(EmptyTable) for no peers and Error(ZeroTotal) when every
  /// stake is zero. Input order is preserved.
  explicit StakeTable(std::vector<Stake> weights);

  std::size_t size() const noexcept { return weights_.size(); }
  std::span<const Stake> weights() const noexcept { return weights_; }
  /// prefix()[i] == weights()[0] + ... + weights()[i]
  std::span<const WideStake> prefix() const noexcept { return prefix_; }
  WideStake total() const noexcept { return prefix_.back(); }
  Stake max_weight() const noexcept { return max_weight_; }

  Stake weight(std::size_t i) const { return weights_.at(i); }

 private:
  std::vector<Stake> weights_;
  std::vector<WideStake> prefix_;
  Stake max_weight_ = 0;
};

StakeTable build_table(std::vector<Stake> weights);

}  // namespace peerwheel
