#include "peerwheel/stake_table.hpp"

#include <algorithm>
#include <utility>

#include "peerwheel/error.hpp"

namespace peerwheel {

StakeTable::StakeTable(std::vector<Stake> weights) : weights_(std::move(weights)) {
  if (weights_.empty()) throw Error(ErrorCode::EmptyTable, "stake table has no peers");

  prefix_.resize(weights_.size());
  WideStake running = 0;
  for (std::size_t i = 0; i < weights_.size(); ++i) {
    running += weights_[i];
    prefix_[i] = running;
  }
  if (running == 0) throw Error(ErrorCode::ZeroTotal, "every peer has zero stake");

  max_weight_ = *std::max_element(weights_.begin(), weights_.end());
}

StakeTable build_table(std::vector<Stake> weights) { return StakeTable(std::move(weights)); }

}  // namespace peerwheel
