#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "peerwheel/stake_table.hpp"

namespace peerwheel {

using PeerId = std::string;

/// A StakeTable plus the peer behind each table index.
struct RegistrySnapshot {
  StakeTable table;
  std::vector<PeerId> peers;
};

/// Mutable peer -> stake store.
///
/// The total is maintained exactly on every mutation. The maximum is
/// maintained lazily: lowering or removing the current maximum only marks it
/// stale, and the next snapshot() or max_stake() rescans.
///
/// Iteration and snapshot order is insertion order. Updating an existing peer
/// keeps its position; a peer removed and re-added goes to the end.
///
/// Single writer: callers serialize mutations. Snapshots are immutable.
class StakeRegistry {
 public:
  /// Returns the previous stake, if the peer existed. Throws Error(Overflow)
  /// if the total would leave the WideStake range.
  std::optional<Stake> upsert(const PeerId& id, Stake stake);

  /// Returns the removed stake; absent ids are a no-op.
  std::optional<Stake> remove(const PeerId& id);

  std::optional<Stake> stake_of(const PeerId& id) const;
  bool contains(const PeerId& id) const { return index_.contains(id); }
  std::size_t size() const noexcept { return index_.size(); }
  bool empty() const noexcept { return index_.empty(); }

  WideStake total() const noexcept { return total_; }
  Stake max_stake();
  bool max_is_stale() const noexcept { return dirty_max_; }

  /// Live entries in insertion order.
  std::vector<std::pair<PeerId, Stake>> entries() const;

  /// Throws Error(EmptyTable) or Error(ZeroTotal) like StakeTable.
  RegistrySnapshot snapshot();

 private:
  struct Slot {
    PeerId id;
    Stake stake = 0;
    bool live = false;
  };

  void refresh_max();
  void compact();

  std::vector<Slot> slots_;
  std::unordered_map<PeerId, std::size_t> index_;
  std::size_t dead_slots_ = 0;
  WideStake total_ = 0;
  Stake cached_max_ = 0;
  bool dirty_max_ = false;
};

/// Stake file: one `peer_id,stake` per line, UTF-8. `#` starts a comment,
/// blank lines are skipped, surrounding whitespace is ignored. Duplicate
/// ids and files without any entry are parse errors.
StakeRegistry parse_stakes(std::istream& in, const std::string& source = "<stream>");
StakeRegistry load_stake_file(const std::filesystem::path& path);
void write_stakes(const StakeRegistry& registry, std::ostream& out);

}  // namespace peerwheel
