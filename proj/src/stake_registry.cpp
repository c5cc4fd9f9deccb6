#include "peerwheel/stake_registry.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <string_view>

#include "peerwheel/error.hpp"

namespace peerwheel {

std::optional<Stake> StakeRegistry::upsert(const PeerId& id, Stake stake) {
  const auto it = index_.find(id);
  const Stake previous = it == index_.end() ? 0 : slots_[it->second].stake;

  const WideStake without = total_ - previous;
  if (stake > std::numeric_limits<WideStake>::max() - without) {
    throw Error(ErrorCode::Overflow, "total stake would overflow when setting " + id);
  }
  total_ = without + stake;

  if (stake >= cached_max_) {
    // cached_max_ bounds the true maximum from above even when stale.
    cached_max_ = stake;
    dirty_max_ = false;
  } else if (it != index_.end() && previous == cached_max_) {
    dirty_max_ = true;
  }

  if (it != index_.end()) {
    slots_[it->second].stake = stake;
    return previous;
  }
  index_.emplace(id, slots_.size());
  slots_.push_back({id, stake, true});
  return std::nullopt;
}

std::optional<Stake> StakeRegistry::remove(const PeerId& id) {
  const auto it = index_.find(id);
  if (it == index_.end()) return std::nullopt;

  Slot& slot = slots_[it->second];
  const Stake removed = slot.stake;
  slot.live = false;
  slot.stake = 0;
  index_.erase(it);
  ++dead_slots_;

  total_ -= removed;
  if (index_.empty()) {
    cached_max_ = 0;
    dirty_max_ = false;
  } else if (removed == cached_max_) {
    dirty_max_ = true;
  }

  if (dead_slots_ > 32 && dead_slots_ > index_.size()) compact();
  return removed;
}

std::optional<Stake> StakeRegistry::stake_of(const PeerId& id) const {
  const auto it = index_.find(id);
  if (it == index_.end()) return std::nullopt;
  return slots_[it->second].stake;
}

Stake StakeRegistry::max_stake() {
  refresh_max();
  return cached_max_;
}

std::vector<std::pair<PeerId, Stake>> StakeRegistry::entries() const {
  std::vector<std::pair<PeerId, Stake>> out;
  out.reserve(index_.size());
  for (const Slot& slot : slots_) {
    if (slot.live) out.emplace_back(slot.id, slot.stake);
  }
  return out;
}

RegistrySnapshot StakeRegistry::snapshot() {
  refresh_max();
  std::vector<Stake> weights;
  std::vector<PeerId> peers;
  weights.reserve(index_.size());
  peers.reserve(index_.size());
  for (const Slot& slot : slots_) {
    if (!slot.live) continue;
    weights.push_back(slot.stake);
    peers.push_back(slot.id);
  }
  return {StakeTable(std::move(weights)), std::move(peers)};
}

void StakeRegistry::refresh_max() {
  if (!dirty_max_) return;
  Stake best = 0;
  for (const Slot& slot : slots_) {
    if (slot.live) best = std::max(best, slot.stake);
  }
  cached_max_ = best;
  dirty_max_ = false;
}

void StakeRegistry::compact() {
  std::erase_if(slots_, [](const Slot& s) { return !s.live; });
  for (std::size_t i = 0; i < slots_.size(); ++i) index_[slots_[i].id] = i;
  dead_slots_ = 0;
}

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

[[noreturn]] void parse_fail(const std::string& source, std::size_t line, const std::string& why) {
  throw Error(ErrorCode::Parse, source + ":" + std::to_string(line) + ": " + why);
}

}  // namespace

StakeRegistry parse_stakes(std::istream& in, const std::string& source) {
  StakeRegistry registry;
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = raw;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;

    const auto comma = line.find(',');
    if (comma == std::string_view::npos) parse_fail(source, line_no, "expected `peer_id,stake`");
    const auto id = trim(line.substr(0, comma));
    const auto value = trim(line.substr(comma + 1));
    if (id.empty()) parse_fail(source, line_no, "empty peer id");
    if (value.empty()) parse_fail(source, line_no, "missing stake");

    Stake stake = 0;
    const auto [end, ec] = std::from_chars(value.data(), value.data() + value.size(), stake);
    if (ec == std::errc::result_out_of_range) parse_fail(source, line_no, "stake exceeds 32-bit range");
    if (ec != std::errc() || end != value.data() + value.size()) {
      parse_fail(source, line_no, "stake is not a non-negative integer: `" + std::string(value) + "`");
    }

    const PeerId peer(id);
    if (registry.contains(peer)) parse_fail(source, line_no, "duplicate peer id `" + peer + "`");
    registry.upsert(peer, stake);
  }
  if (registry.empty()) throw Error(ErrorCode::Parse, source + ": no stake entries");
  return registry;
}

StakeRegistry load_stake_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open stake file " + path.string());
  return parse_stakes(in, path.string());
}

void write_stakes(const StakeRegistry& registry, std::ostream& out) {
  for (const auto& [id, stake] : registry.entries()) out << id << ',' << stake << '\n';
}

}  // namespace peerwheel
