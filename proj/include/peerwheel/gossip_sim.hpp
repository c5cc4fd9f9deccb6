#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"
#include "peerwheel/sampler.hpp"
#include "peerwheel/stake_registry.hpp"

namespace peerwheel::sim {

inline constexpr std::uint64_t kDefaultRedrawCap = std::uint64_t{1} << 20;

struct SimConfig {
  std::vector<PeerId> peers;
  std::vector<Stake> stakes;
  std::uint64_t rounds = 1;
  /// Peers each node selects per round.
  std::size_t fanout = 1;
  SamplerKind sampler = SamplerKind::StochasticAcceptance;
  std::uint64_t seed = 0;
  bool allow_self = false;
  bool distinct_fanout = true;
  std::uint64_t attempt_cap = kDefaultAttemptCap;
  /// Rejected draws (self or duplicate) tolerated per node per round.
  std::uint64_t redraw_cap = kDefaultRedrawCap;
};

/// Throws Error(InvalidConfig) naming the offending field.
void validate(const SimConfig& config);

/// Config file (JSON object). Exactly one stake source:
///   "stakes_file": path, relative to base_dir
///   "stakes": [{"id": "A", "stake": 1}, ...] or [1, 2, ...] (ids p0, p1, ...)
///   "profile": "one_dominant(0.4)" together with "peers": <count>
/// Optional fields: rounds, fanout, sampler ("linear" | "binary" | "sa"),
/// seed, allow_self, distinct_fanout, attempt_cap, redraw_cap.
/// Unknown fields are rejected.
SimConfig parse_sim_config(const nlohmann::json& doc, const std::filesystem::path& base_dir = {});
SimConfig load_sim_config(const std::filesystem::path& path);

struct NodeSelection {
  std::size_t selector = 0;
  std::vector<std::size_t> selected;
  /// Sampler attempts over every draw this node made, rejected ones included.
  std::uint64_t attempts = 0;
  std::uint64_t draws = 0;
};

/// One gossip round: every node draws `fanout` peers from its own
/// (seed, node, round) substream. Self draws (unless allow_self) and repeats
/// (with distinct_fanout) are rejected and redrawn; more than redraw_cap
/// rejections for one node throws Error(AttemptCapExceeded).
std::vector<NodeSelection> run_round(const StakeTable& table, const SimConfig& config, std::uint64_t round);

struct SimReport {
  std::vector<PeerId> peers;
  std::vector<std::uint64_t> selection_counts;
  std::uint64_t total_selections = 0;
  double dominance_ratio = 0.0;
  double shannon_entropy = 0.0;
  double gini = 0.0;
  double mean_attempts = 0.0;
  double elapsed_seconds = 0.0;
};

SimReport run_simulation(const SimConfig& config);

/// elapsed_seconds is written only with include_timing, so the default
/// serialization is identical across runs with the same seed and config.
nlohmann::json to_json(const SimReport& report, bool include_timing = false);
SimReport report_from_json(const nlohmann::json& doc);

struct CountRow {
  PeerId peer;
  std::uint64_t count = 0;
  double share = 0.0;
};

/// `peer_id,count,share` with a header line.
void write_counts_csv(const SimReport& report, std::ostream& out);
std::vector<CountRow> parse_counts_csv(std::istream& in);

}  // namespace peerwheel::sim
