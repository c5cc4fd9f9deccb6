#include "peerwheel/gossip_sim.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <set>
#include <sstream>

#include "peerwheel/error.hpp"
#include "peerwheel/stats.hpp"
#include "peerwheel/weight_profile.hpp"

namespace peerwheel::sim {

using nlohmann::json;

void validate(const SimConfig& config) {
  const auto fail = [](const std::string& field, const std::string& why) {
    throw Error(ErrorCode::InvalidConfig, field + ": " + why);
  };
  if (config.stakes.empty()) fail("stakes", "no peers");
  if (config.peers.size() != config.stakes.size()) fail("peers", "one id per stake required");
  if (std::set<PeerId>(config.peers.begin(), config.peers.end()).size() != config.peers.size()) {
    fail("peers", "duplicate peer id");
  }
  if (config.rounds < 1) fail("rounds", "must be >= 1");
  if (config.fanout < 1) fail("fanout", "must be >= 1");
  if (config.distinct_fanout && config.fanout >= config.stakes.size()) {
    fail("fanout", "must be < number of peers (" + std::to_string(config.stakes.size()) +
                       ") when distinct_fanout is set");
  }
  if (config.attempt_cap < 1) fail("attempt_cap", "must be >= 1");
  if (config.redraw_cap < 1) fail("redraw_cap", "must be >= 1");
  WideStake total = 0;
  for (Stake s : config.stakes) total += s;
  if (total == 0) fail("stakes", "total stake is zero");
}

namespace {

template <typename T>
T field_as(const json& doc, const char* key) {
  const json& value = doc.at(key);
  if constexpr (std::is_same_v<T, bool>) {
    if (!value.is_boolean()) throw Error(ErrorCode::InvalidConfig, std::string(key) + ": expected a boolean");
  } else if constexpr (std::is_integral_v<T>) {
    if (!value.is_number_unsigned()) {
      throw Error(ErrorCode::InvalidConfig, std::string(key) + ": expected a non-negative integer");
    }
    if (value.get<std::uint64_t>() > std::numeric_limits<T>::max()) {
      throw Error(ErrorCode::InvalidConfig, std::string(key) + ": value too large");
    }
  } else {
    if (!value.is_string()) throw Error(ErrorCode::InvalidConfig, std::string(key) + ": expected a string");
  }
  return value.get<T>();
}

void load_inline_stakes(const json& list, SimConfig& config) {
  if (!list.is_array()) throw Error(ErrorCode::InvalidConfig, "stakes: expected an array");
  for (std::size_t i = 0; i < list.size(); ++i) {
    const json& item = list[i];
    const std::string where = "stakes[" + std::to_string(i) + "]";
    if (item.is_number_unsigned()) {
      if (item.get<std::uint64_t>() > std::numeric_limits<Stake>::max()) {
        throw Error(ErrorCode::InvalidConfig, where + ": stake exceeds 32-bit range");
      }
      config.peers.push_back("p" + std::to_string(i));
      config.stakes.push_back(item.get<Stake>());
    } else if (item.is_object() && item.contains("id") && item.contains("stake")) {
      config.peers.push_back(field_as<std::string>(item, "id"));
      config.stakes.push_back(field_as<Stake>(item, "stake"));
    } else {
      throw Error(ErrorCode::InvalidConfig, where + ": expected a stake or {\"id\", \"stake\"}");
    }
  }
}

}  // namespace

SimConfig parse_sim_config(const json& doc, const std::filesystem::path& base_dir) {
  if (!doc.is_object()) throw Error(ErrorCode::InvalidConfig, "config: expected a JSON object");

  static const std::set<std::string> known = {"stakes_file", "stakes",   "profile", "peers",
                                              "rounds",      "fanout",   "sampler", "seed",
                                              "allow_self",  "distinct_fanout", "attempt_cap", "redraw_cap"};
  for (const auto& [key, _] : doc.items()) {
    if (!known.contains(key)) throw Error(ErrorCode::InvalidConfig, key + ": unknown field");
  }

  SimConfig config;
  const int sources = doc.contains("stakes_file") + doc.contains("stakes") + doc.contains("profile");
  if (sources != 1) {
    throw Error(ErrorCode::InvalidConfig, "stakes: exactly one of stakes_file, stakes, profile is required");
  }
  if (doc.contains("stakes_file")) {
    auto registry = load_stake_file(base_dir / field_as<std::string>(doc, "stakes_file"));
    for (auto& [id, stake] : registry.entries()) {
      config.peers.push_back(id);
      config.stakes.push_back(stake);
    }
  } else if (doc.contains("stakes")) {
    load_inline_stakes(doc.at("stakes"), config);
  } else {
    if (!doc.contains("peers")) throw Error(ErrorCode::InvalidConfig, "peers: required with profile");
    const auto n = field_as<std::size_t>(doc, "peers");
    config.stakes = make_weights(parse_weight_profile(field_as<std::string>(doc, "profile")), n);
    for (std::size_t i = 0; i < n; ++i) config.peers.push_back("p" + std::to_string(i));
  }
  if (doc.contains("peers") && !doc.contains("profile")) {
    throw Error(ErrorCode::InvalidConfig, "peers: only valid together with profile");
  }

  if (doc.contains("rounds")) config.rounds = field_as<std::uint64_t>(doc, "rounds");
  if (doc.contains("fanout")) config.fanout = field_as<std::size_t>(doc, "fanout");
  if (doc.contains("sampler")) {
    const auto token = field_as<std::string>(doc, "sampler");
    const auto kind = parse_sampler(token);
    if (!kind) throw Error(ErrorCode::InvalidConfig, "sampler: unknown sampler `" + token + "`");
    config.sampler = *kind;
  }
  if (doc.contains("seed")) config.seed = field_as<std::uint64_t>(doc, "seed");
  if (doc.contains("allow_self")) config.allow_self = field_as<bool>(doc, "allow_self");
  if (doc.contains("distinct_fanout")) config.distinct_fanout = field_as<bool>(doc, "distinct_fanout");
  if (doc.contains("attempt_cap")) config.attempt_cap = field_as<std::uint64_t>(doc, "attempt_cap");
  if (doc.contains("redraw_cap")) config.redraw_cap = field_as<std::uint64_t>(doc, "redraw_cap");

  validate(config);
  return config;
}

SimConfig load_sim_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open config " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::InvalidConfig, path.string() + ": " + e.what());
  }
  return parse_sim_config(doc, path.parent_path());
}

std::vector<NodeSelection> run_round(const StakeTable& table, const SimConfig& config, std::uint64_t round) {
  const std::size_t n = table.size();
  std::vector<NodeSelection> out(n);
  for (std::size_t node = 0; node < n; ++node) {
    NodeSelection& ns = out[node];
    ns.selector = node;
    ns.selected.reserve(config.fanout);
    RandomSource rng = RandomSource::substream(config.seed, node, round);
    std::uint64_t rejected = 0;
    while (ns.selected.size() < config.fanout) {
      const Selection sel = select(table, config.sampler, rng, config.attempt_cap);
      ns.attempts += sel.attempts;
      ++ns.draws;
      const bool self = !config.allow_self && sel.index == node;
      const bool repeat = config.distinct_fanout &&
                          std::find(ns.selected.begin(), ns.selected.end(), sel.index) != ns.selected.end();
      if (self || repeat) {
        if (++rejected > config.redraw_cap) {
          throw Error(ErrorCode::AttemptCapExceeded,
                      "node " + std::to_string(node) + " could not fill fanout " + std::to_string(config.fanout) +
                          " in round " + std::to_string(round));
        }
        continue;
      }
      ns.selected.push_back(sel.index);
    }
  }
  return out;
}

SimReport run_simulation(const SimConfig& config) {
  validate(config);
  const auto start = std::chrono::steady_clock::now();

  const StakeTable table(config.stakes);
  SimReport report;
  report.peers = config.peers;
  report.selection_counts.assign(table.size(), 0);

  std::uint64_t attempts = 0;
  std::uint64_t draws = 0;
  for (std::uint64_t round = 0; round < config.rounds; ++round) {
    for (const NodeSelection& ns : run_round(table, config, round)) {
      for (std::size_t peer : ns.selected) ++report.selection_counts[peer];
      attempts += ns.attempts;
      draws += ns.draws;
    }
  }

  for (auto c : report.selection_counts) report.total_selections += c;
  const auto total = static_cast<double>(report.total_selections);
  report.dominance_ratio =
      static_cast<double>(*std::max_element(report.selection_counts.begin(), report.selection_counts.end())) / total;
  report.shannon_entropy = stats::shannon_entropy(report.selection_counts);
  report.gini = stats::gini(report.selection_counts);
  report.mean_attempts = static_cast<double>(attempts) / static_cast<double>(draws);
  report.elapsed_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

json to_json(const SimReport& report, bool include_timing) {
  json doc = {
      {"peers", report.peers},
      {"selection_counts", report.selection_counts},
      {"total_selections", report.total_selections},
      {"dominance_ratio", report.dominance_ratio},
      {"shannon_entropy", report.shannon_entropy},
      {"gini", report.gini},
      {"mean_attempts", report.mean_attempts},
  };
  if (include_timing) doc["elapsed_seconds"] = report.elapsed_seconds;
  return doc;
}

SimReport report_from_json(const json& doc) {
  SimReport report;
  try {
    report.peers = doc.at("peers").get<std::vector<PeerId>>();
    report.selection_counts = doc.at("selection_counts").get<std::vector<std::uint64_t>>();
    report.total_selections = doc.at("total_selections").get<std::uint64_t>();
    report.dominance_ratio = doc.at("dominance_ratio").get<double>();
    report.shannon_entropy = doc.at("shannon_entropy").get<double>();
    report.gini = doc.at("gini").get<double>();
    report.mean_attempts = doc.at("mean_attempts").get<double>();
    if (doc.contains("elapsed_seconds")) report.elapsed_seconds = doc.at("elapsed_seconds").get<double>();
  } catch (const json::exception& e) {
    throw Error(ErrorCode::Parse, std::string("simulation report: ") + e.what());
  }
  if (report.peers.size() != report.selection_counts.size()) {
    throw Error(ErrorCode::Parse, "simulation report: peers and selection_counts differ in length");
  }
  return report;
}

void write_counts_csv(const SimReport& report, std::ostream& out) {
  out << "peer_id,count,share\n";
  const auto total = static_cast<double>(report.total_selections);
  char share[32];
  for (std::size_t i = 0; i < report.peers.size(); ++i) {
    const double value = total > 0 ? static_cast<double>(report.selection_counts[i]) / total : 0.0;
    std::snprintf(share, sizeof share, "%.9g", value);
    out << report.peers[i] << ',' << report.selection_counts[i] << ',' << share << '\n';
  }
}

std::vector<CountRow> parse_counts_csv(std::istream& in) {
  std::vector<CountRow> rows;
  std::string line;
  if (!std::getline(in, line) || line != "peer_id,count,share") {
    throw Error(ErrorCode::Parse, "counts csv: missing `peer_id,count,share` header");
  }
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::istringstream fields(line);
    CountRow row;
    std::string count;
    std::string share;
    if (!std::getline(fields, row.peer, ',') || !std::getline(fields, count, ',') || !std::getline(fields, share)) {
      throw Error(ErrorCode::Parse, "counts csv line " + std::to_string(line_no) + ": expected 3 fields");
    }
    try {
      row.count = std::stoull(count);
      row.share = std::stod(share);
    } catch (const std::exception&) {
      throw Error(ErrorCode::Parse, "counts csv line " + std::to_string(line_no) + ": bad number");
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace peerwheel::sim
