#include "peerwheel/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "peerwheel/error.hpp"

namespace peerwheel::bench {

using nlohmann::json;

namespace {

// Keeps timed loops observable to the optimizer.
volatile std::size_t g_sink = 0;

constexpr std::size_t kBatchSize = 4096;

}  // namespace

void validate(const BenchSpec& spec) {
  if (spec.sizes.empty()) throw Error(ErrorCode::InvalidConfig, "sizes: at least one size required");
  for (std::size_t i = 0; i < spec.sizes.size(); ++i) {
    if (spec.sizes[i] == 0) throw Error(ErrorCode::InvalidConfig, "sizes: must be positive");
    if (i > 0 && spec.sizes[i] <= spec.sizes[i - 1]) {
      throw Error(ErrorCode::InvalidConfig, "sizes: must be strictly ascending");
    }
  }
  if (spec.samplers.empty()) throw Error(ErrorCode::InvalidConfig, "samplers: at least one sampler required");
  if (spec.draws_per_size < kMinDrawsPerSize) {
    throw Error(ErrorCode::InvalidConfig, "draws_per_size: must be >= " + std::to_string(kMinDrawsPerSize));
  }
}

BenchSpec parse_bench_spec(const json& doc) {
  BenchSpec spec;
  try {
    if (!doc.is_object()) throw Error(ErrorCode::InvalidConfig, "bench spec: expected a JSON object");
    for (const auto& [key, _] : doc.items()) {
      if (key != "sizes" && key != "weight_profile" && key != "samplers" && key != "draws_per_size" &&
          key != "seed" && key != "warmup_draws") {
        throw Error(ErrorCode::InvalidConfig, key + ": unknown field");
      }
    }
    spec.sizes = doc.at("sizes").get<std::vector<std::size_t>>();
    if (doc.contains("weight_profile")) {
      spec.weight_profile = parse_weight_profile(doc.at("weight_profile").get<std::string>());
    }
    if (doc.contains("samplers")) {
      for (const auto& token : doc.at("samplers").get<std::vector<std::string>>()) {
        const auto kind = parse_sampler(token);
        if (!kind) throw Error(ErrorCode::InvalidConfig, "samplers: unknown sampler `" + token + "`");
        spec.samplers.push_back(*kind);
      }
    } else {
      spec.samplers.assign(std::begin(kAllSamplers), std::end(kAllSamplers));
    }
    if (doc.contains("draws_per_size")) spec.draws_per_size = doc.at("draws_per_size").get<std::uint64_t>();
    if (doc.contains("seed")) spec.seed = doc.at("seed").get<std::uint64_t>();
    if (doc.contains("warmup_draws")) spec.warmup_draws = doc.at("warmup_draws").get<std::uint64_t>();
  } catch (const json::exception& e) {
    throw Error(ErrorCode::InvalidConfig, std::string("bench spec: ") + e.what());
  }
  validate(spec);
  return spec;
}

BenchRow time_cell(const StakeTable& table, SamplerKind kind, std::uint64_t draws, std::uint64_t warmup,
                   std::uint64_t seed) {
  RandomSource rng(seed);
  std::vector<Selection> batch(kBatchSize);
  std::size_t sink = 0;
  std::uint64_t attempts = 0;
  // Draws in fixed-size batches; returns the elapsed time of `count` draws.
  const auto run = [&](std::uint64_t count) {
    const auto start = std::chrono::steady_clock::now();
    for (std::uint64_t done = 0; done < count;) {
      const auto chunk = static_cast<std::size_t>(std::min<std::uint64_t>(kBatchSize, count - done));
      select_many(table, kind, rng, std::span(batch).first(chunk));
      for (std::size_t i = 0; i < chunk; ++i) {
        sink += batch[i].index;
        attempts += batch[i].attempts;
      }
      done += chunk;
    }
    return std::chrono::steady_clock::now() - start;
  };
  run(warmup);
  attempts = 0;
  const auto elapsed = run(draws);
  g_sink = sink;

  BenchRow row;
  row.n = table.size();
  row.sampler = kind;
  row.ns_per_selection = std::chrono::duration<double, std::nano>(elapsed).count() / static_cast<double>(draws);
  row.mean_attempts = static_cast<double>(attempts) / static_cast<double>(draws);
  return row;
}

std::vector<BenchRow> run_bench(const BenchSpec& spec) {
  validate(spec);
  std::vector<BenchRow> rows;
  for (std::size_t n : spec.sizes) {
    const StakeTable table(make_weights(spec.weight_profile, n));
    for (SamplerKind kind : spec.samplers) {
      rows.push_back(time_cell(table, kind, spec.draws_per_size, spec.warmup_draws, spec.seed));
    }
  }
  return rows;
}

void write_csv(const std::vector<BenchRow>& rows, std::ostream& out) {
  out << "N,sampler,ns_per_selection,mean_attempts\n";
  char buf[96];
  for (const BenchRow& row : rows) {
    std::snprintf(buf, sizeof buf, "%.3f,%.6f", row.ns_per_selection, row.mean_attempts);
    out << row.n << ',' << to_string(row.sampler) << ',' << buf << '\n';
  }
}

std::vector<BenchRow> parse_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != "N,sampler,ns_per_selection,mean_attempts") {
    throw Error(ErrorCode::Parse, "bench csv: missing header");
  }
  std::vector<BenchRow> rows;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::istringstream fields(line);
    std::string n, sampler, ns, attempts;
    if (!std::getline(fields, n, ',') || !std::getline(fields, sampler, ',') || !std::getline(fields, ns, ',') ||
        !std::getline(fields, attempts)) {
      throw Error(ErrorCode::Parse, "bench csv line " + std::to_string(line_no) + ": expected 4 fields");
    }
    const auto kind = parse_sampler(sampler);
    if (!kind) throw Error(ErrorCode::Parse, "bench csv line " + std::to_string(line_no) + ": unknown sampler");
    BenchRow row;
    row.sampler = *kind;
    try {
      row.n = std::stoull(n);
      row.ns_per_selection = std::stod(ns);
      row.mean_attempts = std::stod(attempts);
    } catch (const std::exception&) {
      throw Error(ErrorCode::Parse, "bench csv line " + std::to_string(line_no) + ": bad number");
    }
    rows.push_back(row);
  }
  return rows;
}

json to_json(const std::vector<BenchRow>& rows) {
  json out = json::array();
  for (const BenchRow& row : rows) {
    out.push_back({{"N", row.n},
                   {"sampler", to_string(row.sampler)},
                   {"ns_per_selection", row.ns_per_selection},
                   {"mean_attempts", row.mean_attempts}});
  }
  return out;
}

}  // namespace peerwheel::bench
