#include "commands.hpp"

#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "peerwheel/bench.hpp"
#include "peerwheel/gossip_sim.hpp"
#include "peerwheel/stake_registry.hpp"
#include "peerwheel/verify.hpp"

namespace peerwheel::cli {

using nlohmann::json;

int exit_code_for(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::EmptyTable:
    case ErrorCode::ZeroTotal:
    case ErrorCode::OutOfRange:
    case ErrorCode::LengthMismatch:
    case ErrorCode::InvalidExpected:
    case ErrorCode::ZeroSample:
    case ErrorCode::Parse:
    case ErrorCode::InvalidConfig:
      return kExitUsage;
    case ErrorCode::ImpossibleObservation:
      return kExitStatisticalFail;
    case ErrorCode::AttemptCapExceeded:
    case ErrorCode::Overflow:
    case ErrorCode::Io:
      return kExitRuntime;
  }
  return kExitRuntime;
}

namespace {

int guarded(std::ostream& err, const std::function<int()>& body) {
  try {
    return body();
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
}

/// Writes through `fallback` unless a destination file was requested.
void emit(const std::optional<std::filesystem::path>& path, std::ostream& fallback,
          const std::function<void(std::ostream&)>& writer) {
  if (!path) {
    writer(fallback);
    return;
  }
  std::ofstream file(*path, std::ios::binary);
  if (!file) throw Error(ErrorCode::Io, "cannot write " + path->string());
  writer(file);
  if (!file) throw Error(ErrorCode::Io, "write failed for " + path->string());
}

}  // namespace

int cmd_select(const SelectOptions& opts, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    auto registry = load_stake_file(opts.stakes);
    const RegistrySnapshot snap = registry.snapshot();

    RandomSource rng(opts.seed);
    std::vector<std::uint64_t> counts(snap.table.size(), 0);
    std::uint64_t attempts = 0;
    for (std::uint64_t i = 0; i < opts.count; ++i) {
      const Selection sel = select(snap.table, opts.sampler, rng);
      ++counts[sel.index];
      attempts += sel.attempts;
      if (!opts.summary_only) out << snap.peers[sel.index] << '\n';
    }

    json shares = json::array();
    for (auto c : counts) {
      shares.push_back(opts.count ? static_cast<double>(c) / static_cast<double>(opts.count) : 0.0);
    }
    const json summary = {
        {"sampler", to_string(opts.sampler)},
        {"count", opts.count},
        {"seed", opts.seed},
        {"peers", snap.peers},
        {"counts", counts},
        {"shares", shares},
        {"mean_attempts", opts.count ? static_cast<double>(attempts) / static_cast<double>(opts.count) : 0.0},
    };
    emit(opts.out, err, [&](std::ostream& os) { os << summary.dump() << '\n'; });
    return kExitOk;
  });
}

int cmd_verify(const VerifyOptions& opts, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    if (opts.draws < kMinVerifyDraws) {
      throw Error(ErrorCode::InvalidConfig, "--draws must be >= " + std::to_string(kMinVerifyDraws));
    }
    if (!(opts.alpha > 0.0 && opts.alpha < 1.0)) throw Error(ErrorCode::InvalidConfig, "--alpha must lie in (0, 1)");

    auto registry = load_stake_file(opts.stakes);
    const RegistrySnapshot snap = registry.snapshot();
    const VerifyOutcome outcome = verify_sampler(snap.table, opts.sampler, opts.draws, opts.seed, opts.alpha);

    const json doc = {
        {"sampler", to_string(opts.sampler)},
        {"draws", opts.draws},
        {"seed", opts.seed},
        {"alpha", opts.alpha},
        {"statistic", outcome.fit.statistic},
        {"degrees_of_freedom", outcome.fit.degrees_of_freedom},
        {"p_value", outcome.fit.p_value},
        {"pass", outcome.fit.pass},
        {"low_expected_count", outcome.fit.low_expected_count},
        {"mean_attempts", outcome.mean_attempts},
        {"peers", snap.peers},
        {"observed", outcome.observed},
        {"expected", outcome.expected},
    };
    emit(opts.out, out, [&](std::ostream& os) { os << doc.dump() << '\n'; });
    return outcome.fit.pass ? kExitOk : kExitStatisticalFail;
  });
}

int cmd_simulate(const SimulateOptions& opts, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const sim::SimConfig config = sim::load_sim_config(opts.config);
    const sim::SimReport report = sim::run_simulation(config);

    emit(opts.out, out, [&](std::ostream& os) {
      if (opts.format == Format::Csv) {
        sim::write_counts_csv(report, os);
      } else {
        os << sim::to_json(report, opts.timing).dump() << '\n';
      }
    });
    if (opts.counts) emit(opts.counts, out, [&](std::ostream& os) { sim::write_counts_csv(report, os); });
    return kExitOk;
  });
}

int cmd_bench(const BenchOptions& opts, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    std::ifstream in(opts.config);
    if (!in) throw Error(ErrorCode::Io, "cannot open bench spec " + opts.config.string());
    json doc;
    try {
      doc = json::parse(in);
    } catch (const json::parse_error& e) {
      throw Error(ErrorCode::InvalidConfig, opts.config.string() + ": " + e.what());
    }
    const bench::BenchSpec spec = bench::parse_bench_spec(doc);
    const auto rows = bench::run_bench(spec);
    emit(opts.out, out, [&](std::ostream& os) {
      if (opts.format == Format::Json) {
        os << bench::to_json(rows).dump() << '\n';
      } else {
        bench::write_csv(rows, os);
      }
    });
    return kExitOk;
  });
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Stake-weighted peer selection: sample, verify, simulate, benchmark"};
  app.require_subcommand(1);

  const std::vector<std::string> sampler_names = {"linear", "binary", "sa"};
  const std::vector<std::string> format_names = {"csv", "json"};

  SelectOptions select_opts;
  std::string select_out;
  std::string select_sampler_name = "sa";
  auto* select_cmd = app.add_subcommand("select", "Draw peers and print one id per line");
  select_cmd->add_option("--stakes", select_opts.stakes, "Stake file (peer_id,stake per line)")->required();
  select_cmd->add_option("--sampler", select_sampler_name, "linear | binary | sa")
      ->check(CLI::IsMember(sampler_names));
  select_cmd->add_option("--count", select_opts.count, "Number of selections");
  select_cmd->add_option("--seed", select_opts.seed, "64-bit seed");
  select_cmd->add_option("--out", select_out, "Write the summary JSON here instead of stderr");
  select_cmd->add_flag("--summary-only", select_opts.summary_only, "Suppress the per-draw id stream");

  VerifyOptions verify_opts;
  std::string verify_out;
  std::string verify_sampler_name = "sa";
  auto* verify_cmd = app.add_subcommand("verify", "Chi-square test of a sampler against exact probabilities");
  verify_cmd->add_option("--stakes", verify_opts.stakes, "Stake file")->required();
  verify_cmd->add_option("--sampler", verify_sampler_name, "linear | binary | sa")
      ->check(CLI::IsMember(sampler_names));
  verify_cmd->add_option("--draws,--count", verify_opts.draws, "Number of draws (>= 10000)");
  verify_cmd->add_option("--seed", verify_opts.seed, "64-bit seed");
  verify_cmd->add_option("--alpha", verify_opts.alpha, "Significance floor; pass iff p-value > alpha");
  verify_cmd->add_option("--out", verify_out, "Write the result JSON here instead of stdout");

  SimulateOptions sim_opts;
  std::string sim_out;
  std::string sim_counts;
  std::string sim_format = "json";
  auto* sim_cmd = app.add_subcommand("simulate", "Run the stake-weighted gossip simulation");
  sim_cmd->add_option("--config", sim_opts.config, "Simulation config (JSON)")->required();
  sim_cmd->add_option("--out", sim_out, "Write the report here instead of stdout");
  sim_cmd->add_option("--counts", sim_counts, "Also write per-peer counts CSV here");
  sim_cmd->add_option("--format", sim_format, "json (report) | csv (counts)")
      ->check(CLI::IsMember(format_names));
  sim_cmd->add_flag("--timing", sim_opts.timing, "Include elapsed_seconds in the report");

  BenchOptions bench_opts;
  std::string bench_out;
  std::string bench_format = "csv";
  auto* bench_cmd = app.add_subcommand("bench", "Time every sampler across table sizes");
  bench_cmd->add_option("--config", bench_opts.config, "Bench spec (JSON)")->required();
  bench_cmd->add_option("--out", bench_out, "Write rows here instead of stdout");
  bench_cmd->add_option("--format", bench_format, "csv | json")
      ->check(CLI::IsMember(format_names));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  const auto path_or_none = [](const std::string& s) -> std::optional<std::filesystem::path> {
    if (s.empty()) return std::nullopt;
    return std::filesystem::path(s);
  };

  const auto format_of = [](const std::string& s) { return s == "csv" ? Format::Csv : Format::Json; };

  if (select_cmd->parsed()) {
    select_opts.sampler = *parse_sampler(select_sampler_name);
    select_opts.out = path_or_none(select_out);
    return cmd_select(select_opts, out, err);
  }
  if (verify_cmd->parsed()) {
    verify_opts.sampler = *parse_sampler(verify_sampler_name);
    verify_opts.out = path_or_none(verify_out);
    return cmd_verify(verify_opts, out, err);
  }
  if (sim_cmd->parsed()) {
    sim_opts.out = path_or_none(sim_out);
    sim_opts.counts = path_or_none(sim_counts);
    sim_opts.format = format_of(sim_format);
    return cmd_simulate(sim_opts, out, err);
  }
  bench_opts.out = path_or_none(bench_out);
  bench_opts.format = format_of(bench_format);
  return cmd_bench(bench_opts, out, err);
}

}  // namespace peerwheel::cli
