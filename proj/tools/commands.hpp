#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

#include "peerwheel/error.hpp"
#include "peerwheel/sampler.hpp"
#include "peerwheel/stats.hpp"

namespace peerwheel::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitStatisticalFail = 1,
  kExitUsage = 2,
  kExitRuntime = 3,
};

int exit_code_for(ErrorCode code) noexcept;

enum class Format { Csv, Json };

struct SelectOptions {
  std::filesystem::path stakes;
  SamplerKind sampler = SamplerKind::StochasticAcceptance;
  std::uint64_t count = 1;
  std::uint64_t seed = 0;
  /// Summary JSON destination; stderr when absent.
  std::optional<std::filesystem::path> out;
  bool summary_only = false;
};

struct VerifyOptions {
  std::filesystem::path stakes;
  SamplerKind sampler = SamplerKind::StochasticAcceptance;
  std::uint64_t draws = 1'000'000;
  std::uint64_t seed = 0;
  double alpha = stats::kDefaultAlpha;
  std::optional<std::filesystem::path> out;
};

struct SimulateOptions {
  std::filesystem::path config;
  std::optional<std::filesystem::path> out;
  std::optional<std::filesystem::path> counts;
  Format format = Format::Json;
  bool timing = false;
};

struct BenchOptions {
  std::filesystem::path config;
  std::optional<std::filesystem::path> out;
  Format format = Format::Csv;
};

inline constexpr std::uint64_t kMinVerifyDraws = 10'000;

// Each command writes its primary output to `out` (or the --out file),
// diagnostics to `err`, and returns the process exit status.
int cmd_select(const SelectOptions& opts, std::ostream& out, std::ostream& err);
int cmd_verify(const VerifyOptions& opts, std::ostream& out, std::ostream& err);
int cmd_simulate(const SimulateOptions& opts, std::ostream& out, std::ostream& err);
int cmd_bench(const BenchOptions& opts, std::ostream& out, std::ostream& err);

/// Entry point shared by the binary and the in-process CLI tests.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace peerwheel::cli
