#include "peerwheel/verify.hpp"

#include <limits>
#include <string>

#include "peerwheel/error.hpp"

namespace peerwheel {

VerifyOutcome verify_distribution(const StakeTable& table, const DrawFn& draw, std::uint64_t draws,
                                  std::uint64_t seed, double alpha) {
  if (draws == 0) throw Error(ErrorCode::ZeroSample, "verification needs at least one draw");

  VerifyOutcome out;
  out.observed.assign(table.size(), 0);
  out.expected = exact_probabilities(table);

  RandomSource rng(seed);
  std::uint64_t attempts = 0;
  for (std::uint64_t d = 0; d < draws; ++d) {
    const Selection sel = draw(rng);
    if (sel.index >= table.size()) {
      throw Error(ErrorCode::OutOfRange, "sampler returned index " + std::to_string(sel.index));
    }
    ++out.observed[sel.index];
    attempts += sel.attempts;
  }
  out.mean_attempts = static_cast<double>(attempts) / static_cast<double>(draws);
  try {
    out.fit = stats::chi_square(out.observed, out.expected, alpha);
  } catch (const Error& e) {
    // A zero-stake peer was drawn: the sampler is wrong, not the input.
    if (e.code() != ErrorCode::ImpossibleObservation) throw;
    out.fit.statistic = std::numeric_limits<double>::infinity();
    out.fit.p_value = 0.0;
    out.fit.pass = false;
    std::size_t retained = 0;
    for (double p : out.expected) retained += p > 0.0;
    out.fit.degrees_of_freedom = retained - 1;
  }
  return out;
}

VerifyOutcome verify_sampler(const StakeTable& table, SamplerKind kind, std::uint64_t draws, std::uint64_t seed,
                             double alpha, std::uint64_t attempt_cap) {
  return verify_distribution(
      table, [&](RandomSource& rng) { return select(table, kind, rng, attempt_cap); }, draws, seed, alpha);
}

}  // namespace peerwheel
