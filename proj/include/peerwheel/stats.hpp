#pragma once

#include <cstddef>
#include <cstdint>
#include <span>

namespace peerwheel::stats {

inline constexpr double kDefaultAlpha = 1e-3;

struct FitResult {
  double statistic = 0.0;
  std::size_t degrees_of_freedom = 0;
  double p_value = 1.0;
  bool pass = true;
  /// Some retained category had an expected count below 5, where the
  /// chi-square approximation is unreliable.
  bool low_expected_count = false;
};

/// Pearson goodness-of-fit of observed counts against a probability vector.
///
/// Categories with expected probability 0 are dropped (and must have zero
/// observations, else ImpossibleObservation); degrees of freedom are the
/// number of retained categories minus one. pass is p_value > alpha.
///
/// Errors: LengthMismatch, InvalidExpected (negative, non-finite, or not
/// summing to 1 within 1e-9), ZeroSample, ImpossibleObservation.
FitResult chi_square(std::span<const std::uint64_t> observed, std::span<const double> expected,
                     double alpha = kDefaultAlpha);

/// Upper tail P(X > statistic) of a chi-square variable with dof degrees of
/// freedom, i.e. the regularized upper incomplete gamma Q(dof/2, statistic/2).
double chi_square_survival(double statistic, std::size_t dof);

/// Regularized upper incomplete gamma Q(a, x), a > 0, x >= 0.
double regularized_gamma_q(double a, double x);

/// Shannon entropy of the empirical distribution, in bits.
double shannon_entropy(std::span<const std::uint64_t> counts);

/// Gini coefficient via the sorted-rank formula
/// G = sum_i (2i - n - 1) x_(i) / (n sum x), i 1-based over ascending x.
double gini(std::span<const std::uint64_t> counts);

}  // namespace peerwheel::stats
