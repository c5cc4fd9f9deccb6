#include "peerwheel/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "peerwheel/error.hpp"

namespace peerwheel::stats {

namespace {

constexpr double kEpsilon = 1e-16;
constexpr int kMaxIterations = 10000;

std::uint64_t sum_counts(std::span<const std::uint64_t> counts) {
  std::uint64_t total = 0;
  for (auto c : counts) total += c;
  return total;
}

// P(a, x) by its power series; converges quickly for x < a + 1.
double lower_series(double a, double x) {
  double term = 1.0 / a;
  double sum = term;
  for (int n = 1; n < kMaxIterations; ++n) {
    term *= x / (a + n);
    sum += term;
    if (std::fabs(term) < std::fabs(sum) * kEpsilon) break;
  }
  return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// Q(a, x) by modified Lentz evaluation of the continued fraction; x >= a + 1.
double upper_fraction(double a, double x) {
  constexpr double tiny = std::numeric_limits<double>::min() / kEpsilon;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < kMaxIterations; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::fabs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::fabs(delta - 1.0) < kEpsilon) break;
  }
  return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
}

}  // namespace

double regularized_gamma_q(double a, double x) {
  if (!(a > 0.0) || !(x >= 0.0)) {
    throw Error(ErrorCode::OutOfRange, "incomplete gamma needs a > 0 and x >= 0");
  }
  if (x == 0.0) return 1.0;
  if (x < a + 1.0) return 1.0 - lower_series(a, x);
  return upper_fraction(a, x);
}

double chi_square_survival(double statistic, std::size_t dof) {
  if (dof == 0) return 1.0;
  if (statistic <= 0.0) return 1.0;
  return regularized_gamma_q(0.5 * static_cast<double>(dof), 0.5 * statistic);
}

FitResult chi_square(std::span<const std::uint64_t> observed, std::span<const double> expected, double alpha) {
  if (observed.size() != expected.size()) {
    throw Error(ErrorCode::LengthMismatch, std::to_string(observed.size()) + " observed categories vs " +
                                               std::to_string(expected.size()) + " expected");
  }
  if (observed.empty()) throw Error(ErrorCode::LengthMismatch, "no categories");

  double p_sum = 0.0;
  for (double p : expected) {
    if (!std::isfinite(p) || p < 0.0) throw Error(ErrorCode::InvalidExpected, "probability outside [0, 1]");
    p_sum += p;
  }
  if (std::fabs(p_sum - 1.0) > 1e-9) {
    throw Error(ErrorCode::InvalidExpected, "probabilities sum to " + std::to_string(p_sum));
  }

  const std::uint64_t total = sum_counts(observed);
  if (total == 0) throw Error(ErrorCode::ZeroSample, "no observations");

  FitResult fit;
  std::size_t retained = 0;
  const auto n = static_cast<double>(total);
  for (std::size_t i = 0; i < observed.size(); ++i) {
    if (expected[i] == 0.0) {
      if (observed[i] != 0) {
        throw Error(ErrorCode::ImpossibleObservation,
                    "category " + std::to_string(i) + " has probability 0 but " + std::to_string(observed[i]) +
                        " observations");
      }
      continue;
    }
    ++retained;
    const double e = expected[i] * n;
    const double diff = static_cast<double>(observed[i]) - e;
    fit.statistic += diff * diff / e;
    if (e < 5.0) fit.low_expected_count = true;
  }

  fit.degrees_of_freedom = retained - 1;
  if (fit.degrees_of_freedom == 0) fit.statistic = 0.0;
  fit.p_value = chi_square_survival(fit.statistic, fit.degrees_of_freedom);
  fit.pass = fit.p_value > alpha;
  return fit;
}

double shannon_entropy(std::span<const std::uint64_t> counts) {
  const std::uint64_t total = sum_counts(counts);
  if (total == 0) throw Error(ErrorCode::ZeroSample, "no observations");
  const auto n = static_cast<double>(total);
  double bits = 0.0;
  for (auto c : counts) {
    if (c == 0) continue;
    const double q = static_cast<double>(c) / n;
    bits -= q * std::log2(q);
  }
  return std::max(bits, 0.0);
}

double gini(std::span<const std::uint64_t> counts) {
  const std::uint64_t total = sum_counts(counts);
  if (total == 0) throw Error(ErrorCode::ZeroSample, "no observations");
  std::vector<std::uint64_t> sorted(counts.begin(), counts.end());
  std::sort(sorted.begin(), sorted.end());

  const auto n = static_cast<std::int64_t>(sorted.size());
  double weighted = 0.0;
  for (std::int64_t i = 1; i <= n; ++i) {
    weighted += static_cast<double>(2 * i - n - 1) * static_cast<double>(sorted[static_cast<std::size_t>(i - 1)]);
  }
  return weighted / (static_cast<double>(n) * static_cast<double>(total));
}

}  // namespace peerwheel::stats
