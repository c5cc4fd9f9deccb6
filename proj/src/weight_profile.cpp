#include "peerwheel/weight_profile.hpp"

#include <charconv>
#include <cmath>
#include <limits>
#include <sstream>

#include "peerwheel/error.hpp"

namespace peerwheel {

namespace {

double parse_param(std::string_view text, std::string_view name) {
  const auto open = text.find('(');
  if (open == std::string_view::npos || text.back() != ')') {
    throw Error(ErrorCode::InvalidConfig, std::string(name) + " needs a parameter, e.g. " + std::string(name) + "(0.5)");
  }
  const auto inner = text.substr(open + 1, text.size() - open - 2);
  double value = 0.0;
  const auto [end, ec] = std::from_chars(inner.data(), inner.data() + inner.size(), value);
  if (ec != std::errc() || end != inner.data() + inner.size()) {
    throw Error(ErrorCode::InvalidConfig, "bad parameter in weight profile `" + std::string(text) + "`");
  }
  return value;
}

Stake checked_stake(double value, const WeightProfile& profile) {
  const double rounded = std::round(value);
  if (!(rounded <= static_cast<double>(std::numeric_limits<Stake>::max()))) {
    throw Error(ErrorCode::Overflow, "weight profile " + to_string(profile) + " produces a stake beyond 32 bits");
  }
  return static_cast<Stake>(rounded);
}

}  // namespace

WeightProfile parse_weight_profile(std::string_view text) {
  const auto name = text.substr(0, text.find('('));
  if (name == "uniform" && name.size() == text.size()) return {WeightProfile::Kind::Uniform, 0.0};
  if (name == "linear_ramp" && name.size() == text.size()) return {WeightProfile::Kind::LinearRamp, 0.0};
  if (name == "one_dominant") {
    const double f = parse_param(text, name);
    if (!(f > 0.0 && f < 1.0)) throw Error(ErrorCode::InvalidConfig, "one_dominant fraction must lie in (0, 1)");
    return {WeightProfile::Kind::OneDominant, f};
  }
  if (name == "zipf") {
    const double s = parse_param(text, name);
    if (!(s >= 0.0 && std::isfinite(s))) throw Error(ErrorCode::InvalidConfig, "zipf exponent must be >= 0");
    return {WeightProfile::Kind::Zipf, s};
  }
  throw Error(ErrorCode::InvalidConfig, "unknown weight profile `" + std::string(text) + "`");
}

std::string to_string(const WeightProfile& profile) {
  std::ostringstream out;
  switch (profile.kind) {
    case WeightProfile::Kind::Uniform: return "uniform";
    case WeightProfile::Kind::LinearRamp: return "linear_ramp";
    case WeightProfile::Kind::OneDominant: out << "one_dominant(" << profile.param << ')'; break;
    case WeightProfile::Kind::Zipf: out << "zipf(" << profile.param << ')'; break;
  }
  return out.str();
}

std::vector<Stake> make_weights(const WeightProfile& profile, std::size_t n) {
  if (n == 0) throw Error(ErrorCode::InvalidConfig, "weight profile needs at least one peer");
  std::vector<Stake> weights(n, 1);
  switch (profile.kind) {
    case WeightProfile::Kind::Uniform:
      break;
    case WeightProfile::Kind::LinearRamp:
      if (n > std::numeric_limits<Stake>::max()) throw Error(ErrorCode::Overflow, "linear_ramp too long");
      for (std::size_t i = 0; i < n; ++i) weights[i] = static_cast<Stake>(i + 1);
      break;
    case WeightProfile::Kind::OneDominant: {
      if (n < 2) throw Error(ErrorCode::InvalidConfig, "one_dominant needs at least two peers");
      const double f = profile.param;
      weights[0] = checked_stake(f * static_cast<double>(n - 1) / (1.0 - f), profile);
      if (weights[0] == 0) weights[0] = 1;
      break;
    }
    case WeightProfile::Kind::Zipf: {
      const auto size = static_cast<double>(n);
      for (std::size_t i = 0; i < n; ++i) {
        weights[i] = checked_stake(std::pow(size / static_cast<double>(i + 1), profile.param), profile);
      }
      break;
    }
  }
  return weights;
}

}  // namespace peerwheel
