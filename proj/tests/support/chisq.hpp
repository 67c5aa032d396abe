#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

namespace testsupport {

// Upper critical value of the chi-squared distribution via the
// Wilson-Hilferty cube approximation: if X ~ chi2(k) then (X/k)^(1/3) is
// approximately normal with mean 1 - 2/(9k) and variance 2/(9k). Accurate to
// well under a percent for the dof used here.
inline double chi_squared_critical(double dof, double significance) {
  double z = 0.0;
  if (significance == 0.05) {
    z = 1.6448536269514722;
  } else if (significance == 0.01) {
    z = 2.3263478740408408;
  } else if (significance == 0.001) {
    z = 3.090232306167813;
  } else {
    throw std::invalid_argument("chi_squared_critical: unsupported level");
  }
  const double a = 2.0 / (9.0 * dof);
  const double base = 1.0 - a + z * std::sqrt(a);
  return dof * base * base * base;
}

struct GofResult {
  double statistic = 0.0;
  double dof = 0.0;
  double critical = 0.0;
  bool pass = false;
};

// Pearson goodness-of-fit of observed counts against expected probabilities.
// Cells are merged from the tail upwards until every expected count is at
// least 5, the usual validity floor for the chi-squared approximation.
inline GofResult chi_squared_gof(std::span<const std::uint64_t> observed,
                                 std::span<const double> expected_probs,
                                 double significance) {
  if (observed.size() != expected_probs.size() || observed.empty()) {
    throw std::invalid_argument("chi_squared_gof: size mismatch");
  }
  std::uint64_t total = 0;
  for (const auto o : observed) total += o;

  std::vector<double> merged_expected;
  std::vector<double> merged_observed;
  double acc_e = 0.0;
  double acc_o = 0.0;
  for (std::size_t i = 0; i < observed.size(); ++i) {
    acc_e += expected_probs[i] * static_cast<double>(total);
    acc_o += static_cast<double>(observed[i]);
    if (acc_e >= 5.0) {
      merged_expected.push_back(acc_e);
      merged_observed.push_back(acc_o);
      acc_e = acc_o = 0.0;
    }
  }
  if (acc_e > 0.0 || acc_o > 0.0) {
    if (merged_expected.empty()) {
      merged_expected.push_back(acc_e);
      merged_observed.push_back(acc_o);
    } else {
      merged_expected.back() += acc_e;
      merged_observed.back() += acc_o;
    }
  }

  GofResult result;
  for (std::size_t i = 0; i < merged_expected.size(); ++i) {
    const double diff = merged_observed[i] - merged_expected[i];
    result.statistic += diff * diff / merged_expected[i];
  }
  result.dof = static_cast<double>(merged_expected.size()) - 1.0;
  if (result.dof < 1.0) result.dof = 1.0;
  result.critical = chi_squared_critical(result.dof, significance);
  result.pass = result.statistic <= result.critical;
  return result;
}

}  // namespace testsupport
