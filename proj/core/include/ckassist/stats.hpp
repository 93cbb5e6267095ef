// Copyright 2026 The ckassist Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace ckassist::stats {

enum class CiMethod { kClopperPearson, kBootstrapPercentile, kWilson };

std::string_view to_string(CiMethod method);

struct ConfidenceInterval {
  double lo = 0.0;
  double hi = 0.0;
  double level = 0.95;
  CiMethod method = CiMethod::kClopperPearson;
};

struct TestResult {
  double statistic = 0.0;
  double p_value = 1.0;
  /// True for closed-form / exact tests; false for permutation tests.
  bool exact = true;
  std::size_t n_permutations = 0;
  std::optional<std::uint64_t> seed;
  /// Set when the data carry no variation and the test is vacuous (p = 1).
  bool degenerate = false;
  /// Signed effect where the statistic is an absolute value.
  std::optional<double> effect;
  std::string_view method;
};

// --- Special functions --------------------------------------------------

/// Regularized incomplete beta I_x(a, b) for a, b > 0 and x in [0, 1].
double incomplete_beta(double a, double b, double x);

/// x such that I_x(a, b) = p, by bisection to absolute tolerance `tol`.
double beta_quantile(double a, double b, double p, double tol = 1e-10);

/// Standard normal quantile.
double normal_quantile(double p);

// --- Intervals ------------------------------------------------------------

/// Exact binomial interval from Beta quantiles.
ConfidenceInterval clopper_pearson(std::int64_t successes, std::int64_t trials, double level = 0.95);

/// Wilson score interval for a sample proportion.
ConfidenceInterval proportion_ci(std::int64_t successes, std::int64_t trials, double level = 0.95);

/// Percentile bootstrap over `n_units` resampling units. `statistic`
/// receives the indices of one resample (drawn with replacement).
ConfidenceInterval bootstrap_ci_indices(
    std::size_t n_units, const std::function<double(std::span<const std::size_t>)>& statistic,
    std::size_t n_boot, double level, std::uint64_t seed);

/// Percentile bootstrap of `statistic` over `samples`.
ConfidenceInterval bootstrap_ci(std::span<const double> samples,
                                const std::function<double(std::span<const double>)>& statistic,
                                std::size_t n_boot, double level, std::uint64_t seed);

double mean(std::span<const double> values);

// --- Tests ------------------------------------------------------------------

/// Benjamini-Hochberg step-up adjustment, returned in input order.
std::vector<double> bh_adjust(std::span<const double> p_values);

/// Exact upper-tail binomial test P(X >= successes), X ~ Bin(trials, p0).
TestResult binom_test_one_sided(std::int64_t successes, std::int64_t trials, double p0 = 0.5);

/// Mean within-group sample variance (ddof = 1).
double mean_within_variance(const std::vector<std::vector<double>>& groups);

/// One-sided permutation test that within-paper variation is smaller than
/// expected under exchangeable paper labels. Rows are papers, columns runs;
/// row lengths may differ and are preserved by the relabelling.
TestResult perm_test_within_across(const std::vector<std::vector<double>>& scores,
                                   std::size_t n_perm, std::uint64_t seed);

inline constexpr std::size_t kDefaultPermutations = 50'000;

/// Two-sided label-shuffle test on |mean(a) - mean(b)| for binary outcomes.
/// `effect` carries mean(b) - mean(a).
TestResult perm_test_proportions(std::span<const int> group_a, std::span<const int> group_b,
                                 std::size_t n_perm = kDefaultPermutations,
                                 std::uint64_t seed = 0);

}  // namespace ckassist::stats
