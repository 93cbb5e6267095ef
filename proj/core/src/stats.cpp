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

#include "ckassist/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <thread>

#include "ckassist/error.hpp"
#include "ckassist/rng.hpp"

namespace ckassist::stats {

std::string_view to_string(CiMethod method) {
  switch (method) {
    case CiMethod::kClopperPearson: return "clopper_pearson";
    case CiMethod::kBootstrapPercentile: return "bootstrap_percentile";
    case CiMethod::kWilson: return "wilson";
  }
  return "unknown";
}

namespace {

void require(bool ok, const char* what) {
  if (!ok) throw PreconditionError(what);
}

void require_level(double level) { require(level > 0.0 && level < 1.0, "level must lie in (0, 1)"); }

// Continued fraction for the incomplete beta (modified Lentz).
double beta_cf(double a, double b, double x) {
  constexpr int kMaxIter = 10'000;
  constexpr double kEps = 1e-16;
  constexpr double kTiny = 1e-300;
  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::fabs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIter; ++m) {
    const double m2 = 2.0 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < kEps) break;
  }
  return h;
}

}  // namespace

double incomplete_beta(double a, double b, double x) {
  require(a > 0.0 && b > 0.0, "incomplete_beta: a and b must be positive");
  require(x >= 0.0 && x <= 1.0, "incomplete_beta: x must lie in [0, 1]");
  if (x == 0.0) return 0.0;
  if (x == 1.0) return 1.0;
  const double log_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                           a * std::log(x) + b * std::log1p(-x);
  const double front = std::exp(log_front);
  if (x < (a + 1.0) / (a + b + 2.0)) return front * beta_cf(a, b, x) / a;
  return 1.0 - front * beta_cf(b, a, 1.0 - x) / b;
}

double beta_quantile(double a, double b, double p, double tol) {
  require(p >= 0.0 && p <= 1.0, "beta_quantile: p must lie in [0, 1]");
  double lo = 0.0;
  double hi = 1.0;
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    if (incomplete_beta(a, b, mid) < p) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

double normal_quantile(double p) {
  require(p > 0.0 && p < 1.0, "normal_quantile: p must lie in (0, 1)");
  // Phi(z) = erfc(-z / sqrt 2) / 2 is increasing; bisect on it.
  double lo = -40.0;
  double hi = 40.0;
  for (int i = 0; i < 200 && hi - lo > 1e-14; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (0.5 * std::erfc(-mid / std::numbers::sqrt2) < p) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

ConfidenceInterval clopper_pearson(std::int64_t successes, std::int64_t trials, double level) {
  require(trials >= 1, "clopper_pearson: trials must be >= 1");
  require(successes >= 0 && successes <= trials, "clopper_pearson: need 0 <= successes <= trials");
  require_level(level);
  const double alpha = 1.0 - level;
  const auto k = static_cast<double>(successes);
  const auto n = static_cast<double>(trials);
  ConfidenceInterval ci{0.0, 1.0, level, CiMethod::kClopperPearson};
  if (successes > 0) ci.lo = beta_quantile(k, n - k + 1.0, alpha / 2.0);
  if (successes < trials) ci.hi = beta_quantile(k + 1.0, n - k, 1.0 - alpha / 2.0);
  return ci;
}

ConfidenceInterval proportion_ci(std::int64_t successes, std::int64_t trials, double level) {
  require(trials >= 1, "proportion_ci: trials must be >= 1");
  require(successes >= 0 && successes <= trials, "proportion_ci: need 0 <= successes <= trials");
  require_level(level);
  const double z = normal_quantile(1.0 - (1.0 - level) / 2.0);
  const auto n = static_cast<double>(trials);
  const double p = static_cast<double>(successes) / n;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / n;
  const double centre = (p + z2 / (2.0 * n)) / denom;
  const double half = z / denom * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n));
  ConfidenceInterval ci{std::max(0.0, centre - half), std::min(1.0, centre + half), level,
                        CiMethod::kWilson};
  if (successes == 0) ci.lo = 0.0;
  if (successes == trials) ci.hi = 1.0;
  return ci;
}

namespace {

// Linear interpolation between order statistics (Hyndman-Fan type 7).
double quantile_sorted(const std::vector<double>& sorted, double q) {
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const auto i = static_cast<std::size_t>(std::floor(pos));
  const double frac = pos - static_cast<double>(i);
  if (i + 1 >= sorted.size()) return sorted.back();
  return sorted[i] + frac * (sorted[i + 1] - sorted[i]);
}

constexpr std::size_t kChunk = 1024;

std::size_t worker_count(std::size_t chunks) {
  const std::size_t hw = std::max(1u, std::thread::hardware_concurrency());
  return std::max<std::size_t>(1, std::min(hw, chunks));
}

// Runs body(chunk_index, begin, end) for fixed-size chunks of [0, total).
// Chunk boundaries, and hence per-chunk seeds, do not depend on thread count.
template <typename Body>
void for_chunks(std::size_t total, Body body) {
  const std::size_t chunks = (total + kChunk - 1) / kChunk;
  const std::size_t workers = worker_count(chunks);
  auto run = [&](std::size_t w) {
    for (std::size_t c = w; c < chunks; c += workers) {
      body(c, c * kChunk, std::min(total, (c + 1) * kChunk));
    }
  };
  if (workers == 1) {
    run(0);
    return;
  }
  std::vector<std::jthread> pool;
  pool.reserve(workers - 1);
  for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(run, w);
  run(0);
}

}  // namespace

ConfidenceInterval bootstrap_ci_indices(
    std::size_t n_units, const std::function<double(std::span<const std::size_t>)>& statistic,
    std::size_t n_boot, double level, std::uint64_t seed) {
  require(n_units >= 1, "bootstrap_ci: samples must be nonempty");
  require(n_boot >= 100, "bootstrap_ci: n_boot must be >= 100");
  require_level(level);
  std::vector<double> stats(n_boot);
  for_chunks(n_boot, [&](std::size_t chunk, std::size_t begin, std::size_t end) {
    Rng rng(Rng::derive(seed, chunk));
    std::vector<std::size_t> idx(n_units);
    for (std::size_t b = begin; b < end; ++b) {
      for (auto& i : idx) i = static_cast<std::size_t>(rng.below(n_units));
      stats[b] = statistic(idx);
    }
  });
  std::sort(stats.begin(), stats.end());
  const double alpha = 1.0 - level;
  return {quantile_sorted(stats, alpha / 2.0), quantile_sorted(stats, 1.0 - alpha / 2.0), level,
          CiMethod::kBootstrapPercentile};
}

ConfidenceInterval bootstrap_ci(std::span<const double> samples,
                                const std::function<double(std::span<const double>)>& statistic,
                                std::size_t n_boot, double level, std::uint64_t seed) {
  return bootstrap_ci_indices(
      samples.size(),
      [&](std::span<const std::size_t> idx) {
        std::vector<double> resample(idx.size());
        for (std::size_t i = 0; i < idx.size(); ++i) resample[i] = samples[idx[i]];
        return statistic(resample);
      },
      n_boot, level, seed);
}

double mean(std::span<const double> values) {
  require(!values.empty(), "mean: empty input");
  return std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
}

std::vector<double> bh_adjust(std::span<const double> p_values) {
  for (double p : p_values) {
    if (!(p >= 0.0 && p <= 1.0)) throw PreconditionError("bh_adjust: p-values must lie in [0, 1]");
  }
  const std::size_t m = p_values.size();
  std::vector<std::size_t> order(m);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return p_values[a] < p_values[b]; });
  std::vector<double> out(m);
  double running = 1.0;
  for (std::size_t r = m; r-- > 0;) {
    const double scaled = p_values[order[r]] * static_cast<double>(m) / static_cast<double>(r + 1);
    running = std::min(running, std::min(1.0, scaled));
    out[order[r]] = running;
  }
  return out;
}

TestResult binom_test_one_sided(std::int64_t successes, std::int64_t trials, double p0) {
  require(trials >= 0, "binom_test: trials must be >= 0");
  require(successes >= 0 && successes <= trials, "binom_test: need 0 <= successes <= trials");
  require(p0 > 0.0 && p0 < 1.0, "binom_test: p0 must lie in (0, 1)");
  TestResult r;
  r.statistic = static_cast<double>(successes);
  r.method = "binomial_exact_upper";
  if (successes == 0) {
    r.p_value = 1.0;
    return r;
  }
  const auto n = static_cast<double>(trials);
  const double lp = std::log(p0);
  const double lq = std::log1p(-p0);
  const double lgn = std::lgamma(n + 1.0);
  std::vector<double> terms;
  terms.reserve(static_cast<std::size_t>(trials - successes + 1));
  for (std::int64_t k = successes; k <= trials; ++k) {
    const auto kd = static_cast<double>(k);
    terms.push_back(lgn - std::lgamma(kd + 1.0) - std::lgamma(n - kd + 1.0) + kd * lp +
                    (n - kd) * lq);
  }
  const double top = *std::max_element(terms.begin(), terms.end());
  double acc = 0.0;
  for (double t : terms) acc += std::exp(t - top);
  r.p_value = std::clamp(std::exp(top + std::log(acc)), 0.0, 1.0);
  return r;
}

double mean_within_variance(const std::vector<std::vector<double>>& groups) {
  double total = 0.0;
  for (const auto& g : groups) {
    require(g.size() >= 2, "within variance needs >= 2 values per group");
    const double mu = std::accumulate(g.begin(), g.end(), 0.0) / static_cast<double>(g.size());
    double ss = 0.0;
    for (double v : g) ss += (v - mu) * (v - mu);
    total += ss / static_cast<double>(g.size() - 1);
  }
  return total / static_cast<double>(groups.size());
}

namespace {

constexpr double kTieTolerance = 1e-12;

double within_variance_flat(const std::vector<double>& flat, const std::vector<std::size_t>& sizes) {
  double total = 0.0;
  std::size_t at = 0;
  for (std::size_t n : sizes) {
    double mu = 0.0;
    for (std::size_t i = 0; i < n; ++i) mu += flat[at + i];
    mu /= static_cast<double>(n);
    double ss = 0.0;
    for (std::size_t i = 0; i < n; ++i) ss += (flat[at + i] - mu) * (flat[at + i] - mu);
    total += ss / static_cast<double>(n - 1);
    at += n;
  }
  return total / static_cast<double>(sizes.size());
}

}  // namespace

TestResult perm_test_within_across(const std::vector<std::vector<double>>& scores,
                                   std::size_t n_perm, std::uint64_t seed) {
  require(scores.size() >= 2, "perm_test_within_across: need >= 2 papers");
  require(n_perm >= 1, "perm_test_within_across: n_perm must be >= 1");
  std::vector<double> flat;
  std::vector<std::size_t> sizes;
  for (const auto& row : scores) {
    require(row.size() >= 2, "perm_test_within_across: need >= 2 runs per paper");
    sizes.push_back(row.size());
    flat.insert(flat.end(), row.begin(), row.end());
  }
  TestResult r;
  r.exact = false;
  r.n_permutations = n_perm;
  r.seed = seed;
  r.method = "permutation_within_across";
  r.statistic = within_variance_flat(flat, sizes);
  const auto [mn, mx] = std::minmax_element(flat.begin(), flat.end());
  if (*mx - *mn <= kTieTolerance) {
    r.p_value = 1.0;
    r.degenerate = true;
    return r;
  }
  const std::size_t chunks = (n_perm + kChunk - 1) / kChunk;
  std::vector<std::size_t> hits(chunks, 0);
  for_chunks(n_perm, [&](std::size_t chunk, std::size_t begin, std::size_t end) {
    Rng rng(Rng::derive(seed, chunk));
    std::vector<double> work = flat;
    std::size_t count = 0;
    for (std::size_t b = begin; b < end; ++b) {
      rng.shuffle(std::span<double>(work));
      if (within_variance_flat(work, sizes) <= r.statistic + kTieTolerance) ++count;
    }
    hits[chunk] = count;
  });
  const std::size_t b = std::accumulate(hits.begin(), hits.end(), std::size_t{0});
  r.p_value = static_cast<double>(b + 1) / static_cast<double>(n_perm + 1);
  return r;
}

TestResult perm_test_proportions(std::span<const int> group_a, std::span<const int> group_b,
                                 std::size_t n_perm, std::uint64_t seed) {
  require(!group_a.empty() && !group_b.empty(), "perm_test_proportions: groups must be nonempty");
  require(n_perm >= 1, "perm_test_proportions: n_perm must be >= 1");
  for (int v : group_a) require(v == 0 || v == 1, "perm_test_proportions: outcomes must be 0 or 1");
  for (int v : group_b) require(v == 0 || v == 1, "perm_test_proportions: outcomes must be 0 or 1");
  const std::size_t na = group_a.size();
  const std::size_t nb = group_b.size();
  const auto sum_a = std::accumulate(group_a.begin(), group_a.end(), std::int64_t{0});
  const auto sum_b = std::accumulate(group_b.begin(), group_b.end(), std::int64_t{0});
  const double mean_a = static_cast<double>(sum_a) / static_cast<double>(na);
  const double mean_b = static_cast<double>(sum_b) / static_cast<double>(nb);

  TestResult r;
  r.exact = false;
  r.n_permutations = n_perm;
  r.seed = seed;
  r.method = "permutation_proportions";
  r.statistic = std::fabs(mean_a - mean_b);
  r.effect = mean_b - mean_a;

  std::vector<int> pooled(group_a.begin(), group_a.end());
  pooled.insert(pooled.end(), group_b.begin(), group_b.end());
  const auto total = sum_a + sum_b;
  const std::size_t chunks = (n_perm + kChunk - 1) / kChunk;
  std::vector<std::size_t> hits(chunks, 0);
  for_chunks(n_perm, [&](std::size_t chunk, std::size_t begin, std::size_t end) {
    Rng rng(Rng::derive(seed, chunk));
    std::vector<int> work = pooled;
    std::size_t count = 0;
    for (std::size_t b = begin; b < end; ++b) {
      rng.shuffle(std::span<int>(work));
      const auto sa = std::accumulate(work.begin(), work.begin() + static_cast<std::ptrdiff_t>(na),
                                      std::int64_t{0});
      const double d = std::fabs(static_cast<double>(sa) / static_cast<double>(na) -
                                 static_cast<double>(total - sa) / static_cast<double>(nb));
      if (d >= r.statistic - kTieTolerance) ++count;
    }
    hits[chunk] = count;
  });
  const std::size_t b = std::accumulate(hits.begin(), hits.end(), std::size_t{0});
  r.p_value = static_cast<double>(b + 1) / static_cast<double>(n_perm + 1);
  return r;
}

}  // namespace ckassist::stats
