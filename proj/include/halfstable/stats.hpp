// Copyright 2026 The halfstable Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef HALFSTABLE_STATS_HPP
#define HALFSTABLE_STATS_HPP

#include <cstddef>
#include <utility>
#include <vector>

namespace halfstable {

/// Sample mean with its standard error.
struct Estimate {
  double mean = 0.0;
  double std_error = 0.0;
  long n = 0;
};

/// Result of an ordinary least-squares fit of log(mean) against log(x).
struct ExponentFit {
  double slope = 0.0;
  double intercept = 0.0;
  double slope_std_error = 0.0;
  double r_squared = 0.0;
};

Estimate estimate_from_samples(const std::vector<double>& samples);

/// OLS on (log x, log mean). The slope standard error is propagated from
/// the per-point standard errors by the delta method
/// (sd of log mean_i ~ std_error_i / mean_i); it is zero when all
/// std_errors are zero. Throws DegenerateFit for fewer than 3 points or a
/// non-positive mean.
ExponentFit fit_exponent(const std::vector<std::pair<double, Estimate>>& points);

/// Two-sided Kolmogorov-Smirnov distance between a sample and a CDF,
/// plus the asymptotic p-value approximation. Used by distributional tests.
struct KsResult {
  double statistic = 0.0;
  double p_value = 0.0;
};
KsResult ks_test(std::vector<double> samples, double (*cdf)(double, double),
                 double cdf_param);

}  // namespace halfstable

#endif
