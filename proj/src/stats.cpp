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

#include "halfstable/stats.hpp"

#include <algorithm>
#include <cmath>

#include "halfstable/errors.hpp"

namespace halfstable {

Estimate estimate_from_samples(const std::vector<double>& samples) {
  if (samples.empty()) throw DomainError("estimate needs at least one sample");
  // Compensated summation keeps aggregates independent of work ordering.
  double sum = 0.0, comp = 0.0;
  for (double v : samples) {
    const double y = v - comp;
    const double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
  }
  const double n = static_cast<double>(samples.size());
  const double mean = sum / n;
  double ss = 0.0;
  for (double v : samples) {
    const double dv = v - mean;
    ss += dv * dv;
  }
  Estimate e;
  e.mean = mean;
  e.n = static_cast<long>(samples.size());
  e.std_error = samples.size() > 1 ? std::sqrt(ss / (n - 1.0) / n) : 0.0;
  return e;
}

ExponentFit fit_exponent(const std::vector<std::pair<double, Estimate>>& points) {
  if (points.size() < 3)
    throw DegenerateFit("exponent fit needs at least 3 points");
  const std::size_t n = points.size();
  std::vector<double> t(n), y(n), vy(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double x = points[i].first;
    const Estimate& e = points[i].second;
    if (!(x > 0.0)) throw DegenerateFit("exponent fit needs positive x");
    if (!(e.mean > 0.0)) throw DegenerateFit("exponent fit needs positive means");
    t[i] = std::log(x);
    y[i] = std::log(e.mean);
    const double rel = e.std_error / e.mean;
    vy[i] = rel * rel;
  }
  double tbar = 0.0, ybar = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    tbar += t[i];
    ybar += y[i];
  }
  tbar /= static_cast<double>(n);
  ybar /= static_cast<double>(n);
  double stt = 0.0, sty = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    stt += (t[i] - tbar) * (t[i] - tbar);
    sty += (t[i] - tbar) * (y[i] - ybar);
  }
  if (!(stt > 0.0)) throw DegenerateFit("exponent fit needs distinct x values");

  ExponentFit fit;
  fit.slope = sty / stt;
  fit.intercept = ybar - fit.slope * tbar;

  double var_slope = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double c = (t[i] - tbar) / stt;
    var_slope += c * c * vy[i];
  }
  fit.slope_std_error = std::sqrt(var_slope);

  double ss_res = 0.0, ss_tot = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double pred = fit.intercept + fit.slope * t[i];
    ss_res += (y[i] - pred) * (y[i] - pred);
    ss_tot += (y[i] - ybar) * (y[i] - ybar);
  }
  fit.r_squared = ss_tot > 0.0 ? std::max(0.0, 1.0 - ss_res / ss_tot) : 1.0;
  return fit;
}

KsResult ks_test(std::vector<double> samples, double (*cdf)(double, double),
                 double cdf_param) {
  if (samples.empty()) throw DomainError("ks test needs samples");
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  double d = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double f = cdf(samples[i], cdf_param);
    d = std::max(d, std::abs(f - static_cast<double>(i) / n));
    d = std::max(d, std::abs(static_cast<double>(i + 1) / n - f));
  }
  // Asymptotic Kolmogorov distribution tail.
  const double lambda = (std::sqrt(n) + 0.12 + 0.11 / std::sqrt(n)) * d;
  double p = 0.0;
  double sign = 1.0;
  for (int k = 1; k <= 100; ++k) {
    p += sign * 2.0 * std::exp(-2.0 * lambda * lambda * k * k);
    sign = -sign;
  }
  KsResult r;
  r.statistic = d;
  r.p_value = std::clamp(p, 0.0, 1.0);
  return r;
}

}  // namespace halfstable
