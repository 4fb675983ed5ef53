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

// Test-only independent oracles: fixed-grid Riemann sums and plain Monte
// Carlo estimates used to pin expected values. These deliberately avoid
// the adaptive integration path of the library.

#ifndef HALFSTABLE_TESTS_ORACLES_HPP
#define HALFSTABLE_TESTS_ORACLES_HPP

#include <cmath>

#include "halfstable/kernel.hpp"
#include "halfstable/rng.hpp"
#include "halfstable/stats.hpp"

namespace testoracle {

// Midpoint-rule evaluation of the d=1 killing constant using the same two
// endpoint substitutions as the library (s = exp(-v) near 0 and
// 1-s = (1-w)^{1/(2-alpha)} near 1) on fixed grids of n/2 nodes each.
inline double riemann_c_constant_d1(const halfstable::TripleKernel& k, long n) {
  const auto& prm = k.params();
  const double alpha = prm.alpha, p = prm.p;
  const long half = n / 2;

  // decay rate of the transformed integrand near s=0 (log factors ignored)
  const double lambda = alpha + prm.beta1 - p;
  const double v0 = std::log(2.0);
  const double vmax = v0 + std::max(80.0, 120.0 / lambda);
  double sum = 0.0;
  const double hv = (vmax - v0) / static_cast<double>(half);
  for (long i = 0; i < half; ++i) {
    const double v = v0 + (static_cast<double>(i) + 0.5) * hv;
    const double s = std::exp(-v);
    const double oms = -std::expm1(-v);
    const double f1 = -std::expm1(-v * p);
    const double f2 = -std::expm1(-v * (p + 1.0 - alpha));
    const double A = k.eval(1.0, s, oms);
    double val = 0.0;
    if (A > 0.0) {
      const double expo = v * (p - alpha) + std::log(A) -
                          (1.0 + alpha) * std::log(oms);
      if (expo > -700.0) val = f1 * f2 * std::exp(expo);
    }
    sum += val * hv;
  }

  const double wlo = 1.0 - std::pow(0.5, 2.0 - alpha);
  const double hw = (1.0 - wlo) / static_cast<double>(half);
  for (long i = 0; i < half; ++i) {
    const double w = wlo + (static_cast<double>(i) + 0.5) * hw;
    const double oms = std::pow(1.0 - w, 1.0 / (2.0 - alpha));
    const double ls = std::log1p(-oms);
    const double a1 = std::expm1(p * ls);
    const double a2 = -std::expm1((alpha - p - 1.0) * ls);
    const double ghat = a1 * a2 / (oms * oms);
    sum += ghat * k.eval(1.0, 1.0 - oms, oms) / (2.0 - alpha) * hw;
  }
  return sum;
}

// Plain Monte Carlo for the d=2 double integral: the horizontal offset is
// mapped through u = tan(theta), which turns the outer weight into
// cos(theta)^alpha; (theta, s) are sampled uniformly.
inline halfstable::Estimate mc_c_constant_d2(const halfstable::TripleKernel& k,
                                             long n, std::uint64_t seed) {
  const auto& prm = k.params();
  const double alpha = prm.alpha, p = prm.p;
  halfstable::Rng rng(seed);
  double sum = 0.0, sumsq = 0.0;
  const double pi = 3.14159265358979323846;
  for (long i = 0; i < n; ++i) {
    const double theta = pi * (rng.uniform_co() - 0.5);
    const double s = rng.uniform();
    const double c = std::cos(theta);
    const double ls = std::log(s);
    const double f1 = std::expm1(p * ls);
    const double f2 = -std::expm1((alpha - p - 1.0) * ls);
    const double g = f1 * f2 / std::pow(1.0 - s, 1.0 + alpha);
    const double u = (1.0 - s) / c;
    const double val = std::pow(c, alpha) * g * k.eval(1.0, s, u);
    sum += val;
    sumsq += val * val;
  }
  const double mean = sum / static_cast<double>(n);
  const double var = sumsq / static_cast<double>(n) - mean * mean;
  halfstable::Estimate e;
  e.mean = pi * mean;
  e.std_error = pi * std::sqrt(var / static_cast<double>(n));
  e.n = n;
  return e;
}

inline double exponential_cdf(double x, double rate) {
  return x <= 0.0 ? 0.0 : -std::expm1(-rate * x);
}

}  // namespace testoracle

#endif
