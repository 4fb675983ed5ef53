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

#include "halfstable/quadrature.hpp"

#include <algorithm>
#include <cmath>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "halfstable/errors.hpp"

namespace halfstable {

void QuadratureSpec::validate() const {
  if (!(abs_tol > 0.0) || !(rel_tol > 0.0))
    throw DomainError("quadrature tolerances must be positive");
  if (max_subdivisions < 8)
    throw DomainError("max_subdivisions must be at least 8");
  if (!(split_lo > 0.0 && split_lo < 1.0) || !(split_hi > 0.0 && split_hi < 1.0) ||
      split_lo > split_hi)
    throw DomainError("endpoint splits must satisfy 0 < lo <= hi < 1");
}

QuadResult Integrator::integrate(const Fn1& f, double a, double b,
                                 double abs_tol) const {
  QuadResult r;
  if (a == b) return r;
  long evals = 0;
  auto counted = [&](double x) {
    ++evals;
    return f(x);
  };
  double err = 0.0;
  // Boost terminates on relative error. Its |GK15-G7| estimates are
  // conservative, so drive termination well below the requested
  // tolerances and keep the returned estimate for our own bookkeeping.
  const double tol = std::max(1e-14, std::min(spec_.rel_tol * 1e-4, 1e-10));
  r.value = boost::math::quadrature::gauss_kronrod<double, 15>::integrate(
      counted, a, b, spec_.max_subdivisions, tol, &err);
  (void)abs_tol;
  r.error = err;
  r.n_evals = evals;
  return r;
}

QuadResult Integrator::integrate_with_breaks(const Fn1& f, double a, double b,
                                             std::vector<double> breaks,
                                             double abs_tol) const {
  breaks.push_back(a);
  breaks.push_back(b);
  std::sort(breaks.begin(), breaks.end());
  QuadResult total;
  double prev = a;
  for (double x : breaks) {
    if (x <= prev || x < a) continue;
    if (x > b) break;
    total += integrate(f, prev, x, abs_tol);
    prev = x;
  }
  if (prev < b) total += integrate(f, prev, b, abs_tol);
  return total;
}

QuadResult Integrator::integrate_decaying(const Fn1& f, double a,
                                          double abs_tol,
                                          int max_segments) const {
  QuadResult total;
  double lo = a;
  double width = std::max(std::abs(a), 1.0);
  double prev_mag = -1.0;
  int small_streak = 0;
  double last_mag = 0.0;
  for (int seg = 0; seg < max_segments; ++seg) {
    const double hi = lo + width;
    const QuadResult piece = integrate(f, lo, hi, abs_tol);
    total += piece;
    const double mag = std::abs(piece.value);
    if (mag < abs_tol / 10.0) {
      if (++small_streak >= 2) {
        // Bound the remaining tail geometrically from the observed decay.
        double q = 0.5;
        if (prev_mag > 0.0 && mag > 0.0) q = std::min(0.9, mag / prev_mag);
        total.error += mag * q / (1.0 - q) + abs_tol / 10.0;
        return total;
      }
    } else {
      small_streak = 0;
    }
    prev_mag = mag > 0.0 ? mag : prev_mag;
    last_mag = mag;
    lo = hi;
    width *= 2.0;
  }
  throw NonConvergence("tail integration did not decay within segment budget"
                       " (last segment magnitude " + std::to_string(last_mag) + ")");
}

QuadResult Integrator::integrate_to_zero(const Fn1& f, double a,
                                         double abs_tol) const {
  // s = exp(-v): integral on (0,a] becomes a decaying integral in v.
  auto g = [&](double v) {
    const double s = std::exp(-v);
    return f(s) * s;
  };
  return integrate_decaying(g, -std::log(a), abs_tol);
}

QuadResult Integrator::integrate_algebraic_tail(const Fn1& f, double a,
                                                double abs_tol) const {
  if (!(a > 0.0)) throw DomainError("algebraic tail needs a positive left end");
  // x = 1/t maps [a,inf) to (0, 1/a]; an x^{-1-delta} tail becomes an
  // integrable t^{delta-1} endpoint, which the adaptive rule resolves.
  auto g = [&](double t) {
    const double x = 1.0 / t;
    return f(x) * x * x;
  };
  return integrate(g, 0.0, 1.0 / a, abs_tol);
}

}  // namespace halfstable
