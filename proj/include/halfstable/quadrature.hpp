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

#ifndef HALFSTABLE_QUADRATURE_HPP
#define HALFSTABLE_QUADRATURE_HPP

#include <functional>
#include <vector>

namespace halfstable {

/// Tolerances and budgets for the adaptive quadratures.
struct QuadratureSpec {
  double abs_tol = 1e-8;
  double rel_tol = 1e-6;
  int max_subdivisions = 12;  // adaptive recursion depth per segment
  // Break points separating the s->0 and s->1 singular regimes of the
  // killing-constant integrand.
  double split_lo = 0.5;
  double split_hi = 0.5;

  void validate() const;
};

struct QuadResult {
  double value = 0.0;
  double error = 0.0;
  long n_evals = 0;

  QuadResult& operator+=(const QuadResult& o) {
    value += o.value;
    error += o.error;
    n_evals += o.n_evals;
    return *this;
  }
};

using Fn1 = std::function<double(double)>;

/// 1-D building blocks on top of adaptive Gauss-Kronrod. Every call
/// returns an error estimate; callers aggregate those and decide whether
/// the combined result meets spec tolerances.
class Integrator {
public:
  explicit Integrator(const QuadratureSpec& spec) : spec_(spec) {}

  const QuadratureSpec& spec() const { return spec_; }

  /// Adaptive GK15 on a finite interval.
  QuadResult integrate(const Fn1& f, double a, double b, double abs_tol) const;

  /// Same, with interior break points (kinks, support edges).
  QuadResult integrate_with_breaks(const Fn1& f, double a, double b,
                                   std::vector<double> breaks,
                                   double abs_tol) const;

  /// Integral of a decaying function on [a, infinity): geometric segments
  /// of ratio 2 until contributions fall below the budget, then an
  /// empirical-ratio bound on the remaining tail is added to the error.
  QuadResult integrate_decaying(const Fn1& f, double a, double abs_tol,
                                int max_segments = 64) const;

  /// Integral on (0, a] of a function with an integrable endpoint
  /// singularity at 0, via the substitution s = exp(-v).
  QuadResult integrate_to_zero(const Fn1& f, double a, double abs_tol) const;

  /// Integral on [a, infinity) of a function with an algebraic tail
  /// decaying at least like x^{-1-delta}, via the substitution x = 1/t.
  QuadResult integrate_algebraic_tail(const Fn1& f, double a,
                                      double abs_tol) const;

private:
  QuadratureSpec spec_;
};

}  // namespace halfstable

#endif
