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

#ifndef HALFSTABLE_NONLOCAL_HPP
#define HALFSTABLE_NONLOCAL_HPP

#include <functional>
#include <utility>
#include <vector>

#include "halfstable/kernel.hpp"
#include "halfstable/quadrature.hpp"

namespace halfstable {

/// Test functions the principal-value evaluator accepts.
///
/// Power(q):      y -> y_d^q on the whole half-space.
/// BoxedPower(q): y -> y_d^q restricted to the box D(1,1).
/// Constant(c):   y -> c.
/// User:          arbitrary function with a declared support radius
///                (vanishes outside B(0, radius)); full-dimension cubature,
///                d <= 3 only.
struct TestFunction {
  enum class Tag { Power, BoxedPower, Constant, User };

  Tag tag = Tag::Constant;
  double exponent = 0.0;
  double value = 0.0;
  std::function<double(const HalfSpacePoint&)> fn;
  double support_radius = 0.0;

  static TestFunction power(double q);
  static TestFunction boxed_power(double q);
  static TestFunction constant(double c);
  static TestFunction user(std::function<double(const HalfSpacePoint&)> f,
                           double support_radius);

  double operator()(const HalfSpacePoint& y) const;
};

struct PVResult {
  double value = 0.0;
  double error_estimate = 0.0;
  double epsilon_used = 0.0;
  long n_evals = 0;
};

/// Principal value of the jump part of the generator at x:
///   p.v. integral over the half-space of (f(y)-f(x)) B(x,y) |y-x|^{-d-alpha}.
///
/// The integral is split at |y-x| = x_d/2. Inside, opposite displacements
/// are paired, which cancels the singular odd part exactly for the Tilde
/// and Hat shapes (their boundary term is constant on the inner ball) and
/// reduces it to an O(|z|^{beta1+beta2}) remainder for Bar; a small ball
/// of radius epsilon is dropped entirely, with the analytic remainder
/// bound added to the error estimate. Outside, the triple form reduces
/// everything to a 2-D iterated integral in (horizontal radius, height).
///
/// epsilon_override forces the dropped-ball radius (used by convergence
/// tests); 0 selects it from the curvature bound so the remainder stays
/// below abs_tol/10.
PVResult lb_alpha(const TripleKernel& kernel, const TestFunction& f,
                  const HalfSpacePoint& x, const QuadratureSpec& spec,
                  double epsilon_override = 0.0);

/// Full generator: lb_alpha(f,x) - c_killing x_d^{-alpha} f(x).
PVResult lb(const TripleKernel& kernel, double c_killing,
            const TestFunction& f, const HalfSpacePoint& x,
            const QuadratureSpec& spec);

/// Headline self-test: max over samples of
///   |lb(Power(p), x)| / (c_killing x_d^{p-alpha}).
/// The numerator and denominator come from independent numerical
/// pipelines (PV quadrature vs the killing-constant quadrature).
double residual_gp(const TripleKernel& kernel, double c_killing,
                   const std::vector<HalfSpacePoint>& x_samples,
                   const QuadratureSpec& spec);

/// Sign survey of lb(BoxedPower(q)) on axis points.
struct SignReport {
  double q = 0.0;
  bool expect_positive = false;  // true for q > p at small heights
  double r0 = 0.0;               // empirical positivity threshold (q > p)
  std::vector<std::pair<double, double>> values;  // (z_d, lb value)
  long n_violations = 0;
};

/// For q in (p, alpha+beta1): locates the empirical threshold r0 below
/// which values are positive, then verifies the provided samples below it.
/// For q in ((alpha-1)_+, p): verifies all samples are negative.
SignReport sign_check_hq(const TripleKernel& kernel, double c_killing,
                         double q, const std::vector<double>& zd_samples,
                         const QuadratureSpec& spec);

}  // namespace halfstable

#endif
