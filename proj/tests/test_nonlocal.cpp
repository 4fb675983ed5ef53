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

#include "halfstable/nonlocal.hpp"

#include <cmath>

#include "doctest.h"
#include "halfstable/constant.hpp"

using namespace halfstable;

namespace {

KernelParams make_params(int d, double alpha, Variant v, double b1, double b2,
                         double b3, double b4, double p) {
  KernelParams prm;
  prm.d = d;
  prm.alpha = alpha;
  prm.variant = v;
  prm.beta1 = b1;
  prm.beta2 = b2;
  prm.beta3 = b3;
  prm.beta4 = b4;
  prm.p = p;
  return prm;
}

const KernelParams kHalfStable =
    make_params(1, 1.0, Variant::Constant, 0, 0, 0, 0, 0.5);

}  // namespace

TEST_CASE("constant functions are annihilated exactly") {
  TripleKernel k(kHalfStable);
  const PVResult r = lb_alpha(k, TestFunction::constant(3.7),
                              HalfSpacePoint{0.8}, QuadratureSpec{});
  CHECK(r.value == 0.0);
  CHECK(r.n_evals == 0);
}

TEST_CASE("power identity against the closed-form constant (d=1)") {
  TripleKernel k(kHalfStable);
  QuadratureSpec spec;
  // L_alpha g_p(x) = C(alpha,p,B) x^{p-alpha}; here C = 1 and x = 1.
  const PVResult r = lb_alpha(k, TestFunction::power(0.5), HalfSpacePoint{1.0}, spec);
  CHECK(r.value == doctest::Approx(1.0).epsilon(2e-5));

  // full generator kills it
  const PVResult z = lb(k, 1.0, TestFunction::power(0.5), HalfSpacePoint{1.0}, spec);
  CHECK(std::abs(z.value) < 1e-4);

  // lb(const 1) at x=1 equals -C
  const PVResult c = lb(k, 1.0, TestFunction::constant(1.0), HalfSpacePoint{1.0}, spec);
  CHECK(c.value == doctest::Approx(-1.0).epsilon(1e-12));
}

TEST_CASE("power identity holds for exponents other than p") {
  // lb_alpha(G_q)(x) = C(alpha,q,B) x^{q-alpha} for every q in the window
  KernelParams prm = make_params(1, 1.2, Variant::Tilde, 1.0, 0.5, 0.5, 0, 0.8);
  TripleKernel k(prm);
  QuadratureSpec spec;
  for (double q : {0.5, 1.1, 1.9}) {
    KernelParams pq = prm;
    pq.p = q;
    const double cq = c_constant(TripleKernel(pq), spec).value;
    const double x = 0.7;
    const PVResult r = lb_alpha(k, TestFunction::power(q), HalfSpacePoint{x}, spec);
    INFO("q=", q);
    CHECK(r.value ==
          doctest::Approx(cq * std::pow(x, q - prm.alpha)).epsilon(1e-3));
  }
}

TEST_CASE("homogeneity in the evaluation point") {
  KernelParams prm = make_params(1, 0.8, Variant::Tilde, 1.5, 0, 0, 0, 0.6);
  TripleKernel k(prm);
  QuadratureSpec spec;
  const TestFunction g = TestFunction::power(0.6);
  const double v1 = lb_alpha(k, g, HalfSpacePoint{1.0}, spec).value;
  const double v2 = lb_alpha(k, g, HalfSpacePoint{2.0}, spec).value;
  CHECK(v2 / v1 == doctest::Approx(std::pow(2.0, 0.6 - 0.8)).epsilon(1e-6));
}

TEST_CASE("residual harness, d=1 closed-form configuration") {
  TripleKernel k(kHalfStable);
  QuadratureSpec spec;
  const double resid = residual_gp(
      k, 1.0,
      {HalfSpacePoint{0.25}, HalfSpacePoint{1.0}, HalfSpacePoint{4.0}}, spec);
  CHECK(resid <= 1e-3);
}

TEST_CASE("residual harness, d=2 tilde configuration") {
  KernelParams prm = make_params(2, 1.0, Variant::Tilde, 1, 1, 0, 0, 1.0);
  TripleKernel k(prm);
  QuadratureSpec spec;
  const ConstantResult c = c_constant(k, spec);
  const double resid = residual_gp(
      k, c.value, {HalfSpacePoint{0.0, 0.5}, HalfSpacePoint{0.3, 1.0}}, spec);
  CHECK(resid <= 1e-3);
}

TEST_CASE("horizontal translation invariance (d=2)") {
  KernelParams prm = make_params(2, 1.0, Variant::Tilde, 1, 1, 0, 0, 1.0);
  TripleKernel k(prm);
  QuadratureSpec spec;
  const TestFunction g = TestFunction::power(1.3);
  const double v0 = lb_alpha(k, g, HalfSpacePoint{0.0, 0.8}, spec).value;
  const double v1 = lb_alpha(k, g, HalfSpacePoint{5.5, 0.8}, spec).value;
  CHECK(v1 == doctest::Approx(v0).epsilon(1e-12));
}

TEST_CASE("two inner cutoffs agree within the reported error") {
  KernelParams prm = make_params(1, 1.3, Variant::Bar, 1.0, 0.5, 0, 0, 0.9);
  TripleKernel k(prm);
  QuadratureSpec spec;
  const TestFunction g = TestFunction::power(0.9);
  const HalfSpacePoint x{0.6};
  const PVResult a = lb_alpha(k, g, x, spec, 0.05);
  const PVResult b = lb_alpha(k, g, x, spec, 0.025);
  CHECK(std::abs(a.value - b.value) <= a.error_estimate + b.error_estimate);
  CHECK(a.epsilon_used == doctest::Approx(0.05));
}

TEST_CASE("boxed power: sign and cross-identity") {
  TripleKernel k(kHalfStable);
  QuadratureSpec spec;
  const double c_p = 1.0;  // closed form for this configuration

  // L^B h_p <= 0 on U, and equals the negative exterior mass of g_p:
  // L^B h_p(z) = -int_{outside box} y^p J(z,y) dy.
  for (double zd : {0.1, 0.3}) {
    const PVResult r =
        lb(k, c_p, TestFunction::boxed_power(0.5), HalfSpacePoint{zd}, spec);
    CHECK(r.value < 0.0);

    // independent route: quadrature of the exterior integral (d=1)
    const Integrator integ(spec);
    auto tail = [&](double y) {
      return std::pow(y, 0.5) * k.eval(zd, y, y - zd) *
             std::pow(y - zd, -2.0);
    };
    QuadResult t = integ.integrate(tail, 1.0, 50.0, 1e-10);
    t += integ.integrate_algebraic_tail(tail, 50.0, 1e-10);
    CHECK(r.value == doctest::Approx(-t.value).epsilon(1e-4));
  }

  // too close to the box top
  CHECK_THROWS_AS(
      lb(k, c_p, TestFunction::boxed_power(0.5), HalfSpacePoint{0.97}, spec),
      SingularityError);
}

TEST_CASE("sign survey of lb(h_q)") {
  TripleKernel k(kHalfStable);
  QuadratureSpec spec;
  const double c_p = 1.0;

  // q < p: strictly negative on U
  SignReport neg = sign_check_hq(k, c_p, 0.25, {0.01, 0.05, 0.1, 0.2}, spec);
  CHECK(neg.n_violations == 0);
  CHECK(!neg.expect_positive);

  // q > p: strictly positive below the located threshold
  SignReport pos = sign_check_hq(k, c_p, 0.75, {0.01, 0.02, 0.05, 0.1}, spec);
  CHECK(pos.expect_positive);
  CHECK(pos.r0 > 0.0);
  CHECK(pos.n_violations == 0);

  CHECK_THROWS_AS(sign_check_hq(k, c_p, 0.5, {0.1}, spec), DomainError);
  CHECK_THROWS_AS(sign_check_hq(k, c_p, 1.5, {0.1}, spec), DomainError);
}

TEST_CASE("exponent window guards") {
  TripleKernel k(kHalfStable);
  QuadratureSpec spec;
  CHECK_THROWS_AS(
      lb_alpha(k, TestFunction::power(1.0), HalfSpacePoint{1.0}, spec),
      DomainError);
  KernelParams prm = make_params(1, 1.5, Variant::Constant, 0, 0, 0, 0, 0.9);
  TripleKernel k2(prm);
  CHECK_THROWS_AS(
      lb_alpha(k2, TestFunction::power(0.5), HalfSpacePoint{1.0}, spec),
      DomainError);
}

TEST_CASE("user cubature agrees with the reduced path (d=1)") {
  TripleKernel k(kHalfStable);
  QuadratureSpec spec;
  spec.abs_tol = 1e-6;
  const TestFunction boxed = TestFunction::boxed_power(0.5);
  const TestFunction user = TestFunction::user(
      [](const HalfSpacePoint& y) {
        return (y.horizontal_norm() < 1.0 && y.xd() < 1.0)
                   ? std::sqrt(y.xd())
                   : 0.0;
      },
      1.5);
  const HalfSpacePoint x{0.4};
  const double a = lb_alpha(k, boxed, x, spec).value;
  const double b = lb_alpha(k, user, x, spec).value;
  CHECK(b == doctest::Approx(a).epsilon(2e-3));
}

TEST_CASE("user cubature agrees with the reduced path (d=2)") {
  KernelParams prm = make_params(2, 1.0, Variant::Tilde, 1, 1, 0, 0, 1.0);
  TripleKernel k(prm);
  QuadratureSpec spec;
  spec.abs_tol = 1e-5;
  const TestFunction boxed = TestFunction::boxed_power(1.2);
  const TestFunction user = TestFunction::user(
      [](const HalfSpacePoint& y) {
        return (y.horizontal_norm() < 1.0 && y.xd() < 1.0)
                   ? std::pow(y.xd(), 1.2)
                   : 0.0;
      },
      1.5);
  const HalfSpacePoint x = HalfSpacePoint::axis(2, 0.4);
  const double a = lb_alpha(k, boxed, x, spec).value;
  const double b = lb_alpha(k, user, x, spec).value;
  CHECK(b == doctest::Approx(a).epsilon(5e-3));
}

TEST_CASE("user cubature: d=3 smoke test and d>3 rejection") {
  KernelParams prm = make_params(3, 1.0, Variant::Tilde, 1, 1, 0, 0, 1.0);
  TripleKernel k(prm);
  QuadratureSpec spec;
  spec.abs_tol = 1e-3;
  spec.rel_tol = 1e-2;
  spec.max_subdivisions = 8;
  const TestFunction boxed = TestFunction::boxed_power(1.2);
  const TestFunction user = TestFunction::user(
      [](const HalfSpacePoint& y) {
        return (y.horizontal_norm() < 1.0 && y.xd() < 1.0)
                   ? std::pow(y.xd(), 1.2)
                   : 0.0;
      },
      1.8);
  const HalfSpacePoint x = HalfSpacePoint::axis(3, 0.4);
  const double a = lb_alpha(k, boxed, x, spec).value;
  const double b = lb_alpha(k, user, x, spec).value;
  CHECK(b == doctest::Approx(a).epsilon(5e-2));

  KernelParams p4 = make_params(4, 1.0, Variant::Tilde, 1, 1, 0, 0, 1.0);
  TripleKernel k4(p4);
  CHECK_THROWS_AS(
      lb_alpha(k4, user, HalfSpacePoint::axis(4, 0.4), spec),
      DomainError);
}
