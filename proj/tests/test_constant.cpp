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

#include "halfstable/constant.hpp"

#include <cmath>

#include "doctest.h"
#include "halfstable/rng.hpp"
#include "oracles.hpp"

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

}  // namespace

TEST_CASE("inner integrand hand-computed value") {
  // B=1, alpha=1, p=1/2, s=1/4: ((1/2)-1)(1-2)/(3/4)^2 = 8/9
  TripleKernel k(make_params(1, 1.0, Variant::Constant, 0, 0, 0, 0, 0.5));
  CHECK(inner_integrand(k, 0.25, 0.0) == doctest::Approx(8.0 / 9.0).epsilon(1e-14));
}

TEST_CASE("inner integrand vanishes identically at p = alpha-1") {
  TripleKernel k(make_params(1, 1.5, Variant::Constant, 0, 0, 0, 0, 0.5));
  for (double s : {0.01, 0.2, 0.5, 0.9, 0.99})
    CHECK(inner_integrand(k, s, 0.0) == doctest::Approx(0.0).epsilon(1e-14));
  CHECK_THROWS_AS(inner_integrand(k, 1.5, 0.0), DomainError);
}

TEST_CASE("inner integrand s->1 limit for alpha=1") {
  // limit p(p+1-alpha) * A(diagonal): Taylor of both numerator factors.
  TripleKernel k(make_params(1, 1.0, Variant::Constant, 0, 0, 0, 0, 0.5));
  const double limit = 0.5 * (0.5 + 1.0 - 1.0) * 1.0;
  CHECK(inner_integrand(k, 1.0 - 1e-7, 0.0) == doctest::Approx(limit).epsilon(1e-5));
}

TEST_CASE("closed form: C(1, 1/2, B=1, d=1) = 1") {
  TripleKernel k(make_params(1, 1.0, Variant::Constant, 0, 0, 0, 0, 0.5));
  QuadratureSpec spec;
  spec.abs_tol = 1e-10;
  const ConstantResult r = c_constant(k, spec);
  CHECK(std::abs(r.value - 1.0) < 1e-6);
  CHECK(r.error_estimate < 1e-6);
}

TEST_CASE("degenerate constant at p = alpha-1 is exactly zero") {
  for (Variant v : {Variant::Constant, Variant::Tilde, Variant::Bar}) {
    KernelParams prm = make_params(1, 1.5, v, 0, 0, 0, 0, 0.5);
    if (v != Variant::Constant) { prm.beta1 = 1.0; prm.beta2 = 0.5; }
    TripleKernel k(prm);
    const ConstantResult r = c_constant(k, QuadratureSpec{});
    CHECK(r.value == 0.0);
    CHECK(r.n_evals == 0);
  }
}

TEST_CASE("domain errors outside the p window") {
  KernelParams prm = make_params(1, 1.0, Variant::Constant, 0, 0, 0, 0, 0.5);
  prm.p = 1.0;  // == alpha + beta1
  CHECK_THROWS_AS(TripleKernel{prm}, DomainError);
  prm.p = -0.1;
  CHECK_THROWS_AS(TripleKernel{prm}, DomainError);
}

TEST_CASE("profile is strictly increasing and explodes at the upper edge") {
  KernelParams prm = make_params(1, 1.0, Variant::Constant, 0, 0, 0, 0, 0.5);
  QuadratureSpec spec;
  auto prof = c_profile(prm, {0.2, 0.5, 0.8}, spec);
  REQUIRE(prof.size() == 3);
  CHECK(prof[0].second.value < prof[1].second.value);
  CHECK(prof[1].second.value < prof[2].second.value);
  CHECK(std::abs(prof[1].second.value - 1.0) < 1e-6);

  // approaching the left endpoint the values tend to zero
  auto low = c_profile(prm, {1e-4, 1e-3, 1e-2}, spec);
  CHECK(low[0].second.value < low[1].second.value);
  CHECK(low[0].second.value < 1e-3);

  // singleton grid
  auto single = c_profile(prm, {0.5}, spec);
  CHECK(single.size() == 1);

  CHECK_THROWS_AS(c_profile(prm, {}, spec), DomainError);
  CHECK_THROWS_AS(c_profile(prm, {0.5, 0.4}, spec), DomainError);
}

TEST_CASE("convergence close to the blow-up edge") {
  // spec requires usability for p up to alpha+beta1-0.05
  KernelParams prm = make_params(1, 1.0, Variant::Tilde, 2.0, 0.5, 1.0, 0, 0.5);
  prm.p = prm.p_upper() - 0.05;
  TripleKernel k(prm);
  const ConstantResult r = c_constant(k, QuadratureSpec{});
  CHECK(std::isfinite(r.value));
  CHECK(r.value > 0.0);
}

TEST_CASE("d=1 adaptive result matches the Riemann-sum oracle") {
  // 10 random parameter draws, 1e-4 relative agreement, 1e7-node oracle.
  Rng rng(2026);
  QuadratureSpec spec;
  for (int draw = 0; draw < 10; ++draw) {
    const double alpha = 0.3 + 1.5 * rng.uniform_co();
    const double b1 = 2.0 * rng.uniform_co();
    const double b2 = rng.uniform_co();
    const double b3 = (b1 > 0.05) ? rng.uniform_co() : 0.0;
    const double b4 = (b2 > 0.05) ? 0.5 * rng.uniform_co() : 0.0;
    const Variant v = draw % 3 == 0   ? Variant::Tilde
                      : draw % 3 == 1 ? Variant::Hat
                                      : Variant::Bar;
    KernelParams prm = make_params(1, alpha, v, b1, b2, b3, b4, 0.5);
    const double lo = prm.p_lower(), hi = prm.p_upper();
    prm.p = lo + (0.15 + 0.7 * rng.uniform_co()) * (hi - lo);
    TripleKernel k(prm);
    const ConstantResult adaptive = c_constant(k, spec);
    const double oracle = testoracle::riemann_c_constant_d1(k, 10000000);
    INFO("draw ", draw, " alpha=", alpha, " p=", prm.p, " variant=",
         to_string(v));
    CHECK(std::abs(adaptive.value - oracle) <= 1e-4 * std::abs(oracle));
  }
}

TEST_CASE("d=2 adaptive result matches plain Monte Carlo oracle") {
  KernelParams prm = make_params(2, 1.0, Variant::Tilde, 1, 1, 0, 0, 1.0);
  TripleKernel k(prm);
  const ConstantResult adaptive = c_constant(k, QuadratureSpec{});
  const auto mc = testoracle::mc_c_constant_d2(k, 10000000, 99);
  INFO("adaptive=", adaptive.value, " mc=", mc.mean, " +- ", mc.std_error);
  CHECK(std::abs(adaptive.value - mc.mean) <=
        3.0 * mc.std_error + adaptive.error_estimate);
}
