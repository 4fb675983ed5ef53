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

#include <cmath>

#include "doctest.h"
#include "halfstable/errors.hpp"
#include "halfstable/rng.hpp"

using namespace halfstable;

TEST_CASE("exact power law fits exactly") {
  std::vector<std::pair<double, Estimate>> pts;
  for (double x : {0.5, 1.0, 2.0, 4.0})
    pts.emplace_back(x, Estimate{3.0 * x * x, 0.0, 100});
  const ExponentFit fit = fit_exponent(pts);
  CHECK(fit.slope == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(fit.intercept == doctest::Approx(std::log(3.0)).epsilon(1e-12));
  CHECK(fit.r_squared == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(fit.slope_std_error == 0.0);
}

TEST_CASE("degenerate fits are rejected") {
  std::vector<std::pair<double, Estimate>> two = {
      {1.0, Estimate{1.0, 0.0, 1}}, {2.0, Estimate{2.0, 0.0, 1}}};
  CHECK_THROWS_AS(fit_exponent(two), DegenerateFit);

  std::vector<std::pair<double, Estimate>> neg = {
      {1.0, Estimate{1.0, 0.0, 1}},
      {2.0, Estimate{-0.5, 0.0, 1}},
      {3.0, Estimate{2.0, 0.0, 1}}};
  CHECK_THROWS_AS(fit_exponent(neg), DegenerateFit);
}

TEST_CASE("noisy synthetic slope lands within 0.05") {
  Rng rng(404);
  const double p = 1.37;
  std::vector<std::pair<double, Estimate>> pts;
  for (int i = 0; i < 9; ++i) {
    const double x = std::pow(2.0, -6.0 + 0.5 * i);
    const double noise = 1.0 + 0.01 * (2.0 * rng.uniform_co() - 1.0);
    pts.emplace_back(x, Estimate{std::pow(x, p) * noise,
                                 0.01 * std::pow(x, p), 10000});
  }
  const ExponentFit fit = fit_exponent(pts);
  CHECK(std::abs(fit.slope - p) < 0.05);
  CHECK(fit.slope_std_error > 0.0);
}

TEST_CASE("estimate from samples") {
  const Estimate e = estimate_from_samples({1.0, 2.0, 3.0, 4.0});
  CHECK(e.mean == doctest::Approx(2.5));
  CHECK(e.n == 4);
  CHECK(e.std_error ==
        doctest::Approx(std::sqrt(5.0 / 3.0 / 4.0)).epsilon(1e-12));
  CHECK_THROWS_AS(estimate_from_samples({}), DomainError);
}
