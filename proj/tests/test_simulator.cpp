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

#include "halfstable/simulator.hpp"

#include <cmath>

#include "doctest.h"
#include "halfstable/constant.hpp"
#include "oracles.hpp"

using namespace halfstable;

namespace {

KernelParams tilde_config() {
  KernelParams prm;
  prm.d = 2;
  prm.alpha = 1.0;
  prm.variant = Variant::Tilde;
  prm.beta1 = 1.0;
  prm.beta2 = 1.0;
  prm.p = 1.0;
  return prm;
}

KernelParams const_config(int d, double alpha, double p) {
  KernelParams prm;
  prm.d = d;
  prm.alpha = alpha;
  prm.variant = Variant::Constant;
  prm.p = p;
  return prm;
}

}  // namespace

TEST_CASE("displacement radius has the Pareto tail") {
  Rng rng(5);
  const double alpha = 1.3, eps = 0.2;
  const long n = 1000000;
  long over = 0;
  for (long i = 0; i < n; ++i) {
    const auto z = sample_displacement(rng, eps, alpha, 2);
    const double r = std::hypot(z[0], z[1]);
    CHECK(r >= eps * (1.0 - 1e-12));
    if (r > 2.0 * eps) ++over;
  }
  const double expected = std::pow(2.0, -alpha);
  const double se = std::sqrt(expected * (1.0 - expected) / n);
  CHECK(std::abs(static_cast<double>(over) / n - expected) <= 3.0 * se);
}

TEST_CASE("displacement directions are isotropic") {
  for (int d : {1, 2, 3}) {
    Rng rng(6 + d);
    const long n = 1000000;
    double mean[3] = {0, 0, 0};
    for (long i = 0; i < n; ++i) {
      const auto z = sample_displacement(rng, 0.5, 1.0, d);
      double r = 0.0;
      for (int k = 0; k < d; ++k) r += z[k] * z[k];
      r = std::sqrt(r);
      for (int k = 0; k < d; ++k) mean[k] += z[k] / r;
    }
    // each unit-direction coordinate has variance 1/d
    const double se = std::sqrt(1.0 / d / n);
    for (int k = 0; k < d; ++k) CHECK(std::abs(mean[k] / n) <= 4.0 * se);
  }
}

TEST_CASE("majorant rate closed form and scaling") {
  const double m2 = 1.4, alpha = 0.9;
  const double r1 = majorant_rate(m2, 0.1, alpha, 2);
  CHECK(r1 == doctest::Approx(m2 * 2.0 * 3.14159265358979 *
                              std::pow(0.1, -alpha) / alpha));
  CHECK(majorant_rate(m2, 0.2, alpha, 2) / r1 ==
        doctest::Approx(std::pow(2.0, -alpha)).epsilon(1e-12));
}

TEST_CASE("overwhelming killing dominates every path") {
  TripleKernel k(const_config(2, 1.0, 0.5));
  SimConfig cfg;
  cfg.params = k.params();
  cfg.c_killing = 1e7;
  cfg.box = {100.0, 100.0};
  cfg.n_paths = 2000;
  cfg.seed = 11;
  const auto outcomes = simulate_paths(HalfSpacePoint::axis(2, 50.0), k, cfg);
  long killed = 0;
  for (const auto& o : outcomes) killed += o.status == PathStatus::Killed;
  CHECK(static_cast<double>(killed) / cfg.n_paths > 0.999);
}

TEST_CASE("kill time is exponential at dominating rate") {
  TripleKernel k(const_config(1, 1.2, 0.5));
  SimConfig cfg;
  cfg.params = k.params();
  cfg.c_killing = 1e6;
  cfg.box = {1e6, 1e6};
  cfg.n_paths = 10000;
  cfg.seed = 12;
  const double x0 = 3.0;
  const auto outcomes = simulate_paths(HalfSpacePoint{x0}, k, cfg);
  std::vector<double> times;
  for (const auto& o : outcomes)
    if (o.status == PathStatus::Killed && o.n_events == 1)
      times.push_back(o.exit_time);
  CHECK(times.size() > 9900);
  // at these parameters the jump clock is negligible next to kappa
  const double rate = cfg.c_killing * std::pow(x0, -cfg.params.alpha);
  const auto ks = ks_test(times, testoracle::exponential_cdf, rate);
  CHECK(ks.p_value > 1e-3);
}

TEST_CASE("degenerate thinning accepts every in-half-space proposal") {
  TripleKernel k(const_config(2, 1.0, 0.5));
  SimConfig cfg;
  cfg.params = k.params();
  cfg.majorant = 1.0;  // B == majorant
  cfg.box = {2.0, 2.0};
  cfg.finalize(k);
  Rng rng(31);
  HalfSpacePoint x = HalfSpacePoint::axis(2, 1.0);
  long rejects = 0;
  for (int i = 0; i < 20000; ++i) {
    HalfSpacePoint state = x;
    const StepEvent ev = step(state, k, cfg, rng);
    if (ev.type == EventType::FictitiousReject) ++rejects;
  }
  CHECK(rejects == 0);
}

TEST_CASE("a stale majorant is a hard failure") {
  TripleKernel k(const_config(2, 1.0, 0.5));
  SimConfig cfg;
  cfg.params = k.params();
  cfg.majorant = 0.5;  // below sup B = 1
  cfg.box = {2.0, 2.0};
  Rng rng(32);
  HalfSpacePoint state = HalfSpacePoint::axis(2, 1.0);
  CHECK_THROWS_AS(
      [&] {
        for (int i = 0; i < 1000; ++i) {
          HalfSpacePoint s = state;
          step(s, k, cfg, rng);
        }
      }(),
      MajorantError);
}

TEST_CASE("one-step exits carry the exact occupation identity") {
  // the piecewise-constant design: no diffusion compensation
  TripleKernel k(tilde_config());
  SimConfig cfg;
  cfg.params = k.params();
  cfg.c_killing = 0.3;
  cfg.compensate_small_jumps = false;
  cfg.n_paths = 4000;
  cfg.seed = 13;
  const HalfSpacePoint x0 = HalfSpacePoint::axis(2, 0.25);
  const auto outcomes = simulate_paths(x0, k, cfg);
  long seen = 0;
  for (const auto& o : outcomes) {
    if (o.n_events == 1 && o.status == PathStatus::Exited) {
      ++seen;
      CHECK(o.occ_w1 == doctest::Approx(0.25 * o.exit_time).epsilon(1e-12));
      CHECK(o.occ_w2 == doctest::Approx(0.25 * o.exit_time).epsilon(1e-12));
    }
  }
  CHECK(seen > 0);
}

TEST_CASE("zero event budget exhausts immediately") {
  TripleKernel k(tilde_config());
  SimConfig cfg;
  cfg.params = k.params();
  cfg.max_events = 0;
  cfg.n_paths = 3;
  const auto outcomes = simulate_paths(HalfSpacePoint::axis(2, 0.2), k, cfg);
  for (const auto& o : outcomes) {
    CHECK(o.status == PathStatus::BudgetExhausted);
    CHECK(o.exit_time == 0.0);
  }
}

TEST_CASE("identical seeds reproduce bit-identical outcomes across threads") {
  TripleKernel k(tilde_config());
  SimConfig cfg;
  cfg.params = k.params();
  cfg.c_killing = 0.5;
  cfg.n_paths = 500;
  cfg.seed = 77;
  cfg.n_threads = 1;
  const auto a = simulate_paths(HalfSpacePoint::axis(2, 0.1), k, cfg);
  cfg.n_threads = 4;
  const auto b = simulate_paths(HalfSpacePoint::axis(2, 0.1), k, cfg);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].exit_time == b[i].exit_time);
    CHECK(a[i].occ_w1 == b[i].occ_w1);
    CHECK(a[i].status == b[i].status);
    CHECK(a[i].n_events == b[i].n_events);
  }
}

TEST_CASE("path bookkeeping matches a manual replay of the chain") {
  TripleKernel k(tilde_config());
  SimConfig cfg;
  cfg.params = k.params();
  cfg.c_killing = 0.4;
  cfg.seed = 99;
  cfg.finalize(k);
  const HalfSpacePoint x0 = HalfSpacePoint::axis(2, 0.2);

  Rng rng_a(cfg.seed, 0);
  const PathOutcome out = simulate_path(x0, k, cfg, rng_a);

  Rng rng_b(cfg.seed, 0);
  HalfSpacePoint state = x0;
  double total_time = 0.0, occ1 = 0.0;
  long events = 0;
  const StepAccumulator acc = [&](const HalfSpacePoint& at, double dt) {
    occ1 += at.xd() * dt;  // beta1=1, beta3=0
  };
  while (true) {
    const StepEvent ev = step(state, k, cfg, rng_b, acc);
    ++events;
    total_time += ev.waiting_time;
    if (ev.type == EventType::Killed || ev.type == EventType::Exited) break;
  }
  CHECK(out.exit_time == total_time);
  CHECK(out.occ_w1 == occ1);
  CHECK(out.n_events == events);
}

TEST_CASE("exit-time scaling law under box and start rescaling") {
  KernelParams prm = tilde_config();
  TripleKernel k(prm);
  const double c = c_constant(k, QuadratureSpec{}).value;

  auto mean_exit = [&](double scale, std::uint64_t seed) {
    SimConfig cfg;
    cfg.params = prm;
    cfg.c_killing = c;
    cfg.box = {0.5 * scale, 0.5 * scale};
    cfg.n_paths = 4000;
    cfg.seed = seed;
    cfg.n_threads = 2;
    const auto outcomes =
        simulate_paths(HalfSpacePoint::axis(2, 0.2 * scale), k, cfg);
    CHECK(budget_exhausted_fraction(outcomes) < 0.01);
    return reduce_exit_time(outcomes);
  };

  const Estimate base = mean_exit(1.0, 1001);
  for (double r : {0.5, 2.0}) {
    const Estimate scaled = mean_exit(r, 2002 + static_cast<int>(r));
    const double expected = std::pow(r, prm.alpha);
    const double ratio = scaled.mean / base.mean;
    const double se = ratio * (scaled.std_error / scaled.mean +
                               base.std_error / base.mean);
    INFO("r=", r, " ratio=", ratio, " expected=", expected, " se=", se);
    CHECK(std::abs(ratio - expected) <= 3.0 * se);
  }
}

TEST_CASE("whole-exterior region reduces to exit probability") {
  TripleKernel k(tilde_config());
  SimConfig cfg;
  cfg.params = k.params();
  cfg.c_killing = 0.3;
  cfg.n_paths = 2000;
  cfg.seed = 8;
  const HalfSpacePoint x0 = HalfSpacePoint::axis(2, 0.2);
  const auto outcomes = simulate_paths(x0, k, cfg);
  const Estimate all = reduce_exit_probability(
      outcomes, [](const HalfSpacePoint&) { return true; });
  long exited = 0;
  for (const auto& o : outcomes) exited += o.status == PathStatus::Exited;
  CHECK(all.mean == doctest::Approx(static_cast<double>(exited) / cfg.n_paths));
  CHECK(all.mean <= 1.0);

  // indicator payoff reproduces the exit probability estimator
  const Payoff indicator = [](const HalfSpacePoint&) { return 1.0; };
  const auto with_payoff = simulate_paths(x0, k, cfg, &indicator);
  const Estimate pay = reduce_boundary_payoff(with_payoff);
  CHECK(pay.mean == doctest::Approx(all.mean));
}
