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

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <sstream>

#include "halfstable/util.hpp"

namespace halfstable {

bool inside_box(const HalfSpacePoint& x, const Box& box) {
  if (!(x.xd() > 0.0 && x.xd() < box.b)) return false;
  return x.dim() == 1 || x.horizontal_norm() < box.a;
}

void SimConfig::finalize(const TripleKernel& kernel) {
  params.validate();
  if (!(eta > 0.0 && eta <= 0.5))
    throw DomainError("truncation ratio eta must lie in (0, 1/2]");
  if (n_paths < 1) throw DomainError("need at least one path");
  if (max_events < 0) throw DomainError("max_events must be non-negative");
  if (!(box.a > 0.0 && box.b > 0.0)) throw DomainError("box half-widths must be positive");
  if (c_killing < 0.0) throw DomainError("killing constant must be non-negative");
  if (majorant <= 0.0) majorant = 1.05 * kernel.sup_bound();
}

double majorant_rate(double majorant, double eps, double alpha, int d) {
  return majorant * sphere_area(d) * std::pow(eps, -alpha) / alpha;
}

std::array<double, kMaxDim> sample_displacement(Rng& rng, double eps,
                                                double alpha, int d) {
  if (!(eps > 0.0)) throw DomainError("truncation radius must be positive");
  const double r = eps * std::pow(rng.uniform(), -1.0 / alpha);
  std::array<double, kMaxDim> z{};
  if (d == 1) {
    z[0] = rng.next_u64() & 1u ? r : -r;
  } else if (d == 2) {
    const double a = 6.283185307179586476925286766559 * rng.uniform_co();
    z[0] = r * std::sin(a);
    z[1] = r * std::cos(a);
  } else {
    double norm2 = 0.0;
    for (int i = 0; i < d; ++i) {
      z[i] = rng.normal();
      norm2 += z[i] * z[i];
    }
    const double scale = r / std::sqrt(norm2);
    for (int i = 0; i < d; ++i) z[i] *= scale;
  }
  return z;
}

namespace {

// Substep increments of the compensating diffusion are capped at this
// fraction of the height, which also caps the drift of the frozen rates
// between clock refreshes.
constexpr double kKickFraction = 0.025;

}  // namespace

StepEvent step(HalfSpacePoint& state, const TripleKernel& kernel,
               const SimConfig& config, Rng& rng, const StepAccumulator& acc) {
  const KernelParams& prm = config.params;

  StepEvent ev;

  if (config.compensate_small_jumps) {
    // Dropped sub-eps jump activity is replaced by an Euler diffusion
    // with the matching per-coordinate variance rate
    //   v(x) = B(x,x) * sigma_d/d * eps(x)^{2-alpha} / (2-alpha).
    // The event clock is redrawn after every capped substep (memoryless),
    // so the jump and killing rates follow the diffusing state.
    const double vcoef = kernel.diagonal() * sphere_area(prm.d) / prm.d /
                         (2.0 - prm.alpha) *
                         std::pow(config.eta, 2.0 - prm.alpha);
    for (;;) {
      const double xd = state.xd();
      const double eps = config.eta * xd;
      const double lam = majorant_rate(config.majorant, eps, prm.alpha, prm.d);
      const double kap = config.c_killing * std::pow(xd, -prm.alpha);
      const double vrate = vcoef * std::pow(xd, 2.0 - prm.alpha);
      const double dt_cap = kKickFraction * kKickFraction * xd * xd / vrate;
      const double clock = rng.exponential(lam + kap);
      const double dt = std::min(clock, dt_cap);
      ev.waiting_time += dt;
      if (acc) acc(state, dt);
      const double sd = std::sqrt(vrate * dt);
      HalfSpacePoint kicked = state;
      for (int i = 0; i < prm.d; ++i) kicked[i] += sd * rng.normal();
      if (kicked.xd() > 0.0) {
        if (!inside_box(kicked, config.box)) {
          ev.type = EventType::Exited;
          ev.proposal = kicked;
          return ev;
        }
        state = kicked;
      }
      if (clock <= dt_cap) break;  // the event fires now
    }
  } else {
    const double xd = state.xd();
    const double eps = config.eta * xd;
    const double lam = majorant_rate(config.majorant, eps, prm.alpha, prm.d);
    const double kap = config.c_killing * std::pow(xd, -prm.alpha);
    ev.waiting_time = rng.exponential(lam + kap);
    if (acc) acc(state, ev.waiting_time);
  }

  // rates at the last refresh point decide the event type
  const double xd = state.xd();
  const double eps = config.eta * xd;
  const double lam = majorant_rate(config.majorant, eps, prm.alpha, prm.d);
  const double kap = config.c_killing * std::pow(xd, -prm.alpha);

  if (rng.uniform_co() * (lam + kap) < kap) {
    ev.type = EventType::Killed;
    return ev;
  }

  const std::array<double, kMaxDim> z =
      sample_displacement(rng, eps, prm.alpha, prm.d);
  HalfSpacePoint y = state;
  double r2 = 0.0;
  for (int i = 0; i < prm.d; ++i) {
    y[i] += z[i];
    r2 += z[i] * z[i];
  }
  if (!(y.xd() > 0.0)) {
    ev.type = EventType::FictitiousOutside;
    return ev;
  }

  const double accept =
      kernel.eval(state.xd(), y.xd(), std::sqrt(r2)) / config.majorant;
  if (accept > 1.0 + 1e-9) {
    std::ostringstream os;
    os << "stale majorant: acceptance probability " << accept
       << " at x_d=" << state.xd() << ", y_d=" << y.xd()
       << ", |z|=" << std::sqrt(r2) << " (majorant " << config.majorant << ")";
    throw MajorantError(os.str());
  }
  if (rng.uniform_co() < accept) {
    ev.proposal = y;
    if (inside_box(y, config.box)) {
      ev.type = EventType::Moved;
      state = y;
    } else {
      ev.type = EventType::Exited;
    }
  } else {
    ev.type = EventType::FictitiousReject;
  }
  return ev;
}

PathOutcome simulate_path(const HalfSpacePoint& x0, const TripleKernel& kernel,
                          const SimConfig& config, Rng& rng,
                          const Payoff* payoff, const StateWeight* custom) {
  x0.validate();
  if (!inside_box(x0, config.box))
    throw DomainError("start point must lie strictly inside the box");

  const KernelParams& prm = config.params;
  HalfSpacePoint state = x0;
  PathOutcome out;
  out.status = PathStatus::BudgetExhausted;

  const StepAccumulator score = [&](const HalfSpacePoint& at, double dt) {
    const double t = at.xd();
    double w1 = std::pow(t, prm.beta1);
    if (prm.beta3 != 0.0) w1 *= std::pow(std::abs(std::log(t)), prm.beta3);
    out.occ_w1 += w1 * dt;
    out.occ_w2 += std::pow(t, prm.beta2) * dt;
    if (custom) out.occ_custom += (*custom)(at)*dt;
  };

  while (out.n_events < config.max_events) {
    const StepEvent ev = step(state, kernel, config, rng, score);
    ++out.n_events;
    out.exit_time += ev.waiting_time;
    if (ev.type == EventType::Killed) {
      out.status = PathStatus::Killed;
      return out;
    }
    if (ev.type == EventType::Exited) {
      out.status = PathStatus::Exited;
      out.exit_point = ev.proposal;
      if (payoff) out.boundary_payoff = (*payoff)(ev.proposal);
      return out;
    }
  }
  return out;  // budget exhausted
}

std::vector<PathOutcome> simulate_paths(const HalfSpacePoint& x0,
                                        const TripleKernel& kernel,
                                        const SimConfig& config,
                                        const Payoff* payoff,
                                        const StateWeight* custom) {
  SimConfig cfg = config;
  cfg.finalize(kernel);
  std::vector<PathOutcome> outcomes(static_cast<std::size_t>(cfg.n_paths));
  parallel_for(cfg.n_paths, cfg.n_threads, [&](long lo, long hi) {
    for (long i = lo; i < hi; ++i) {
      Rng rng(cfg.seed, static_cast<std::uint64_t>(i));
      outcomes[static_cast<std::size_t>(i)] =
          simulate_path(x0, kernel, cfg, rng, payoff, custom);
    }
  });
  return outcomes;
}

namespace {

Estimate reduce_with(const std::vector<PathOutcome>& outcomes,
                     const std::function<double(const PathOutcome&)>& value) {
  std::vector<double> vals;
  vals.reserve(outcomes.size());
  for (const PathOutcome& o : outcomes) vals.push_back(value(o));
  return estimate_from_samples(vals);
}

}  // namespace

Estimate reduce_occupation(const std::vector<PathOutcome>& outcomes,
                           OccupationWeight weight) {
  return reduce_with(outcomes, [&](const PathOutcome& o) {
    return weight == OccupationWeight::W1 ? o.occ_w1 : o.occ_w2;
  });
}

Estimate reduce_exit_probability(
    const std::vector<PathOutcome>& outcomes,
    const std::function<bool(const HalfSpacePoint&)>& region) {
  return reduce_with(outcomes, [&](const PathOutcome& o) {
    return o.status == PathStatus::Exited && region(o.exit_point) ? 1.0 : 0.0;
  });
}

Estimate reduce_boundary_payoff(const std::vector<PathOutcome>& outcomes) {
  return reduce_with(outcomes,
                     [](const PathOutcome& o) { return o.boundary_payoff; });
}

Estimate reduce_custom_occupation(const std::vector<PathOutcome>& outcomes) {
  return reduce_with(outcomes, [](const PathOutcome& o) { return o.occ_custom; });
}

Estimate reduce_exit_time(const std::vector<PathOutcome>& outcomes) {
  return reduce_with(outcomes, [](const PathOutcome& o) { return o.exit_time; });
}

void dump_paths_jsonl(std::ostream& out, const std::vector<PathOutcome>& outcomes) {
  char buf[512];
  for (const PathOutcome& o : outcomes) {
    const char* status = o.status == PathStatus::Exited   ? "exited"
                         : o.status == PathStatus::Killed ? "killed"
                                                          : "budget_exhausted";
    int n = std::snprintf(buf, sizeof(buf),
                          "{\"schema\":\"halfstable.path.v1\","
                          "\"status\":\"%s\",\"exit_time\":%.17g,"
                          "\"n_events\":%ld,\"occ_w1\":%.17g,"
                          "\"occ_w2\":%.17g,\"occ_custom\":%.17g,"
                          "\"payoff\":%.17g",
                          status, o.exit_time, o.n_events, o.occ_w1, o.occ_w2,
                          o.occ_custom, o.boundary_payoff);
    out.write(buf, n);
    if (o.status == PathStatus::Exited) {
      out << ",\"exit_point\":[";
      for (int i = 0; i < o.exit_point.dim(); ++i) {
        n = std::snprintf(buf, sizeof(buf), "%s%.17g", i ? "," : "",
                          o.exit_point[i]);
        out.write(buf, n);
      }
      out << ']';
    }
    out << "}\n";
  }
}

double budget_exhausted_fraction(const std::vector<PathOutcome>& outcomes) {
  if (outcomes.empty()) return 0.0;
  long n = 0;
  for (const PathOutcome& o : outcomes)
    if (o.status == PathStatus::BudgetExhausted) ++n;
  return static_cast<double>(n) / static_cast<double>(outcomes.size());
}

Estimate estimate_occupation(const HalfSpacePoint& x0, const TripleKernel& kernel,
                             const SimConfig& config, OccupationWeight weight) {
  return reduce_occupation(simulate_paths(x0, kernel, config), weight);
}

Estimate estimate_exit_probability(
    const HalfSpacePoint& x0, const TripleKernel& kernel, const SimConfig& config,
    const std::function<bool(const HalfSpacePoint&)>& region) {
  return reduce_exit_probability(simulate_paths(x0, kernel, config), region);
}

Estimate estimate_boundary_payoff(const HalfSpacePoint& x0,
                                  const TripleKernel& kernel,
                                  const SimConfig& config, const Payoff& payoff) {
  return reduce_boundary_payoff(simulate_paths(x0, kernel, config, &payoff));
}

Estimate estimate_custom_occupation(const HalfSpacePoint& x0,
                                    const TripleKernel& kernel,
                                    const SimConfig& config,
                                    const StateWeight& weight) {
  return reduce_custom_occupation(
      simulate_paths(x0, kernel, config, nullptr, &weight));
}

}  // namespace halfstable
