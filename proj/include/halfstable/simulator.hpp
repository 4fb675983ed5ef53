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

#ifndef HALFSTABLE_SIMULATOR_HPP
#define HALFSTABLE_SIMULATOR_HPP

#include <array>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <vector>

#include "halfstable/kernel.hpp"
#include "halfstable/rng.hpp"
#include "halfstable/stats.hpp"

namespace halfstable {

/// Boundary box D(a,b) = { |x_tilde| < a, 0 < x_d < b } centered at the
/// origin of the boundary hyperplane.
struct Box {
  double a = 0.5;
  double b = 0.5;
};

bool inside_box(const HalfSpacePoint& x, const Box& box);

/// Configuration of the killed-process sampler.
///
/// The chain is a thinned jump chain: at state x, jumps of size below
/// eps(x) = eta * x_d are dropped, proposals are drawn from the exact
/// majorant intensity majorant * |z|^{-d-alpha} and accepted with
/// probability B(x, x+z)/majorant, and an independent exponential killing
/// clock runs at rate c_killing * x_d^{-alpha}. Proposals leaving the
/// half-space are fictitious events (the half-space form has no jumps to
/// the complement).
struct SimConfig {
  KernelParams params;
  double c_killing = 0.0;
  Box box;
  double eta = 0.1;
  double majorant = 0.0;  // <= 0 selects 1.05 * sup_bound() at validation
  // Replace the dropped sub-eps jump activity by Gaussian increments of
  // matching variance, applied at event times. The dropped ball sits
  // strictly inside the half-space (eps <= x_d/2), so its measure is
  // exactly symmetric and the compensation preserves the r^alpha scaling
  // law exactly. Turning this off recovers the plain truncated chain.
  bool compensate_small_jumps = true;
  long n_paths = 10000;
  long max_events = 1000000;
  std::uint64_t seed = 1;
  int n_threads = 1;

  /// Fills the derived majorant and checks invariants.
  void finalize(const TripleKernel& kernel);
};

enum class PathStatus : std::uint8_t { Exited, Killed, BudgetExhausted };

struct PathOutcome {
  PathStatus status = PathStatus::BudgetExhausted;
  double exit_time = 0.0;
  HalfSpacePoint exit_point;  // meaningful iff status == Exited
  double occ_w1 = 0.0;  // time integral of (Y_d)^{beta1} |log Y_d|^{beta3}
  double occ_w2 = 0.0;  // time integral of (Y_d)^{beta2}
  double occ_custom = 0.0;  // time integral of a caller-supplied weight
  double boundary_payoff = 0.0;  // f(Y_exit) for exited paths, else 0
  long n_events = 0;
};

enum class EventType : std::uint8_t {
  Moved,
  FictitiousReject,
  FictitiousOutside,
  Killed,
  Exited,
};

struct StepEvent {
  EventType type = EventType::Moved;
  double waiting_time = 0.0;
  HalfSpacePoint proposal;  // landing point for Moved/Exited
};

/// Total majorant intensity of jumps of size >= eps:
/// majorant * sigma_d * eps^{-alpha} / alpha.
double majorant_rate(double majorant, double eps, double alpha, int d);

/// Displacement with |z| >= eps and density proportional to
/// |z|^{-d-alpha}: Pareto(alpha) radius, isotropic direction.
std::array<double, kMaxDim> sample_displacement(Rng& rng, double eps,
                                                double alpha, int d);

/// Time-scoring hook: called as accumulate(state, dt) for every stretch
/// of length dt the path spends at `state` (one call per event without
/// compensation, one per diffusion substep with it).
using StepAccumulator = std::function<void(const HalfSpacePoint&, double)>;

/// One event of the thinned chain from `state` (which must be inside the
/// box). Advances the state only on Moved (and along compensation
/// substeps). Throws MajorantError if an acceptance probability
/// exceeds 1.
StepEvent step(HalfSpacePoint& state, const TripleKernel& kernel,
               const SimConfig& config, Rng& rng,
               const StepAccumulator& acc = {});

using Payoff = std::function<double(const HalfSpacePoint&)>;
using StateWeight = std::function<double(const HalfSpacePoint&)>;

/// Runs one path from x0 until exit, kill, or the event budget.
/// Occupation integrals accumulate weight(state) * waiting_time exactly,
/// the state being constant between events.
PathOutcome simulate_path(const HalfSpacePoint& x0, const TripleKernel& kernel,
                          const SimConfig& config, Rng& rng,
                          const Payoff* payoff = nullptr,
                          const StateWeight* custom = nullptr);

/// All paths, parallelized over path indices; the per-path RNG stream is
/// derived from (config.seed, path index), so results do not depend on
/// the number of workers.
std::vector<PathOutcome> simulate_paths(const HalfSpacePoint& x0,
                                        const TripleKernel& kernel,
                                        const SimConfig& config,
                                        const Payoff* payoff = nullptr,
                                        const StateWeight* custom = nullptr);

enum class OccupationWeight { W1, W2 };

Estimate reduce_occupation(const std::vector<PathOutcome>& outcomes,
                           OccupationWeight weight);
Estimate reduce_exit_probability(
    const std::vector<PathOutcome>& outcomes,
    const std::function<bool(const HalfSpacePoint&)>& region);
Estimate reduce_boundary_payoff(const std::vector<PathOutcome>& outcomes);
Estimate reduce_custom_occupation(const std::vector<PathOutcome>& outcomes);
Estimate reduce_exit_time(const std::vector<PathOutcome>& outcomes);
double budget_exhausted_fraction(const std::vector<PathOutcome>& outcomes);

/// Debug dump: one JSON record per path (status, exit time, event count,
/// occupation integrals, exit point when present), each carrying the
/// schema version tag "halfstable.path.v1".
void dump_paths_jsonl(std::ostream& out, const std::vector<PathOutcome>& outcomes);

/// Mean and standard error of the chosen occupation integral over
/// config.n_paths paths started at x0.
Estimate estimate_occupation(const HalfSpacePoint& x0, const TripleKernel& kernel,
                             const SimConfig& config, OccupationWeight weight);

/// Fraction of paths exiting into `region` (binomial standard error).
Estimate estimate_exit_probability(
    const HalfSpacePoint& x0, const TripleKernel& kernel, const SimConfig& config,
    const std::function<bool(const HalfSpacePoint&)>& region);

/// Mean of f(Y_exit) over all paths; killed paths contribute zero.
Estimate estimate_boundary_payoff(const HalfSpacePoint& x0,
                                  const TripleKernel& kernel,
                                  const SimConfig& config, const Payoff& payoff);

/// Mean of the time integral of weight(Y_t) up to exit/kill. This is the
/// estimator behind every jump-rate (Levy system) functional.
Estimate estimate_custom_occupation(const HalfSpacePoint& x0,
                                    const TripleKernel& kernel,
                                    const SimConfig& config,
                                    const StateWeight& weight);

}  // namespace halfstable

#endif
