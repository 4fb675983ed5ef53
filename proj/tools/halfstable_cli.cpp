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

#include <cstdio>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "halfstable/experiments.hpp"

namespace {

struct CliState {
  halfstable::ExperimentSpec spec;
  std::string variant = "const";
  std::string weight = "w1";
  std::string out_path;
  bool deterministic = false;
  bool no_n_stability = false;
};

void add_common_options(CLI::App* sub, CliState& st) {
  auto& prm = st.spec.params;
  sub->add_option("--d", prm.d, "spatial dimension");
  sub->add_option("--alpha", prm.alpha, "stability index in (0,2)");
  sub->add_option("--p", prm.p, "decay-rate parameter");
  sub->add_option("--beta1", prm.beta1, "boundary decay exponent (min side)");
  sub->add_option("--beta2", prm.beta2, "boundary decay exponent (max side)");
  sub->add_option("--beta3", prm.beta3, "log exponent (min side)");
  sub->add_option("--beta4", prm.beta4, "log exponent (far side)");
  sub->add_option("--variant", st.variant, "kernel shape: tilde|hat|bar|const");
  sub->add_option("--seed", st.spec.seed, "base RNG seed");
  sub->add_option("--threads", st.spec.n_threads, "worker count")
      ->envname("HALFSTABLE_THREADS");
  sub->add_option("--out", st.out_path, "CSV output path (default: stdout)");
  sub->add_flag("--deterministic", st.deterministic,
                "suppress the timestamped CSV header line");
  sub->add_option("--abs-tol", st.spec.quad.abs_tol, "quadrature absolute tol");
  sub->add_option("--rel-tol", st.spec.quad.rel_tol, "quadrature relative tol");
  sub->add_option("--max-subdivisions", st.spec.quad.max_subdivisions,
                  "adaptive subdivision depth");
  sub->add_option("--grid", st.spec.grid, "grid values (x_d, or p for constant)")
      ->delimiter(',');
}

void add_sim_options(CLI::App* sub, CliState& st) {
  sub->add_option("--n-paths", st.spec.n_paths, "paths per grid point");
  sub->add_option("--max-events", st.spec.max_events, "event budget per path");
  sub->add_option("--eta", st.spec.eta, "small-jump truncation ratio");
  sub->add_option("--box-a", st.spec.box.a, "box horizontal half-width");
  sub->add_option("--box-b", st.spec.box.b, "box height");
  sub->add_option("--slope-tol", st.spec.slope_tol, "exponent fit tolerance");
  sub->add_option("--dump-paths", st.spec.dump_paths,
                  "write per-path JSONL records to this file (debug)");
}

int execute(CliState& st) {
  st.spec.params.variant = halfstable::variant_from_string(st.variant);
  st.spec.weight = st.weight == "w2" ? halfstable::OccupationWeight::W2
                                     : halfstable::OccupationWeight::W1;
  st.spec.check_n_stability = !st.no_n_stability;

  const halfstable::RunResult res = halfstable::run(st.spec);
  if (st.out_path.empty()) {
    halfstable::write_csv(std::cout, res.rows, st.deterministic);
  } else {
    halfstable::write_csv(st.out_path, res.rows, st.deterministic);
  }
  std::cout << "VERDICT " << (res.pass ? "PASS" : "FAIL") << " — "
            << res.verdict << "\n";
  return res.pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "halfstable — numerical experiments on stable-like jump processes\n"
      "with boundary-decaying kernels and critical killing in the half-space"};
  app.require_subcommand(1);
  app.set_config("--config", "", "read options from an INI/TOML file");

  CliState st;
  using EK = halfstable::ExperimentKind;

  struct SubDef {
    const char* name;
    const char* help;
    EK kind;
    bool sim;
  };
  const SubDef defs[] = {
      {"constant", "table of the killing constant over a p grid",
       EK::ConstantTable, false},
      {"operator-check", "generator identity residual on power functions",
       EK::OperatorResidual, false},
      {"kernel-audit", "randomized check of a kernel assumption",
       EK::KernelAudit, false},
      {"occupation", "occupation-integral scaling exponent",
       EK::OccupationScaling, true},
      {"exit-prob", "exit-probability scaling exponent", EK::ExitProbScaling,
       true},
      {"scaling-check", "exit-time scaling law under box rescaling",
       EK::ExitTimeScaling, true},
      {"bhp-ratio", "boundary-Harnack ratio boundedness", EK::BhpRatio, true},
      {"bhp-failure", "boundary-Harnack failure exponent separation",
       EK::BhpFailure, true},
  };

  for (const SubDef& def : defs) {
    CLI::App* sub = app.add_subcommand(def.name, def.help);
    add_common_options(sub, st);
    if (def.sim) add_sim_options(sub, st);
    if (def.kind == EK::KernelAudit) {
      sub->add_option("--assumption", st.spec.audit_id,
                      "assumption id (B1..B8, sandwich-*, almost-decreasing, "
                      "boundary-decay)");
      sub->add_option("--n-samples", st.spec.n_samples, "audit sample count");
    }
    if (def.kind == EK::OccupationScaling)
      sub->add_option("--weight", st.weight, "occupation weight: w1|w2");
    if (def.kind == EK::OperatorResidual)
      sub->add_option("--residual-tol", st.spec.residual_tol,
                      "max relative residual");
    if (def.kind == EK::BhpRatio || def.kind == EK::BhpFailure) {
      sub->add_option("--box-scale", st.spec.bhp_box_scale,
                      "box is U(r0) with this r0");
      sub->add_option("--spread-factor", st.spec.spread_factor,
                      "allowed normalized spread (bhp-ratio)");
      sub->add_option("--fn-index", st.spec.fn_index,
                      "index n of the boundary payoff f_n");
      sub->add_option("--ref-grid", st.spec.ref_grid,
                      "separate height grid for the reference harmonic")
          ->delimiter(',');
      sub->add_flag("--no-n-stability", st.no_n_stability,
                    "skip the n-doubling stability rerun");
    }
    const EK kind = def.kind;
    sub->callback([&st, kind] { st.spec.kind = kind; });
  }

  CLI11_PARSE(app, argc, argv);

  try {
    return execute(st);
  } catch (const halfstable::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const halfstable::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}
