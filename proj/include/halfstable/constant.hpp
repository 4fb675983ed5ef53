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

#ifndef HALFSTABLE_CONSTANT_HPP
#define HALFSTABLE_CONSTANT_HPP

#include <utility>
#include <vector>

#include "halfstable/kernel.hpp"
#include "halfstable/quadrature.hpp"

namespace halfstable {

struct ConstantResult {
  double value = 0.0;
  double error_estimate = 0.0;
  long n_evals = 0;
};

/// Integrand of the killing constant at inner variable s in (0,1) and
/// horizontal offset radius radial_u (ignored for d=1):
///   (s^p - 1)(1 - s^{alpha-p-1}) (1-s)^{-1-alpha} * A(1, s, u_total),
/// with u_total = (1-s) * sqrt(radial_u^2 + 1). Non-negative for
/// p > alpha-1, identically zero at p = alpha-1.
double inner_integrand(const TripleKernel& kernel, double s, double radial_u);

/// The killing constant that makes y -> y_d^p harmonic. For d >= 2 the
/// outer (d-1)-dimensional integral is reduced to a radial one; the
/// reduction is legal because the boundary term has triple form.
///
/// p == (alpha-1)_+ short-circuits to exactly zero. Throws DomainError for
/// p outside [(alpha-1)_+, alpha+beta1), NonConvergence when the adaptive
/// scheme cannot reach max(abs_tol, rel_tol * value).
ConstantResult c_constant(const TripleKernel& kernel, const QuadratureSpec& spec);

/// c_constant along a strictly increasing grid of p values; evaluations of
/// distinct grid points run in parallel.
std::vector<std::pair<double, ConstantResult>> c_profile(
    const KernelParams& params, const std::vector<double>& p_grid,
    const QuadratureSpec& spec, int n_threads = 1);

}  // namespace halfstable

#endif
