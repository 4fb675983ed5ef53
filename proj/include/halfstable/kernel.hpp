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

#ifndef HALFSTABLE_KERNEL_HPP
#define HALFSTABLE_KERNEL_HPP

#include <array>
#include <cstddef>
#include <string>

#include "halfstable/errors.hpp"

namespace halfstable {

/// Shape of the boundary factor multiplying the stable kernel.
///
/// Tilde:    product of clamped ratios and two log factors.
/// Hat:      single clamp of the combined power ratio, same log factors.
/// Bar:      rational (smooth) version of Hat.
/// Constant: identically 1 (no boundary decay).
enum class Variant { Tilde, Hat, Bar, Constant };

std::string to_string(Variant v);
Variant variant_from_string(const std::string& s);

/// Full parameterization of the jump kernel and the killing function.
///
/// The admissible decay-rate window for p is ((alpha-1)_+, alpha+beta1);
/// the left endpoint is allowed and selects the degenerate case of a
/// vanishing killing constant.
struct KernelParams {
  int d = 1;          // spatial dimension, >= 1
  double alpha = 1.0; // stability index, in (0,2)
  double beta1 = 0.0;
  double beta2 = 0.0;
  double beta3 = 0.0;
  double beta4 = 0.0;
  Variant variant = Variant::Constant;
  double p = 0.5;

  /// Left endpoint (alpha-1)_+ of the admissible p-window.
  double p_lower() const { return alpha > 1.0 ? alpha - 1.0 : 0.0; }
  /// Right endpoint alpha+beta1 of the admissible p-window.
  double p_upper() const { return alpha + beta1; }

  /// Throws DomainError if any invariant fails.
  void validate() const;
};

inline constexpr int kMaxDim = 8;

/// A point strictly inside the half-space {x_d > 0}, d <= kMaxDim.
class HalfSpacePoint {
public:
  HalfSpacePoint() : dim_(1) { c_[0] = 1.0; }
  HalfSpacePoint(std::initializer_list<double> coords);
  HalfSpacePoint(const double* coords, int d);

  /// Axis point (0,...,0,xd).
  static HalfSpacePoint axis(int d, double xd);

  int dim() const { return dim_; }
  double operator[](std::size_t i) const { return c_[i]; }
  double& operator[](std::size_t i) { return c_[i]; }
  const double* data() const { return c_.data(); }

  /// Distance to the boundary: the last coordinate.
  double xd() const { return c_[dim_ - 1]; }

  /// Euclidean norm of the horizontal part (first d-1 coordinates).
  double horizontal_norm() const;

  double distance_to(const HalfSpacePoint& other) const;

  /// Throws DomainError unless strictly inside the half-space.
  void validate() const;

private:
  int dim_;
  std::array<double, kMaxDim> c_{};
};

/// Evaluator of the boundary term as a function of
/// (s, t, u) = (dist of x to boundary, dist of y to boundary, |x-y|).
///
/// All three shapes are symmetric in (s,t), scale invariant, and positive;
/// eval is exact under swapping s and t (min/max are taken first).
class TripleKernel {
public:
  explicit TripleKernel(const KernelParams& params);

  const KernelParams& params() const { return params_; }

  /// A(s,t,u) for s,t,u > 0. At u == 0 returns the diagonal limit.
  double eval(double s, double t, double u) const;

  /// log A(s,t,u), computed without forming huge or tiny intermediates.
  /// Needed by quadratures that visit extreme scales.
  double log_eval(double s, double t, double u) const;

  /// Diagonal value B(x,x): (log 2)^{beta3+beta4}, or 1 for Constant.
  double diagonal() const { return diagonal_; }

  /// B(x,y) from actual points. At x == y returns the diagonal limit.
  double b_eval(const HalfSpacePoint& x, const HalfSpacePoint& y) const;

  /// J(x,y) = B(x,y) |x-y|^{-d-alpha}. Throws DomainError at x == y.
  double jump_kernel(const HalfSpacePoint& x, const HalfSpacePoint& y) const;

  /// Rigorous upper bound for sup B(x,y) over point pairs, i.e. over
  /// realizable triples (those with u >= |s-t|; the boundary distance is
  /// 1-Lipschitz, so actual points never violate this).
  /// Tilde: S(beta1,beta3) * S(beta2,beta4) with
  /// S(b,g) = sup_{0<a<=1} a^b log(1+1/a)^g, valid for all triples.
  /// Hat/Bar pick up the comparability factor 2^{beta1 v beta2}, whose
  /// proof needs realizability.
  double sup_bound() const { return sup_bound_; }

private:
  KernelParams params_;
  double diagonal_;
  double sup_bound_;
};

/// sup_{0<a<=1} a^b (log(1+1/a))^g for b,g >= 0 (g>0 requires b>0).
double clamped_log_power_sup(double b, double g);

/// kappa(x) = C(alpha,p,B) x_d^{-alpha} given a precomputed constant.
double killing_rate(double c_constant, double alpha, double xd);

}  // namespace halfstable

#endif
