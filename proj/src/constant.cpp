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

#include <atomic>
#include <vector>
#include <cmath>
#include <sstream>

#include "halfstable/util.hpp"

namespace halfstable {

namespace {

// u_total for inner variable s at horizontal offset radius rho.
// For d=1 there is no horizontal offset and u_total = 1-s.
double u_total(int d, double one_minus_s, double rho) {
  return d == 1 ? one_minus_s : one_minus_s * std::hypot(rho, 1.0);
}

// Integrand after the substitution s = exp(-v) on the s->0 side,
// including the Jacobian s. Evaluated through logs end to end: near the
// upper p-edge the raw factors over/underflow long before the product does.
double small_s_integrand(const TripleKernel& k, double alpha, double p,
                         double v, double rho) {
  const double s = std::exp(-v);
  if (s == 0.0) return 0.0;  // past double underflow the integrand is long gone
  const double oms = -std::expm1(-v);  // 1-s
  const double f1 = -std::expm1(-v * p);             // 1 - s^p
  const double f2 = -std::expm1(-v * (p + 1.0 - alpha));  // 1 - s^{p+1-alpha}
  const double u = u_total(k.params().d, oms, rho);
  const double logA = k.log_eval(1.0, s, u);
  const double expo = v * (p - alpha) + logA - (1.0 + alpha) * std::log(oms);
  if (expo < -700.0) return 0.0;
  return f1 * f2 * std::exp(expo);
}

// Integrand after the substitution 1-s = (1-w)^{1/(2-alpha)} on the s->1
// side. The Jacobian exactly cancels the (1-s)^{1-alpha} endpoint
// behavior, leaving ghat(s) * A / (2-alpha) with ghat smooth at s=1.
double near_one_integrand(const TripleKernel& k, double alpha, double p,
                          double w, double rho) {
  const double oms = std::pow(1.0 - w, 1.0 / (2.0 - alpha));
  const double diag_limit = p * (p + 1.0 - alpha);
  double ghat;
  double A;
  if (oms < 1e-14) {
    ghat = diag_limit;
    A = k.diagonal();
  } else {
    const double ls = std::log1p(-oms);
    const double a1 = std::expm1(p * ls);                     // s^p - 1
    const double a2 = -std::expm1((alpha - p - 1.0) * ls);    // 1 - s^{alpha-p-1}
    ghat = a1 * a2 / (oms * oms);
    A = k.eval(1.0, 1.0 - oms, u_total(k.params().d, oms, rho));
  }
  return ghat * A / (2.0 - alpha);
}

// s-positions where the kernel's clamped factors switch branch along the
// line (1, s, (1-s)h). The adaptive rule resolves these kinks much faster
// when they are explicit segment boundaries.
std::vector<double> kink_positions(const TripleKernel& k, double h) {
  const KernelParams& prm = k.params();
  std::vector<double> kinks;
  switch (prm.variant) {
    case Variant::Tilde: {
      kinks.push_back(h / (1.0 + h));            // s = u
      if (h > 1.0) kinks.push_back(1.0 - 1.0 / h);  // 1 = u
      break;
    }
    case Variant::Hat: {
      // root of s^{beta1} = ((1-s)h)^{beta1+beta2}, strictly increasing LHS
      // against strictly decreasing RHS
      const double b1 = prm.beta1, bs = prm.beta1 + prm.beta2;
      if (bs > 0.0) {
        double lo = 1e-15, hi = 1.0 - 1e-15;
        for (int it = 0; it < 80; ++it) {
          const double mid = 0.5 * (lo + hi);
          const double f = b1 * std::log(mid) -
                           bs * (std::log1p(-mid) + std::log(h));
          (f < 0.0 ? lo : hi) = mid;
        }
        kinks.push_back(0.5 * (lo + hi));
      }
      // the log-factor arguments still switch at the Tilde positions
      kinks.push_back(h / (1.0 + h));
      if (h > 1.0) kinks.push_back(1.0 - 1.0 / h);
      break;
    }
    case Variant::Bar:
      // rational main factor is smooth; only the log factors switch
      if (prm.beta3 > 0.0 || prm.beta4 > 0.0) {
        kinks.push_back(h / (1.0 + h));
        if (h > 1.0) kinks.push_back(1.0 - 1.0 / h);
      }
      break;
    case Variant::Constant:
      break;
  }
  return kinks;
}

// Inner s-integral at fixed horizontal offset radius rho, with both
// endpoint substitutions applied.
QuadResult inner_c_integral(const TripleKernel& k, const Integrator& integ,
                            double rho, double abs_tol) {
  const KernelParams& prm = k.params();
  const double alpha = prm.alpha, p = prm.p;
  const QuadratureSpec& spec = integ.spec();
  const double h = prm.d == 1 ? 1.0 : std::hypot(rho, 1.0);
  const std::vector<double> kinks = kink_positions(k, h);

  QuadResult total;
  // (0, split_lo]: s = exp(-v), exponentially decaying in v.
  {
    auto f = [&](double v) { return small_s_integrand(k, alpha, p, v, rho); };
    double v_start = -std::log(spec.split_lo);
    for (double s_k : kinks) {
      if (s_k > 0.0 && s_k < spec.split_lo) {
        const double v_k = -std::log(s_k);  // v_k > v_start
        total += integ.integrate(f, v_start, v_k, abs_tol / 4.0);
        v_start = v_k;
      }
    }
    total += integ.integrate_decaying(f, v_start, abs_tol / 4.0);
  }
  // middle segment, plain integrand (empty with the default splits).
  if (spec.split_lo < spec.split_hi) {
    std::vector<double> breaks;
    for (double s_k : kinks)
      if (s_k > spec.split_lo && s_k < spec.split_hi) breaks.push_back(s_k);
    total += integ.integrate_with_breaks(
        [&](double s) { return inner_integrand(k, s, rho); }, spec.split_lo,
        spec.split_hi, breaks, abs_tol / 4.0);
  }
  // [split_hi, 1): flattening substitution.
  {
    const double w_lo = 1.0 - std::pow(1.0 - spec.split_hi, 2.0 - alpha);
    std::vector<double> breaks;
    for (double s_k : kinks)
      if (s_k > spec.split_hi && s_k < 1.0)
        breaks.push_back(1.0 - std::pow(1.0 - s_k, 2.0 - alpha));
    total += integ.integrate_with_breaks(
        [&](double w) { return near_one_integrand(k, alpha, p, w, rho); },
        w_lo, 1.0, breaks, abs_tol / 4.0);
  }
  return total;
}

}  // namespace

double inner_integrand(const TripleKernel& kernel, double s, double radial_u) {
  if (!(s > 0.0 && s < 1.0)) throw DomainError("inner integrand needs s in (0,1)");
  if (radial_u < 0.0) throw DomainError("radial offset must be non-negative");
  const KernelParams& prm = kernel.params();
  const double ls = std::log(s);
  const double u = u_total(prm.d, 1.0 - s, radial_u);
  const double lf2 = (prm.alpha - prm.p - 1.0) * ls;
  if (lf2 > 690.0) {
    // s^{alpha-p-1} overflows; fold everything into one exponent. Both
    // leading factors are ~ -1 and ~ -s^{alpha-p-1} here.
    const double expo = lf2 + kernel.log_eval(1.0, s, u) -
                        (1.0 + prm.alpha) * std::log1p(-s);
    return -std::expm1(prm.p * ls) * std::exp(expo);
  }
  const double f1 = std::expm1(prm.p * ls);       // s^p - 1
  const double f2 = -std::expm1(lf2);             // 1 - s^{alpha-p-1}
  const double den = std::pow(1.0 - s, 1.0 + prm.alpha);
  return f1 * f2 / den * kernel.eval(1.0, s, u);
}

ConstantResult c_constant(const TripleKernel& kernel, const QuadratureSpec& spec) {
  spec.validate();
  const KernelParams& prm = kernel.params();
  prm.validate();
  if (prm.p == prm.p_lower()) return {0.0, 0.0, 0};  // integrand identically zero

  const Integrator integ(spec);
  QuadResult q;
  if (prm.d == 1) {
    q = inner_c_integral(kernel, integ, 0.0, spec.abs_tol);
  } else {
    const double surface = sphere_area(prm.d - 1);
    const double expo = 0.5 * (prm.d + prm.alpha);
    long inner_evals = 0;
    auto outer = [&](double rho) {
      const double weight = (prm.d > 2 ? std::pow(rho, prm.d - 2) : 1.0) *
                            std::pow(rho * rho + 1.0, -expo);
      if (weight == 0.0) return 0.0;
      QuadResult inner = inner_c_integral(kernel, integ, rho, spec.abs_tol / 10.0);
      inner_evals += inner.n_evals;
      return weight * inner.value;
    };
    q = integ.integrate(outer, 0.0, 2.0, spec.abs_tol / 2.0);
    q += integ.integrate_algebraic_tail(outer, 2.0, spec.abs_tol / 2.0);
    q.value *= surface;
    q.error = q.error * surface + spec.abs_tol / 10.0;  // inner-tolerance budget
    q.n_evals += inner_evals;
  }

  if (q.error > std::max(spec.abs_tol, spec.rel_tol * std::abs(q.value))) {
    std::ostringstream os;
    os << "killing-constant quadrature error " << q.error
       << " above tolerance at p=" << prm.p;
    throw NonConvergence(os.str());
  }
  return {q.value, q.error, q.n_evals};
}

std::vector<std::pair<double, ConstantResult>> c_profile(
    const KernelParams& params, const std::vector<double>& p_grid,
    const QuadratureSpec& spec, int n_threads) {
  if (p_grid.empty()) throw DomainError("empty p grid");
  for (std::size_t i = 0; i + 1 < p_grid.size(); ++i)
    if (!(p_grid[i] < p_grid[i + 1]))
      throw DomainError("p grid must be strictly increasing");

  std::vector<std::pair<double, ConstantResult>> out(p_grid.size());
  std::atomic<bool> failed{false};
  std::string fail_msg;
  parallel_for(static_cast<long>(p_grid.size()), n_threads,
               [&](long lo, long hi) {
                 for (long i = lo; i < hi; ++i) {
                   KernelParams prm = params;
                   prm.p = p_grid[static_cast<std::size_t>(i)];
                   try {
                     TripleKernel k(prm);
                     out[static_cast<std::size_t>(i)] = {prm.p, c_constant(k, spec)};
                   } catch (const Error& e) {
                     if (!failed.exchange(true)) fail_msg = e.what();
                   }
                 }
               });
  if (failed) throw NonConvergence("c_profile grid point failed: " + fail_msg);
  return out;
}

}  // namespace halfstable
