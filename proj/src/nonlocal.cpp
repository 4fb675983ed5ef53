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

#include <algorithm>
#include <cmath>

#include <boost/math/quadrature/gauss.hpp>

#include "halfstable/util.hpp"

namespace halfstable {

TestFunction TestFunction::power(double q) {
  TestFunction f;
  f.tag = Tag::Power;
  f.exponent = q;
  return f;
}

TestFunction TestFunction::boxed_power(double q) {
  TestFunction f;
  f.tag = Tag::BoxedPower;
  f.exponent = q;
  return f;
}

TestFunction TestFunction::constant(double c) {
  TestFunction f;
  f.tag = Tag::Constant;
  f.value = c;
  return f;
}

TestFunction TestFunction::user(std::function<double(const HalfSpacePoint&)> fn,
                                double support_radius) {
  if (!(support_radius > 0.0))
    throw DomainError("user test function needs a positive support radius");
  TestFunction f;
  f.tag = Tag::User;
  f.fn = std::move(fn);
  f.support_radius = support_radius;
  return f;
}

double TestFunction::operator()(const HalfSpacePoint& y) const {
  switch (tag) {
    case Tag::Power:
      return std::pow(y.xd(), exponent);
    case Tag::BoxedPower:
      return (y.horizontal_norm() < 1.0 && y.xd() < 1.0)
                 ? std::pow(y.xd(), exponent)
                 : 0.0;
    case Tag::Constant:
      return value;
    case Tag::User:
      return fn(y);
  }
  return 0.0;
}

namespace {

constexpr double kInnerBudgetShare = 0.1;  // of abs_tol, for the dropped ball

// ---------------------------------------------------------------------------
// profile path: f(y) = y_d^q, optionally cut to the box D(1,1); x on the
// vertical axis (Power is horizontally invariant, so any x reduces to this)

struct Profile {
  double q = 0.0;
  bool boxed = false;
  double fx = 0.0;  // f(x)

  double phi(double yd) const { return std::pow(yd, q); }
  // value of f at height yd and horizontal distance rho from the axis
  double at(double yd, double rho) const {
    if (boxed && (rho >= 1.0 || yd >= 1.0)) return 0.0;
    return phi(yd);
  }
};

double endpoint_max_pow(double lo, double hi, double expo) {
  return std::max(std::pow(lo, expo), std::pow(hi, expo));
}

// Analytic bound on the mass dropped with the ball of radius eps: a
// second-derivative term, plus the Bar shape's odd term controlled by the
// Hoelder modulus of the boundary factor.
double dropped_ball_remainder(const TripleKernel& k, const Profile& pf,
                              double xd, double r_in, double eps) {
  const KernelParams& prm = k.params();
  const double alpha = prm.alpha;
  const double sd = sphere_area(prm.d);
  const double lo = xd - r_in, hi = xd + r_in;
  const double m2f =
      std::abs(pf.q * (pf.q - 1.0)) * endpoint_max_pow(lo, hi, pf.q - 2.0);
  double rem = k.diagonal() * m2f * sd / (2.0 - alpha) * std::pow(eps, 2.0 - alpha);
  if (prm.variant == Variant::Bar) {
    const double theta = prm.beta1 + prm.beta2;
    if (!(theta > alpha - 1.0))
      throw DomainError("bar kernel needs beta1+beta2 > alpha-1 for the PV split");
    const double m1f = std::abs(pf.q) * endpoint_max_pow(lo, hi, pf.q - 1.0);
    rem += 2.0 * m1f * std::pow(2.0 / xd, theta) * sd / (1.0 + theta - alpha) *
           std::pow(eps, 1.0 + theta - alpha);
  }
  return rem;
}

double choose_epsilon(const TripleKernel& k, const Profile& pf, double xd,
                      double r_in, double budget) {
  const double eps_max = 0.5 * r_in;
  if (dropped_ball_remainder(k, pf, xd, r_in, eps_max) <= budget) return eps_max;
  double a = 1e-12 * r_in, b = eps_max;
  for (int it = 0; it < 200; ++it) {
    const double mid = std::sqrt(a * b);
    (dropped_ball_remainder(k, pf, xd, r_in, mid) <= budget ? a : b) = mid;
  }
  return a;
}

// Paired inner-ball integrand at radius r and vertical displacement zd,
// grouped into even and odd parts. The even second difference of t^q is
// O(zd^2) and the naive three-term form drowns in rounding noise once the
// r^{-alpha} weight amplifies it, so it is assembled from
//   s = (q/2) log(1 - (zd/x)^2),  dlt = q atanh(zd/x),
//   f(x+zd)+f(x-zd)-2f(x) = 2 f(x) (expm1(s) cosh(dlt) + 2 sinh(dlt/2)^2),
//   f(x+zd)-f(x-zd)       = 2 f(x) e^s sinh(dlt),
// which are cancellation-free.
double pair_value(const TripleKernel& k, const Profile& pf, double xd,
                  double r, double zd) {
  const double ratio = zd / xd;
  const double s = 0.5 * pf.q * std::log1p(-ratio * ratio);
  const double dlt = pf.q * std::atanh(ratio);
  const double half_sinh = std::sinh(0.5 * dlt);
  const double even_f =
      2.0 * pf.fx * (std::expm1(s) * std::cosh(dlt) + 2.0 * half_sinh * half_sinh);
  const double odd_f = 2.0 * pf.fx * std::exp(s) * std::sinh(dlt);
  const double bp = k.eval(xd, xd + zd, r);
  const double bm = k.eval(xd, xd - zd, r);
  return 0.5 * (even_f * (bp + bm) + odd_f * (bp - bm));
}

QuadResult inner_ball_profile(const TripleKernel& k, const Profile& pf,
                              double xd, double r_in, double eps,
                              const Integrator& integ, double abs_tol) {
  const KernelParams& prm = k.params();
  const int d = prm.d;
  const double alpha = prm.alpha;
  long angular_evals = 0;

  auto radial = [&](double tau) {
    const double r = std::exp(tau);
    double ang;
    if (d == 1) {
      ang = pair_value(k, pf, xd, r, r);
    } else {
      auto g = [&](double phi) {
        ++angular_evals;
        const double w = d > 2 ? std::pow(std::sin(phi), d - 2) : 1.0;
        return w * pair_value(k, pf, xd, r, r * std::cos(phi));
      };
      ang = sphere_area(d - 1) *
            boost::math::quadrature::gauss<double, 30>::integrate(
                g, 0.0, 1.5707963267948966);
    }
    return ang * std::pow(r, -alpha);
  };

  QuadResult res = integ.integrate(radial, std::log(eps), std::log(r_in), abs_tol);
  res.n_evals += angular_evals;
  return res;
}

// rho-integral of the outer region at fixed height yd.
QuadResult outer_rho_profile(const TripleKernel& k, const Profile& pf,
                             double xd, double r_in, double yd,
                             const Integrator& integ, double abs_tol) {
  const KernelParams& prm = k.params();
  const double alpha = prm.alpha;
  const int d = prm.d;
  const double delta = yd - xd;
  const double rho_min = std::sqrt(std::max(0.0, r_in * r_in - delta * delta));

  auto fn = [&](double rho) {
    const double R = std::hypot(rho, delta);
    const double g = pf.at(yd, rho) - pf.fx;
    if (g == 0.0) return 0.0;
    const double w = d > 2 ? std::pow(rho, d - 2) : 1.0;
    return g * k.eval(xd, yd, R) * std::pow(R, -d - alpha) * w;
  };

  std::vector<double> breaks;
  for (double knot : {std::min(xd, yd), std::max(xd, yd)}) {
    if (knot > std::abs(delta)) {
      const double rb = std::sqrt(knot * knot - delta * delta);
      if (rb > rho_min) breaks.push_back(rb);
    }
  }
  if (pf.boxed && yd < 1.0 && 1.0 > rho_min) breaks.push_back(1.0);

  double far = 2.0 * std::max({1.0, rho_min, std::abs(delta), xd});
  for (double b : breaks) far = std::max(far, 2.0 * b);

  QuadResult res = integ.integrate_with_breaks(fn, rho_min, far, breaks, abs_tol);
  res += integ.integrate_algebraic_tail(fn, far, abs_tol);
  return res;
}

QuadResult outer_profile(const TripleKernel& k, const Profile& pf, double xd,
                         double r_in, const Integrator& integ, double abs_tol) {
  const KernelParams& prm = k.params();
  const int d = prm.d;
  const double alpha = prm.alpha;

  if (d == 1) {
    auto fn = [&](double y) {
      const double u = std::abs(y - xd);
      const double g = pf.at(y, 0.0) - pf.fx;
      if (g == 0.0) return 0.0;
      return g * k.eval(xd, y, u) * std::pow(u, -1.0 - alpha);
    };
    QuadResult res = integ.integrate_to_zero(fn, xd - r_in, abs_tol / 3.0);
    std::vector<double> breaks = {2.0 * xd};
    if (pf.boxed) breaks.push_back(1.0);
    const double y_hi = std::max({2.0 * (xd + r_in), 2.0, pf.boxed ? 1.5 : 0.0});
    res += integ.integrate_with_breaks(fn, xd + r_in, y_hi, breaks, abs_tol / 3.0);
    // exponentially decaying in log y: q < alpha+beta1 guarantees the rate
    res += integ.integrate_decaying(
        [&](double w) {
          const double y = std::exp(w);
          if (!pf.boxed && pf.q * w > 650.0) {
            // y^q overflows double; assemble the sample from logs
            const double u = y - xd;
            const double expo = pf.q * w + k.log_eval(xd, y, u) -
                                (1.0 + alpha) * std::log(u) + w;
            return expo < -700.0 ? 0.0 : std::exp(expo);
          }
          return fn(y) * y;
        },
        std::log(y_hi), abs_tol / 3.0);
    return res;
  }

  long inner_evals = 0;
  double inner_err = 0.0;
  const double rho_tol = abs_tol / 20.0;
  auto G = [&](double yd) {
    QuadResult r = outer_rho_profile(k, pf, xd, r_in, yd, integ, rho_tol);
    inner_evals += r.n_evals;
    inner_err = std::max(inner_err, r.error);
    return r.value;
  };

  const double y_lo = xd - r_in;
  std::vector<double> breaks = {xd, xd + r_in};
  if (pf.boxed) breaks.push_back(1.0);
  const double y_hi = std::max({2.0 * (xd + r_in), 2.0, pf.boxed ? 1.25 : 0.0});

  QuadResult res = integ.integrate_to_zero(G, y_lo, abs_tol / 3.0);
  res += integ.integrate_with_breaks(G, y_lo, y_hi, breaks, abs_tol / 3.0);
  res += integ.integrate_decaying(
      [&](double w) {
        const double y = std::exp(w);
        if (!pf.boxed && pf.q * w > 650.0) {
          // y^q overflows; split it off the horizontal mass in log space.
          Profile unit;
          unit.q = 0.0;
          unit.boxed = false;
          unit.fx = 0.0;  // g == 1: plain jump mass at height y
          const double mass =
              outer_rho_profile(k, unit, xd, r_in, y, integ, rho_tol).value;
          if (!(mass > 0.0)) return 0.0;
          const double expo = (pf.q + 1.0) * w + std::log(mass);
          return expo < -700.0 ? 0.0 : std::exp(expo);
        }
        return G(y) * y;
      },
      std::log(y_hi), abs_tol / 3.0);
  // the horizontal reduction carries the area of the unit (d-2)-sphere
  const double surface = sphere_area(d - 1);
  res.value *= surface;
  res.error = res.error * surface + inner_err + abs_tol / 10.0;
  res.n_evals += inner_evals;
  return res;
}

PVResult lb_alpha_profile(const TripleKernel& k, const Profile& pf,
                          const HalfSpacePoint& x, const QuadratureSpec& spec,
                          double epsilon_override) {
  const double xd = x.xd();
  const double r_in = 0.5 * xd;
  const Integrator integ(spec);

  double eps = choose_epsilon(k, pf, xd, r_in, spec.abs_tol * kInnerBudgetShare);
  if (epsilon_override > 0.0) eps = std::min(epsilon_override, 0.5 * r_in);

  QuadResult inner = inner_ball_profile(k, pf, xd, r_in, eps, integ,
                                        spec.abs_tol / 4.0);
  QuadResult outer = outer_profile(k, pf, xd, r_in, integ, spec.abs_tol / 2.0);

  PVResult pv;
  pv.value = inner.value + outer.value;
  pv.error_estimate =
      inner.error + outer.error + dropped_ball_remainder(k, pf, xd, r_in, eps);
  pv.epsilon_used = eps;
  pv.n_evals = inner.n_evals + outer.n_evals;
  return pv;
}

// ---------------------------------------------------------------------------
// user path: full-dimension cubature, d <= 3

// total jump mass out of the ball B(x, r_in) restricted to the half-space
QuadResult outer_jump_mass(const TripleKernel& k, const HalfSpacePoint& x,
                           double r_in, const Integrator& integ,
                           double abs_tol) {
  const KernelParams& prm = k.params();
  const int d = prm.d;
  const double alpha = prm.alpha;
  const double xd = x.xd();

  if (d == 1) {
    auto fn = [&](double y) {
      const double u = std::abs(y - xd);
      return k.eval(xd, y, u) * std::pow(u, -1.0 - alpha);
    };
    QuadResult res = integ.integrate_to_zero(fn, xd - r_in, abs_tol / 2.0);
    res += integ.integrate_with_breaks(fn, xd + r_in, 4.0 * xd, {2.0 * xd},
                                       abs_tol / 4.0);
    res += integ.integrate_algebraic_tail(fn, 4.0 * xd, abs_tol / 4.0);
    return res;
  }

  auto G = [&](double yd) {
    const double delta = yd - xd;
    const double rho_min = std::sqrt(std::max(0.0, r_in * r_in - delta * delta));
    auto fn = [&](double rho) {
      const double R = std::hypot(rho, delta);
      const double w = d > 2 ? std::pow(rho, d - 2) : 1.0;
      return k.eval(xd, yd, R) * std::pow(R, -d - alpha) * w;
    };
    std::vector<double> breaks;
    for (double knot : {std::min(xd, yd), std::max(xd, yd)}) {
      if (knot > std::abs(delta)) {
        const double rb = std::sqrt(knot * knot - delta * delta);
        if (rb > rho_min) breaks.push_back(rb);
      }
    }
    double far = 2.0 * std::max({1.0, rho_min, std::abs(delta), xd});
    QuadResult r = integ.integrate_with_breaks(fn, rho_min, far, breaks,
                                               abs_tol / 40.0);
    r += integ.integrate_algebraic_tail(fn, far, abs_tol / 40.0);
    return r.value;
  };

  QuadResult res = integ.integrate_to_zero(G, xd - r_in, abs_tol / 3.0);
  res += integ.integrate_with_breaks(G, xd - r_in, 2.0 * (xd + r_in),
                                     {xd, xd + r_in}, abs_tol / 3.0);
  res += integ.integrate_decaying(
      [&](double w) {
        const double y = std::exp(w);
        return G(y) * y;
      },
      std::log(2.0 * (xd + r_in)), abs_tol / 3.0);
  const double surface = sphere_area(d - 1);
  res.value *= surface;
  res.error *= surface;
  return res;
}

PVResult lb_alpha_user(const TripleKernel& k, const TestFunction& f,
                       const HalfSpacePoint& x, const QuadratureSpec& spec) {
  const KernelParams& prm = k.params();
  const int d = prm.d;
  if (d > 3)
    throw DomainError("user test functions support full cubature only for d <= 3");
  const double xd = x.xd();
  const double r_in = 0.5 * xd;
  const double alpha = prm.alpha;
  const Integrator integ(spec);
  const double fx = f(x);

  // curvature probe for the dropped-ball remainder
  double m2f = 0.0;
  const double h = r_in / 8.0;
  for (int axis = 0; axis < d; ++axis) {
    HalfSpacePoint xp = x, xm = x;
    xp[axis] += h;
    xm[axis] -= h;
    m2f = std::max(m2f, std::abs(f(xp) - 2.0 * fx + f(xm)) / (h * h));
  }
  m2f *= 4.0;  // safety on the finite-difference estimate
  const double budget = spec.abs_tol * kInnerBudgetShare;
  const double even_c =
      k.diagonal() * m2f * sphere_area(d) / (2.0 - alpha) + 1e-300;
  double eps = std::min(std::pow(budget / even_c, 1.0 / (2.0 - alpha)),
                        0.5 * r_in);
  if (prm.variant == Variant::Bar) eps = std::min(eps, 1e-3 * r_in);

  // inner ball, paired directions
  auto pair_user = [&](double r, const double* dir) {
    HalfSpacePoint yp = x, ym = x;
    for (int i = 0; i < d; ++i) {
      yp[i] += r * dir[i];
      ym[i] -= r * dir[i];
    }
    const double bp = k.eval(xd, yp.xd(), r);
    const double bm = k.eval(xd, ym.xd(), r);
    return (f(yp) - fx) * bp + (f(ym) - fx) * bm;
  };

  QuadResult inner;
  if (d == 1) {
    inner = integ.integrate(
        [&](double tau) {
          const double r = std::exp(tau);
          const double dir = 1.0;
          return pair_user(r, &dir) * std::pow(r, -alpha);
        },
        std::log(eps), std::log(r_in), spec.abs_tol / 4.0);
  } else if (d == 2) {
    inner = integ.integrate(
        [&](double tau) {
          const double r = std::exp(tau);
          auto g = [&](double phi) {
            const double dir[2] = {std::sin(phi), std::cos(phi)};
            return pair_user(r, dir);
          };
          const double ang = boost::math::quadrature::gauss<double, 30>::integrate(
              g, 0.0, 3.14159265358979323846);
          return ang * std::pow(r, -alpha);
        },
        std::log(eps), std::log(r_in), spec.abs_tol / 4.0);
  } else {
    inner = integ.integrate(
        [&](double tau) {
          const double r = std::exp(tau);
          auto outer_psi = [&](double psi) {
            auto g = [&](double th) {
              const double dir[3] = {std::sin(th) * std::cos(psi),
                                     std::sin(th) * std::sin(psi),
                                     std::cos(th)};
              return pair_user(r, dir) * std::sin(th);
            };
            return boost::math::quadrature::gauss<double, 20>::integrate(
                g, 0.0, 3.14159265358979323846);
          };
          const double ang = boost::math::quadrature::gauss<double, 20>::integrate(
              outer_psi, 0.0, 3.14159265358979323846);
          return ang * std::pow(r, -alpha);
        },
        std::log(eps), std::log(r_in), spec.abs_tol / 4.0);
  }

  // integral of f * J over the support, ball excluded
  const double rf = f.support_radius;
  auto masked = [&](const HalfSpacePoint& y) {
    if (y.distance_to(x) <= r_in) return 0.0;
    const double fy = f(y);
    if (fy == 0.0) return 0.0;
    return fy * k.jump_kernel(x, y);
  };
  QuadResult support_part;
  if (d == 1) {
    support_part = integ.integrate_with_breaks(
        [&](double y) { return masked(HalfSpacePoint{y}); }, 1e-12, rf,
        {xd - r_in, xd, xd + r_in}, spec.abs_tol / 4.0);
  } else if (d == 2) {
    support_part = integ.integrate_with_breaks(
        [&](double y1) {
          auto row = [&](double y2) { return masked(HalfSpacePoint{y1, y2}); };
          return integ
              .integrate_with_breaks(row, 1e-12, rf,
                                     {xd - r_in, xd, xd + r_in},
                                     spec.abs_tol / 40.0)
              .value;
        },
        -rf, rf, {x[0] - r_in, x[0], x[0] + r_in}, spec.abs_tol / 4.0);
  } else {
    support_part = integ.integrate_with_breaks(
        [&](double y1) {
          auto mid = [&](double y2) {
            auto row = [&](double y3) {
              return masked(HalfSpacePoint{y1, y2, y3});
            };
            return integ
                .integrate_with_breaks(row, 1e-12, rf,
                                       {xd - r_in, xd, xd + r_in},
                                       spec.abs_tol / 400.0)
                .value;
          };
          return integ
              .integrate_with_breaks(mid, -rf, rf, {x[1] - r_in, x[1], x[1] + r_in},
                                     spec.abs_tol / 40.0)
              .value;
        },
        -rf, rf, {x[0] - r_in, x[0], x[0] + r_in}, spec.abs_tol / 4.0);
  }

  QuadResult mass;
  if (fx != 0.0) mass = outer_jump_mass(k, x, r_in, integ, spec.abs_tol / 4.0);

  PVResult pv;
  pv.value = inner.value + support_part.value - fx * mass.value;
  pv.error_estimate = inner.error + support_part.error +
                      std::abs(fx) * mass.error + budget;
  pv.epsilon_used = eps;
  pv.n_evals = inner.n_evals + support_part.n_evals + mass.n_evals;
  return pv;
}

}  // namespace

PVResult lb_alpha(const TripleKernel& kernel, const TestFunction& f,
                  const HalfSpacePoint& x, const QuadratureSpec& spec,
                  double epsilon_override) {
  spec.validate();
  x.validate();
  const KernelParams& prm = kernel.params();
  if (x.dim() != prm.d) throw DomainError("point dimension mismatch");

  switch (f.tag) {
    case TestFunction::Tag::Constant:
      return {0.0, 0.0, 0.0, 0};
    case TestFunction::Tag::User:
      return lb_alpha_user(kernel, f, x, spec);
    case TestFunction::Tag::Power:
    case TestFunction::Tag::BoxedPower:
      break;
  }

  const double q = f.exponent;
  if (!(q > prm.p_lower()))
    throw DomainError("test-function exponent must exceed (alpha-1)_+");
  if (f.tag == TestFunction::Tag::Power && !(q < prm.p_upper()))
    throw DomainError("power exponent must stay below alpha+beta1 for integrability");

  Profile pf;
  pf.q = q;
  pf.boxed = f.tag == TestFunction::Tag::BoxedPower;
  if (pf.boxed) {
    if (prm.d > 1 && x.horizontal_norm() > 1e-12)
      throw DomainError("boxed test functions evaluate on the vertical axis only");
    const double dist = std::min(1.0 - x.xd(), 1.0);  // axis point in D(1,1)
    if (!(x.xd() < 1.0) || dist < 0.05 || 0.5 * x.xd() >= dist)
      throw SingularityError(
          "evaluation point too close to the box boundary (margin 0.05)");
  }
  pf.fx = pf.phi(x.xd());
  return lb_alpha_profile(kernel, pf, x, spec, epsilon_override);
}

PVResult lb(const TripleKernel& kernel, double c_killing, const TestFunction& f,
            const HalfSpacePoint& x, const QuadratureSpec& spec) {
  PVResult pv = lb_alpha(kernel, f, x, spec);
  const double fx = f(x);
  if (fx != 0.0)
    pv.value -= killing_rate(c_killing, kernel.params().alpha, x.xd()) * fx;
  return pv;
}

double residual_gp(const TripleKernel& kernel, double c_killing,
                   const std::vector<HalfSpacePoint>& x_samples,
                   const QuadratureSpec& spec) {
  if (x_samples.empty()) throw DomainError("residual check needs sample points");
  const KernelParams& prm = kernel.params();
  if (!(prm.p > prm.p_lower()))
    throw DomainError("residual check needs p strictly inside the window");
  if (!(c_killing > 0.0))
    throw DomainError("residual check needs a positive killing constant");

  const TestFunction gp = TestFunction::power(prm.p);
  double worst = 0.0;
  for (const HalfSpacePoint& x : x_samples) {
    const PVResult v = lb(kernel, c_killing, gp, x, spec);
    const double scale = c_killing * std::pow(x.xd(), prm.p - prm.alpha);
    worst = std::max(worst, std::abs(v.value) / scale);
  }
  return worst;
}

SignReport sign_check_hq(const TripleKernel& kernel, double c_killing,
                         double q, const std::vector<double>& zd_samples,
                         const QuadratureSpec& spec) {
  const KernelParams& prm = kernel.params();
  if (zd_samples.empty()) throw DomainError("sign check needs sample heights");
  if (!(q > prm.p_lower() && q < prm.p_upper()))
    throw DomainError("sign-check exponent outside the admissible window");
  if (q == prm.p) throw DomainError("sign check needs q distinct from p");

  SignReport rep;
  rep.q = q;
  rep.expect_positive = q > prm.p;
  const TestFunction hq = TestFunction::boxed_power(q);
  auto value_at = [&](double zd) {
    return lb(kernel, c_killing, hq, HalfSpacePoint::axis(prm.d, zd), spec).value;
  };

  if (rep.expect_positive) {
    // walk down from 1/2 until the lower-order boundary term loses
    double z = 0.5;
    while (z > 1e-4 && value_at(z) <= 0.0) z *= 0.5;
    rep.r0 = z;
  } else {
    rep.r0 = 0.5;  // whole height range of U
  }

  for (double zd : zd_samples) {
    if (!(zd > 0.0 && zd < 0.5))
      throw DomainError("sign-check heights must lie in (0, 1/2)");
    if (rep.expect_positive && zd > rep.r0) continue;
    const double v = value_at(zd);
    rep.values.emplace_back(zd, v);
    const bool ok = rep.expect_positive ? v > 0.0 : v < 0.0;
    if (!ok) ++rep.n_violations;
  }
  return rep;
}

}  // namespace halfstable
