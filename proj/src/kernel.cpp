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

#include "halfstable/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace halfstable {

namespace {

constexpr double kLog2 = 0.6931471805599453094;

double pow_or_one(double base, double expo) {
  return expo == 0.0 ? 1.0 : std::pow(base, expo);
}

}  // namespace

std::string to_string(Variant v) {
  switch (v) {
    case Variant::Tilde: return "tilde";
    case Variant::Hat: return "hat";
    case Variant::Bar: return "bar";
    case Variant::Constant: return "const";
  }
  return "?";
}

Variant variant_from_string(const std::string& s) {
  if (s == "tilde") return Variant::Tilde;
  if (s == "hat") return Variant::Hat;
  if (s == "bar") return Variant::Bar;
  if (s == "const" || s == "constant" || s == "one") return Variant::Constant;
  throw DomainError("unknown kernel variant: " + s);
}

void KernelParams::validate() const {
  if (d < 1 || d > kMaxDim)
    throw DomainError("dimension d must be in [1," + std::to_string(kMaxDim) + "]");
  if (!(alpha > 0.0 && alpha < 2.0))
    throw DomainError("alpha must lie in (0,2)");
  if (beta1 < 0 || beta2 < 0 || beta3 < 0 || beta4 < 0)
    throw DomainError("beta exponents must be non-negative");
  if (beta3 > 0 && !(beta1 > 0))
    throw DomainError("beta1 must be positive when beta3 is");
  if (beta4 > 0 && !(beta2 > 0))
    throw DomainError("beta2 must be positive when beta4 is");
  if (variant == Variant::Constant &&
      (beta1 != 0 || beta2 != 0 || beta3 != 0 || beta4 != 0))
    throw DomainError("constant variant requires all beta exponents zero");
  if (!(p >= p_lower() && p < p_upper())) {
    std::ostringstream os;
    os << "p=" << p << " outside [" << p_lower() << "," << p_upper() << ")";
    throw DomainError(os.str());
  }
}

HalfSpacePoint::HalfSpacePoint(std::initializer_list<double> coords) {
  if (coords.size() < 1 || coords.size() > static_cast<std::size_t>(kMaxDim))
    throw DomainError("point dimension out of range");
  dim_ = static_cast<int>(coords.size());
  std::copy(coords.begin(), coords.end(), c_.begin());
}

HalfSpacePoint::HalfSpacePoint(const double* coords, int d) {
  if (d < 1 || d > kMaxDim) throw DomainError("point dimension out of range");
  dim_ = d;
  std::copy(coords, coords + d, c_.begin());
}

HalfSpacePoint HalfSpacePoint::axis(int d, double xd) {
  if (d < 1 || d > kMaxDim) throw DomainError("point dimension out of range");
  HalfSpacePoint p;
  p.dim_ = d;
  p.c_.fill(0.0);
  p.c_[d - 1] = xd;
  return p;
}

double HalfSpacePoint::horizontal_norm() const {
  double s = 0.0;
  for (int i = 0; i + 1 < dim_; ++i) s += c_[i] * c_[i];
  return std::sqrt(s);
}

double HalfSpacePoint::distance_to(const HalfSpacePoint& other) const {
  if (other.dim_ != dim_) throw DomainError("dimension mismatch between points");
  double s = 0.0;
  for (int i = 0; i < dim_; ++i) {
    const double dx = c_[i] - other.c_[i];
    s += dx * dx;
  }
  return std::sqrt(s);
}

void HalfSpacePoint::validate() const {
  if (!(xd() > 0.0)) throw DomainError("point not strictly inside the half-space");
  for (int i = 0; i < dim_; ++i)
    if (!std::isfinite(c_[i])) throw DomainError("point has non-finite coordinate");
}

double clamped_log_power_sup(double b, double g) {
  if (g == 0.0) return 1.0;  // sup of a^b on (0,1] at a=1
  if (!(b > 0.0)) throw DomainError("log factor requires a positive power");
  // Maximize h(a) = b*log(a) + g*log(log(1+1/a)) by golden section in log a.
  auto h = [&](double la) {
    const double a = std::exp(la);
    return b * la + g * std::log(std::log1p(1.0 / a));
  };
  const double phi = 0.6180339887498949;
  double lo = std::log(1e-12), hi = 0.0;
  double x1 = hi - phi * (hi - lo), x2 = lo + phi * (hi - lo);
  double f1 = h(x1), f2 = h(x2);
  for (int it = 0; it < 200; ++it) {
    if (f1 < f2) {
      lo = x1; x1 = x2; f1 = f2;
      x2 = lo + phi * (hi - lo); f2 = h(x2);
    } else {
      hi = x2; x2 = x1; f2 = f1;
      x1 = hi - phi * (hi - lo); f1 = h(x1);
    }
  }
  return std::exp(std::max(f1, f2));
}

TripleKernel::TripleKernel(const KernelParams& params) : params_(params) {
  params_.validate();
  diagonal_ = params_.variant == Variant::Constant
                  ? 1.0
                  : pow_or_one(kLog2, params_.beta3 + params_.beta4);
  if (params_.variant == Variant::Constant) {
    sup_bound_ = 1.0;
  } else {
    double s = clamped_log_power_sup(params_.beta1, params_.beta3) *
               clamped_log_power_sup(params_.beta2, params_.beta4);
    if (params_.variant != Variant::Tilde)
      s *= std::pow(2.0, std::max(params_.beta1, params_.beta2));
    sup_bound_ = s;
  }
}

double TripleKernel::eval(double s, double t, double u) const {
  if (!(s > 0.0) || !(t > 0.0) || u < 0.0)
    throw DomainError("triple kernel arguments must be positive");
  if (params_.variant == Variant::Constant) return 1.0;
  if (u == 0.0) return diagonal_;

  const double m = std::min(s, t);
  const double M = std::max(s, t);
  const double b1 = params_.beta1, b2 = params_.beta2;
  const double b3 = params_.beta3, b4 = params_.beta4;

  double logf = 1.0;
  if (b3 != 0.0) {
    const double ratio = std::min(M, u) / std::min(m, u);
    if (!std::isfinite(ratio)) return std::exp(log_eval(s, t, u));
    logf *= std::pow(std::log1p(ratio), b3);
  }
  if (b4 != 0.0) {
    const double ratio = u / std::min(M, u);
    if (!std::isfinite(ratio)) return std::exp(log_eval(s, t, u));
    logf *= std::pow(std::log1p(ratio), b4);
  }

  switch (params_.variant) {
    case Variant::Tilde:
      return pow_or_one(std::min(m / u, 1.0), b1) *
             pow_or_one(std::min(M / u, 1.0), b2) * logf;
    case Variant::Hat: {
      const double ratio = pow_or_one(m, b1) * pow_or_one(M, b2) /
                           pow_or_one(u, b1 + b2);
      return std::min(ratio, 1.0) * logf;
    }
    case Variant::Bar: {
      const double num = pow_or_one(m, b1) * pow_or_one(M, b2);
      const double den = pow_or_one(u, b1 + b2);
      return num / (den + num) * logf;
    }
    case Variant::Constant:
      break;
  }
  return 1.0;
}

double TripleKernel::log_eval(double s, double t, double u) const {
  if (!(s > 0.0) || !(t > 0.0) || u < 0.0)
    throw DomainError("triple kernel arguments must be positive");
  if (params_.variant == Variant::Constant) return 0.0;
  if (u == 0.0) return std::log(diagonal_);

  const double m = std::min(s, t);
  const double M = std::max(s, t);
  const double b1 = params_.beta1, b2 = params_.beta2;
  const double b3 = params_.beta3, b4 = params_.beta4;
  const double lm = std::log(m), lM = std::log(M), lu = std::log(u);

  // log(log1p(exp(lr))) formed from the log of the ratio, so extreme
  // scale separations never overflow.
  auto log_log1p_exp = [](double lr) {
    return lr > 36.0 ? std::log(lr + std::exp(-lr))
                     : std::log(std::log1p(std::exp(lr)));
  };
  double acc = 0.0;
  if (b3 != 0.0) acc += b3 * log_log1p_exp(std::min(lM, lu) - std::min(lm, lu));
  if (b4 != 0.0) acc += b4 * log_log1p_exp(lu - std::min(lM, lu));

  switch (params_.variant) {
    case Variant::Tilde:
      acc += b1 * std::min(lm - lu, 0.0) + b2 * std::min(lM - lu, 0.0);
      break;
    case Variant::Hat:
      acc += std::min(b1 * lm + b2 * lM - (b1 + b2) * lu, 0.0);
      break;
    case Variant::Bar: {
      // log( num/(den+num) ) via log-sum-exp with a = log den, b = log num.
      const double la = (b1 + b2) * lu;
      const double lb = b1 * lm + b2 * lM;
      const double lsum = std::max(la, lb) + std::log1p(std::exp(-std::abs(la - lb)));
      acc += lb - lsum;
      break;
    }
    case Variant::Constant:
      break;
  }
  return acc;
}

double TripleKernel::b_eval(const HalfSpacePoint& x, const HalfSpacePoint& y) const {
  x.validate();
  y.validate();
  if (x.dim() != params_.d || y.dim() != params_.d)
    throw DomainError("point dimension does not match kernel dimension");
  return eval(x.xd(), y.xd(), x.distance_to(y));
}

double TripleKernel::jump_kernel(const HalfSpacePoint& x, const HalfSpacePoint& y) const {
  x.validate();
  y.validate();
  if (x.dim() != params_.d || y.dim() != params_.d)
    throw DomainError("point dimension does not match kernel dimension");
  const double r = x.distance_to(y);
  if (r == 0.0) throw DomainError("jump kernel is singular at x == y");
  return eval(x.xd(), y.xd(), r) * std::pow(r, -params_.d - params_.alpha);
}

double killing_rate(double c_constant, double alpha, double xd) {
  if (!(xd > 0.0)) throw DomainError("killing rate needs x_d > 0");
  if (c_constant < 0.0) throw DomainError("killing constant must be non-negative");
  return c_constant * std::pow(xd, -alpha);
}

}  // namespace halfstable
