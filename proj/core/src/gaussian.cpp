// Copyright 2026 The obbloss Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "obbloss/gaussian.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "obbloss/errors.hpp"

namespace obbloss {
namespace {

// Rejects only true degeneracy; valid boxes have det = (wh/4)^2 > 0.
constexpr double kMinDeterminant = 1e-300;

void require_positive_definite(const Covariance& m, const char* what) {
  if (!std::isfinite(m.s11) || !std::isfinite(m.s12) ||
      !std::isfinite(m.s22) || !(m.s11 > 0.0) ||
      !(m.det() > kMinDeterminant)) {
    throw DegenerateCovarianceError(std::string(what) +
                                    " is not positive definite");
  }
}

Covariance multiply_symmetric_result(const Covariance& a, double i11,
                                     double i12, double i22) {
  // a * inv * a for symmetric a and inv; the product is symmetric.
  const double m11 = a.s11 * i11 + a.s12 * i12;
  const double m12 = a.s11 * i12 + a.s12 * i22;
  const double m21 = a.s12 * i11 + a.s22 * i12;
  const double m22 = a.s12 * i12 + a.s22 * i22;
  const double r11 = m11 * a.s11 + m12 * a.s12;
  const double r12 = m11 * a.s12 + m12 * a.s22;
  const double r21 = m21 * a.s11 + m22 * a.s12;
  const double r22 = m21 * a.s12 + m22 * a.s22;
  return {r11, 0.5 * (r12 + r21), r22};
}

}  // namespace

void validate(const ModulationParams& params) {
  if (!std::isfinite(params.alpha) || !(params.alpha < 4.0)) {
    throw InvalidArgumentError("modulation factor alpha must be < 4");
  }
}

GaussianBox to_gaussian(const OrientedBox& box) {
  validate(box);
  const double major = box.w * box.w / 4.0;
  const double minor = box.h * box.h / 4.0;
  const double c = std::cos(box.theta);
  const double s = std::sin(box.theta);
  // Written as offsets from the axis-aligned diagonal so that a square maps
  // to an exactly isotropic matrix regardless of theta.
  const double spread = major - minor;
  return {{box.cx, box.cy},
          {major - spread * s * s, spread * c * s, minor + spread * s * s}};
}

double gauss_area(const Covariance& sigma) {
  require_positive_definite(sigma, "covariance");
  return 4.0 * std::sqrt(sigma.det());
}

Covariance kalman_intersection(const Covariance& sp, const Covariance& st) {
  require_positive_definite(sp, "predicted covariance");
  require_positive_definite(st, "target covariance");
  const Covariance sum{sp.s11 + st.s11, sp.s12 + st.s12, sp.s22 + st.s22};
  const double det = sum.det();
  if (!(det > kMinDeterminant)) {
    throw DegenerateCovarianceError("covariance sum is singular");
  }
  const double i11 = sum.s22 / det;
  const double i12 = -sum.s12 / det;
  const double i22 = sum.s11 / det;
  const Covariance gain = multiply_symmetric_result(sp, i11, i12, i22);
  Covariance out{sp.s11 - gain.s11, sp.s12 - gain.s12, sp.s22 - gain.s22};
  require_positive_definite(out, "intersection covariance");
  return out;
}

double kfiou(const OrientedBox& pred, const OrientedBox& target) {
  const Covariance sp = to_gaussian(pred).sigma;
  const Covariance st = to_gaussian(target).sigma;
  const double area_p = gauss_area(sp);
  const double area_t = gauss_area(st);
  const double area_pt = gauss_area(kalman_intersection(sp, st));
  return area_pt / (area_p + area_t - area_pt);
}

ABTerms ab_terms(const OrientedBox& pred, const OrientedBox& target) {
  const OrientedBox p = canonicalize(pred);
  const OrientedBox t = canonicalize(target);
  const double dtheta = p.theta - t.theta;
  const double cos2 = std::cos(dtheta) * std::cos(dtheta);
  const double sin2 = std::sin(dtheta) * std::sin(dtheta);

  const double wp2 = p.w * p.w;
  const double hp2 = p.h * p.h;
  const double wt2 = t.w * t.w;
  const double ht2 = t.h * t.h;

  const double a = std::sqrt(1.0 + (wp2 * hp2) / (wt2 * ht2) +
                             (wp2 / wt2 + hp2 / ht2) * cos2 +
                             (wp2 / ht2 + hp2 / wt2) * sin2);
  const double b = std::sqrt(1.0 + (wt2 * ht2) / (wp2 * hp2) +
                             (wt2 / wp2 + ht2 / hp2) * cos2 +
                             (wt2 / hp2 + ht2 / wp2) * sin2);
  return {a, b};
}

double mkiou(const OrientedBox& pred, const OrientedBox& target,
             const ModulationParams& params) {
  validate(params);
  const ABTerms ab = ab_terms(pred, target);
  // A + B >= 4 analytically; rounding can push it a hair below.
  return std::min((4.0 - params.alpha) / (ab.sum() - params.alpha), 1.0);
}

}  // namespace obbloss
