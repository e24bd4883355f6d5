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

#pragma once

#include "obbloss/geometry.hpp"

namespace obbloss {

/// Symmetric 2x2 matrix stored as its upper triangle.
struct Covariance {
  double s11 = 1.0;
  double s12 = 0.0;
  double s22 = 1.0;

  double det() const { return s11 * s22 - s12 * s12; }
  double trace() const { return s11 + s22; }
};

/// 2-D Gaussian model of an oriented box: mean at the center, covariance
/// R diag(w^2/4, h^2/4) R^T.
struct GaussianBox {
  Point mu;
  Covariance sigma;
};

struct ModulationParams {
  double alpha = 3.0;
};

/// Throws InvalidArgumentError unless alpha is finite and < 4.
void validate(const ModulationParams& params);

GaussianBox to_gaussian(const OrientedBox& box);

/// Box area recovered from a covariance, 4 * sqrt(det sigma). Throws
/// DegenerateCovarianceError when sigma is not positive definite.
double gauss_area(const Covariance& sigma);
inline double gauss_area(const GaussianBox& g) { return gauss_area(g.sigma); }

/// Covariance of the Kalman update of `sp` by `st`:
/// sp - sp (sp + st)^-1 sp, using the explicit 2x2 inverse.
Covariance kalman_intersection(const Covariance& sp, const Covariance& st);

/// KFIoU from the covariance path: S_pt / (S_p + S_t - S_pt). Centers are
/// ignored, so the result lies in (0, 1/3].
double kfiou(const OrientedBox& pred, const OrientedBox& target);

/// Closed-form terms with kfiou = 1 / (A + B - 1). A is driven by the
/// prediction-to-target extent ratios, B by their reciprocals.
struct ABTerms {
  double a = 2.0;
  double b = 2.0;

  double sum() const { return a + b; }
};

ABTerms ab_terms(const OrientedBox& pred, const OrientedBox& target);

/// Modulated KFIoU, (4 - alpha) / (A + B - alpha), in (0, 1]. alpha = 1
/// reproduces 3 * kfiou.
double mkiou(const OrientedBox& pred, const OrientedBox& target,
             const ModulationParams& params = {});

}  // namespace obbloss
