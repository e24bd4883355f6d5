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

#include <array>
#include <functional>
#include <string>
#include <string_view>

#include "obbloss/gaussian.hpp"
#include "obbloss/geometry.hpp"

namespace obbloss {

/// Which IoU-style term the regression loss uses.
///   kf_linear  1 - KFIoU
///   kf_exp     exp(1 - KFIoU) - 1
///   kf_neglog  -ln(KFIoU)
///   mk         1 - MKIoU
///   mk_ga      1 - MKIoU, plus the Gaussian angle term
/// The kf_* variants work on raw KFIoU (max 1/3), so their minima are
/// 2/3, exp(2/3) - 1 and ln 3 rather than 0.
enum class LossVariant { kf_linear, kf_exp, kf_neglog, mk, mk_ga };

std::string_view to_string(LossVariant v);
/// Throws InvalidArgumentError on an unknown name.
LossVariant parse_variant(std::string_view name);
inline constexpr std::array<LossVariant, 5> kAllVariants{
    LossVariant::kf_linear, LossVariant::kf_exp, LossVariant::kf_neglog,
    LossVariant::mk, LossVariant::mk_ga};

struct LossConfig {
  double alpha = 3.0;      // MKIoU modulation, < 4
  double beta = 0.3;       // angle-term weight, >= 0
  double lambda = 3.0;     // angle-term sharpness, > 0
  double sl1_delta = 1.0;  // Smooth L1 transition point, > 0
  LossVariant variant = LossVariant::mk_ga;

  ModulationParams modulation() const { return {alpha}; }
};

/// Throws InvalidArgumentError if any field is out of its domain.
void validate(const LossConfig& cfg);

struct LossBreakdown {
  double center_term = 0.0;
  double iou_term = 0.0;
  double angle_term = 0.0;
  double total = 0.0;
};

double smooth_l1(double x, double delta = 1.0);

/// Angle-correction weight exp(4 lambda - lambda (r + 1/r)^2) for target
/// aspect ratio r. Equals 1 for squares and vanishes quickly as r grows.
double ga_weight(const OrientedBox& target, double lambda);

/// beta * ga_weight * sin^2(2 dtheta), dtheta = theta_p - theta_t.
double ga_loss(const OrientedBox& pred, const OrientedBox& target,
               const LossConfig& cfg);

/// d ga_loss / d theta_p = 2 beta * ga_weight * sin(4 dtheta).
double ga_grad_theta(const OrientedBox& pred, const OrientedBox& target,
                     const LossConfig& cfg);

double iou_loss(const OrientedBox& pred, const OrientedBox& target,
                const LossConfig& cfg);

/// Smooth L1 on the raw center differences + iou_loss + (mk_ga only) ga_loss.
LossBreakdown reg_loss(const OrientedBox& pred, const OrientedBox& target,
                       const LossConfig& cfg);

using LossFn = std::function<double(const OrientedBox&, const OrientedBox&,
                                    const LossConfig&)>;

/// reg_loss(...).total as a LossFn.
double reg_loss_total(const OrientedBox& pred, const OrientedBox& target,
                      const LossConfig& cfg);

/// Gradient layout (cx, cy, w, h, theta).
using BoxGradient = std::array<double, 5>;

/// Central differences of `loss` with respect to each prediction field.
/// Extent probes use min(step, w/2) so they stay positive. Throws
/// NumericalFailureError if any probe is non-finite.
BoxGradient numeric_grad(const LossFn& loss, const OrientedBox& pred,
                         const OrientedBox& target, const LossConfig& cfg,
                         double step);

}  // namespace obbloss
