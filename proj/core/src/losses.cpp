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

#include "obbloss/losses.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "obbloss/errors.hpp"

namespace obbloss {

std::string_view to_string(LossVariant v) {
  switch (v) {
    case LossVariant::kf_linear: return "kf_linear";
    case LossVariant::kf_exp: return "kf_exp";
    case LossVariant::kf_neglog: return "kf_neglog";
    case LossVariant::mk: return "mk";
    case LossVariant::mk_ga: return "mk_ga";
  }
  throw InvalidArgumentError("unknown loss variant");
}

LossVariant parse_variant(std::string_view name) {
  for (LossVariant v : kAllVariants) {
    if (to_string(v) == name) return v;
  }
  throw InvalidArgumentError("unknown loss variant '" + std::string(name) +
                             "' (expected kf_linear, kf_exp, kf_neglog, mk "
                             "or mk_ga)");
}

void validate(const LossConfig& cfg) {
  validate(cfg.modulation());
  if (!std::isfinite(cfg.beta) || cfg.beta < 0.0) {
    throw InvalidArgumentError("beta must be >= 0");
  }
  if (!std::isfinite(cfg.lambda) || !(cfg.lambda > 0.0)) {
    throw InvalidArgumentError("lambda must be > 0");
  }
  if (!std::isfinite(cfg.sl1_delta) || !(cfg.sl1_delta > 0.0)) {
    throw InvalidArgumentError("smooth L1 delta must be > 0");
  }
  (void)to_string(cfg.variant);
}

double smooth_l1(double x, double delta) {
  if (!(delta > 0.0)) throw InvalidArgumentError("smooth L1 delta must be > 0");
  const double ax = std::abs(x);
  return ax < delta ? 0.5 * x * x / delta : ax - 0.5 * delta;
}

double ga_weight(const OrientedBox& target, double lambda) {
  validate(target);
  const double shape = target.w / target.h + target.h / target.w;
  return std::exp(4.0 * lambda - lambda * shape * shape);
}

double ga_loss(const OrientedBox& pred, const OrientedBox& target,
               const LossConfig& cfg) {
  validate(pred);
  // sin^2(2x) has period pi/2, so canonicalizing either angle (a shift by a
  // multiple of pi/2) leaves the value unchanged; raw angles are used as-is.
  const double dtheta = pred.theta - target.theta;
  const double s = std::sin(2.0 * dtheta);
  return cfg.beta * ga_weight(target, cfg.lambda) * s * s;
}

double ga_grad_theta(const OrientedBox& pred, const OrientedBox& target,
                     const LossConfig& cfg) {
  validate(pred);
  const double dtheta = pred.theta - target.theta;
  return 2.0 * cfg.beta * ga_weight(target, cfg.lambda) *
         std::sin(4.0 * dtheta);
}

double iou_loss(const OrientedBox& pred, const OrientedBox& target,
                const LossConfig& cfg) {
  switch (cfg.variant) {
    case LossVariant::kf_linear: return 1.0 - kfiou(pred, target);
    case LossVariant::kf_exp: return std::exp(1.0 - kfiou(pred, target)) - 1.0;
    case LossVariant::kf_neglog: return -std::log(kfiou(pred, target));
    case LossVariant::mk:
    case LossVariant::mk_ga: return 1.0 - mkiou(pred, target, cfg.modulation());
  }
  throw InvalidArgumentError("unknown loss variant");
}

LossBreakdown reg_loss(const OrientedBox& pred, const OrientedBox& target,
                       const LossConfig& cfg) {
  validate(cfg);
  validate(pred);
  validate(target);
  LossBreakdown out;
  out.center_term = smooth_l1(pred.cx - target.cx, cfg.sl1_delta) +
                    smooth_l1(pred.cy - target.cy, cfg.sl1_delta);
  out.iou_term = iou_loss(pred, target, cfg);
  if (cfg.variant == LossVariant::mk_ga) {
    out.angle_term = ga_loss(pred, target, cfg);
  }
  out.total = out.center_term + out.iou_term + out.angle_term;
  return out;
}

double reg_loss_total(const OrientedBox& pred, const OrientedBox& target,
                      const LossConfig& cfg) {
  return reg_loss(pred, target, cfg).total;
}

BoxGradient numeric_grad(const LossFn& loss, const OrientedBox& pred,
                         const OrientedBox& target, const LossConfig& cfg,
                         double step) {
  if (!(step > 0.0) || !std::isfinite(step)) {
    throw InvalidArgumentError("finite-difference step must be > 0");
  }
  validate(pred);
  const auto probe = [&](const OrientedBox& box) {
    const double value = loss(box, target, cfg);
    if (!std::isfinite(value)) {
      throw NumericalFailureError("loss is not finite at a probe point");
    }
    return value;
  };
  (void)probe(pred);

  double OrientedBox::*const fields[5] = {&OrientedBox::cx, &OrientedBox::cy,
                                          &OrientedBox::w, &OrientedBox::h,
                                          &OrientedBox::theta};
  BoxGradient grad{};
  for (std::size_t i = 0; i < 5; ++i) {
    double h = step;
    if (i == 2 || i == 3) h = std::min(step, 0.5 * (pred.*fields[i]));
    OrientedBox up = pred;
    OrientedBox down = pred;
    up.*fields[i] += h;
    down.*fields[i] -= h;
    // Divide by the representable spacing, not 2h.
    grad[i] = (probe(up) - probe(down)) / (up.*fields[i] - down.*fields[i]);
  }
  return grad;
}

}  // namespace obbloss
