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

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "obbloss/errors.hpp"
#include "obbloss/geometry.hpp"
#include "obbloss/losses.hpp"

namespace obbloss {

struct FitSpec {
  OrientedBox target;
  OrientedBox init;
  LossConfig loss_cfg;
  int max_steps = 2000;
  double learning_rate = 0.05;
  double momentum = 0.9;
  double stop_iou = 0.99;
  std::uint64_t seed = 0;
};

/// Throws InvalidArgumentError / InvalidBoxError for an unusable spec.
void validate(const FitSpec& spec);

struct FitStep {
  int step = 0;
  OrientedBox box;
  double loss = 0.0;
  double skew_iou = 0.0;
  /// d loss / d theta at `box`; zero for the final recorded step if the
  /// fit stopped before evaluating it.
  double theta_grad = 0.0;
  /// Backtracking halvings applied to reach this step.
  int halvings = 0;
  /// True when all halvings were exhausted and the step was taken anyway.
  bool forced = false;
};

struct FitTrace {
  std::vector<FitStep> steps;
  bool converged = false;
  double final_iou = 0.0;
  /// Radians. Folded into [0, pi/4] for square targets (symmetry pi/2) and
  /// into [0, pi/2] otherwise (symmetry pi), measured between long axes.
  double final_angle_residual = 0.0;
};

/// Raised when the objective stops being finite. Carries the steps recorded
/// up to that point.
class FitDivergedError : public Error {
 public:
  FitDivergedError(const std::string& what, FitTrace partial)
      : Error(what), partial_(std::move(partial)) {}
  const FitTrace& partial_trace() const { return partial_; }

 private:
  FitTrace partial_;
};

/// Angle between two boxes modulo the target's rotational symmetry.
double angle_residual(const OrientedBox& pred, const OrientedBox& target);

/// Gradient descent with momentum on (cx, cy, log w, log h, theta) against
/// reg_loss. A step that raises the loss is halved up to ten times, then
/// taken regardless. Stops once the exact IoU reaches stop_iou.
FitTrace fit(const FitSpec& spec);

/// Random init near `target`: center offsets within +-0.5, extents within
/// +-30%, angle within +-0.5 rad, all multiplied by `scale`.
OrientedBox perturbed_init(const OrientedBox& target, std::uint64_t seed,
                           double scale = 1.0);

enum class Scenario { random, boundary, square };

std::string_view to_string(Scenario s);
Scenario parse_scenario(std::string_view name);

struct BatchOptions {
  int max_steps = 2000;
  double learning_rate = 0.05;
  double momentum = 0.9;
  double stop_iou = 0.99;
  /// Multiplies every init perturbation; 0 makes init equal the target.
  double perturbation = 1.0;
  /// Worker threads; 0 picks hardware concurrency.
  unsigned threads = 0;
};

/// Draws the target/init pair for one fit from `seed`.
FitSpec make_scenario_spec(Scenario scenario, const LossConfig& cfg,
                           std::uint64_t seed,
                           const BatchOptions& options = {});

struct FitOutcome {
  std::uint64_t seed = 0;
  bool converged = false;
  bool diverged = false;
  int steps_used = 0;
  double initial_iou = 0.0;
  double final_iou = 0.0;
  double initial_loss = 0.0;
  double final_loss = 0.0;
  double angle_residual = 0.0;
  double max_abs_theta_grad = 0.0;
};

struct BatchSummary {
  Scenario scenario = Scenario::random;
  std::size_t n = 0;
  std::size_t converged = 0;
  std::size_t diverged = 0;
  double convergence_rate = 0.0;
  double mean_final_iou = 0.0;
  double mean_angle_residual = 0.0;
  double max_abs_theta_grad = 0.0;
  std::vector<FitOutcome> fits;

  /// Fraction of fits whose final IoU is at least `threshold`.
  double fraction_at_least(double threshold) const;
};

/// Runs `n` independent fits. Per-fit seeds derive from `seed` and the fit
/// index, so the result does not depend on thread count or scheduling.
BatchSummary batch_fit(std::size_t n, Scenario scenario, const LossConfig& cfg,
                       std::uint64_t seed, const BatchOptions& options = {});

/// Columns: step,cx,cy,w,h,theta,loss,skew_iou (theta in degrees).
void write_trace_csv(std::ostream& out, const FitTrace& trace);
/// One JSON object per step with the same keys as the CSV header.
void write_trace_jsonl(std::ostream& out, const FitTrace& trace);

}  // namespace obbloss
