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
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "obbloss/geometry.hpp"
#include "obbloss/losses.hpp"

namespace obbloss {

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

/// `steps` evenly spaced values from lo to hi inclusive.
std::vector<double> linspace(Interval range, std::size_t steps);

/// One-parameter family of box pairs with the exact IoU and each
/// approximation evaluated per row. Column 0 is the control variable, then
/// skew_iou, kfiou3 (3 * KFIoU) and one mkiou_a<alpha> column per alpha.
struct SweepTable {
  std::string control;
  std::string control_unit;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
  OrientedBox base;
  std::vector<double> alphas;
  std::uint64_t seed = 0;

  /// Throws InvalidArgumentError for an unknown name.
  std::size_t column_index(std::string_view name) const;
  std::vector<double> column(std::string_view name) const;
};

/// Column name used for an MKIoU column, e.g. "mkiou_a3" or "mkiou_a2.5".
std::string mkiou_column_name(double alpha);

/// Prediction = base with both extents multiplied by each scale (same center
/// and angle). Control column "scale".
SweepTable sweep_wh(const OrientedBox& base, Interval scale_range,
                    std::size_t steps, std::span<const double> alphas);

/// Prediction = base rotated by each offset (radians, within [-pi/2, pi/2]).
/// Control column "dtheta_deg" holds the offset in degrees.
SweepTable sweep_angle(const OrientedBox& base, Interval theta_range,
                       std::size_t steps, std::span<const double> alphas);

enum class SurfaceLoss { mk, ga };

std::string_view to_string(SurfaceLoss loss);
SurfaceLoss parse_surface_loss(std::string_view name);

struct SurfaceCell {
  double aspect_ratio = 1.0;
  double dtheta_deg = 0.0;
  double loss = 0.0;
};

/// Row-major over aspect ratio, then angle offset.
struct SurfaceTable {
  SurfaceLoss loss = SurfaceLoss::mk;
  std::size_t ar_steps = 0;
  std::size_t dtheta_steps = 0;
  std::vector<SurfaceCell> cells;

  const SurfaceCell& at(std::size_t ar_index, std::size_t dtheta_index) const {
    return cells[ar_index * dtheta_steps + dtheta_index];
  }
};

/// Target has unit area with extents (sqrt(ar), 1/sqrt(ar)) at angle 0; the
/// prediction is the target rotated by each offset (radians). The mk surface
/// is 1 - MKIoU at cfg.alpha; the ga surface is the angle term alone.
SurfaceTable surface(SurfaceLoss loss, Interval ar_range, Interval dtheta_range,
                     std::size_t ar_steps, std::size_t dtheta_steps,
                     const LossConfig& cfg);

/// Mean absolute deviation between `column` and the skew_iou column.
double consistency_metric(const SweepTable& table, std::string_view column);

}  // namespace obbloss
