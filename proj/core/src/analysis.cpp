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

#include "obbloss/analysis.hpp"

#include <cmath>
#include <cstdio>
#include <string>

#include "obbloss/errors.hpp"
#include "obbloss/gaussian.hpp"

namespace obbloss {
namespace {

constexpr double kDegPerRad = 180.0 / kPi;

void check_steps(std::size_t steps) {
  if (steps < 2) throw InvalidArgumentError("a sweep needs at least 2 steps");
}

void check_interval(Interval range, const char* what) {
  if (!std::isfinite(range.lo) || !std::isfinite(range.hi) ||
      range.hi < range.lo) {
    throw InvalidArgumentError(std::string(what) +
                               " must be a finite interval with lo <= hi");
  }
}

SweepTable make_table(const OrientedBox& base, std::string control,
                      std::string unit, std::span<const double> alphas) {
  SweepTable table;
  table.control = std::move(control);
  table.control_unit = std::move(unit);
  table.base = base;
  table.alphas.assign(alphas.begin(), alphas.end());
  table.columns = {table.control, "skew_iou", "kfiou3"};
  for (double alpha : alphas) {
    validate(ModulationParams{alpha});
    table.columns.push_back(mkiou_column_name(alpha));
  }
  return table;
}

std::vector<double> evaluate_row(double control, const OrientedBox& pred,
                                 const OrientedBox& target,
                                 std::span<const double> alphas) {
  std::vector<double> row{control, skew_iou(pred, target),
                          3.0 * kfiou(pred, target)};
  for (double alpha : alphas) row.push_back(mkiou(pred, target, {alpha}));
  return row;
}

}  // namespace

std::vector<double> linspace(Interval range, std::size_t steps) {
  check_steps(steps);
  std::vector<double> out(steps);
  const double n = static_cast<double>(steps - 1);
  for (std::size_t i = 0; i < steps; ++i) {
    out[i] = range.lo + (range.hi - range.lo) * (static_cast<double>(i) / n);
  }
  out.back() = range.hi;
  return out;
}

std::size_t SweepTable::column_index(std::string_view name) const {
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (columns[i] == name) return i;
  }
  throw InvalidArgumentError("sweep table has no column '" +
                             std::string(name) + "'");
}

std::vector<double> SweepTable::column(std::string_view name) const {
  const std::size_t idx = column_index(name);
  std::vector<double> out;
  out.reserve(rows.size());
  for (const auto& row : rows) out.push_back(row[idx]);
  return out;
}

std::string mkiou_column_name(double alpha) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "mkiou_a%g", alpha);
  return buf;
}

SweepTable sweep_wh(const OrientedBox& base, Interval scale_range,
                    std::size_t steps, std::span<const double> alphas) {
  validate(base);
  check_steps(steps);
  check_interval(scale_range, "scale range");
  if (!(scale_range.lo > 0.0)) {
    throw InvalidArgumentError("scale range must be strictly positive");
  }
  SweepTable table = make_table(base, "scale", "ratio", alphas);
  for (double scale : linspace(scale_range, steps)) {
    OrientedBox pred = base;
    pred.w *= scale;
    pred.h *= scale;
    table.rows.push_back(evaluate_row(scale, pred, base, alphas));
  }
  return table;
}

SweepTable sweep_angle(const OrientedBox& base, Interval theta_range,
                       std::size_t steps, std::span<const double> alphas) {
  validate(base);
  check_steps(steps);
  check_interval(theta_range, "angle range");
  constexpr double kSlack = 1e-12;
  if (theta_range.lo < -kPi / 2.0 - kSlack ||
      theta_range.hi > kPi / 2.0 + kSlack) {
    throw InvalidArgumentError("angle range must lie within [-90, 90] degrees");
  }
  SweepTable table = make_table(base, "dtheta_deg", "degree", alphas);
  for (double dtheta : linspace(theta_range, steps)) {
    OrientedBox pred = base;
    pred.theta += dtheta;
    table.rows.push_back(evaluate_row(dtheta * kDegPerRad, pred, base, alphas));
  }
  return table;
}

std::string_view to_string(SurfaceLoss loss) {
  switch (loss) {
    case SurfaceLoss::mk: return "mk";
    case SurfaceLoss::ga: return "ga";
  }
  throw InvalidArgumentError("unknown surface loss");
}

SurfaceLoss parse_surface_loss(std::string_view name) {
  if (name == "mk") return SurfaceLoss::mk;
  if (name == "ga") return SurfaceLoss::ga;
  throw InvalidArgumentError("unknown surface loss '" + std::string(name) +
                             "' (expected mk or ga)");
}

SurfaceTable surface(SurfaceLoss loss, Interval ar_range, Interval dtheta_range,
                     std::size_t ar_steps, std::size_t dtheta_steps,
                     const LossConfig& cfg) {
  validate(cfg);
  check_interval(ar_range, "aspect-ratio range");
  check_interval(dtheta_range, "angle range");
  if (ar_range.lo < 1.0) {
    throw InvalidArgumentError("aspect ratios must be >= 1");
  }
  SurfaceTable table;
  table.loss = loss;
  table.ar_steps = ar_steps;
  table.dtheta_steps = dtheta_steps;
  const std::vector<double> ratios = linspace(ar_range, ar_steps);
  const std::vector<double> offsets = linspace(dtheta_range, dtheta_steps);
  table.cells.reserve(ratios.size() * offsets.size());
  for (double ar : ratios) {
    const double root = std::sqrt(ar);
    const OrientedBox target{0.0, 0.0, root, 1.0 / root, 0.0};
    for (double dtheta : offsets) {
      OrientedBox pred = target;
      pred.theta = dtheta;
      const double value = loss == SurfaceLoss::mk
                               ? 1.0 - mkiou(pred, target, cfg.modulation())
                               : ga_loss(pred, target, cfg);
      table.cells.push_back({ar, dtheta * kDegPerRad, value});
    }
  }
  return table;
}

double consistency_metric(const SweepTable& table, std::string_view column) {
  const std::size_t idx = table.column_index(column);
  const std::size_t exact = table.column_index("skew_iou");
  if (table.rows.empty()) return 0.0;
  double total = 0.0;
  for (const auto& row : table.rows) total += std::abs(row[idx] - row[exact]);
  return total / static_cast<double>(table.rows.size());
}

}  // namespace obbloss
