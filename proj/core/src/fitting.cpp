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

#include "obbloss/fitting.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <string>
#include <thread>

#include "obbloss/rng.hpp"
#include "obbloss/table_io.hpp"

namespace obbloss {
namespace {

constexpr int kMaxHalvings = 10;
constexpr double kGradStep = 1e-6;

// Optimizer coordinates: (cx, cy, log w, log h, theta).
using Params = std::array<double, 5>;

Params to_params(const OrientedBox& box) {
  return {box.cx, box.cy, std::log(box.w), std::log(box.h), box.theta};
}

OrientedBox to_box(const Params& x) {
  return {x[0], x[1], std::exp(x[2]), std::exp(x[3]), x[4]};
}

bool is_square(const OrientedBox& box) {
  return std::abs(box.w - box.h) <= 1e-9 * std::max(box.w, box.h);
}

// Folds `angle` into [0, period / 2] modulo `period`.
double fold(double angle, double period) {
  double r = std::fmod(angle, period);
  if (r < 0.0) r += period;
  return std::min(r, period - r);
}

class Objective {
 public:
  explicit Objective(const FitSpec& spec) : spec_(spec) {}

  // Boxes the loss cannot evaluate (extents under- or overflowing exp())
  // count as infinitely bad so backtracking steps away from them.
  double value(const Params& x) const {
    try {
      return reg_loss_total(to_box(x), spec_.target, spec_.loss_cfg);
    } catch (const InvalidBoxError&) {
    } catch (const DegenerateCovarianceError&) {
    }
    return std::numeric_limits<double>::infinity();
  }

  // Chain rule through the log extents: dL/dlog w = w dL/dw.
  Params gradient(const Params& x) const {
    const OrientedBox box = to_box(x);
    BoxGradient g = numeric_grad(reg_loss_total, box, spec_.target,
                                 spec_.loss_cfg, kGradStep);
    return {g[0], g[1], g[2] * box.w, g[3] * box.h, g[4]};
  }

 private:
  const FitSpec& spec_;
};

FitStep record(int step, const Params& x, double loss, const FitSpec& spec) {
  FitStep s;
  s.step = step;
  s.box = to_box(x);
  s.loss = loss;
  s.skew_iou = skew_iou(s.box, spec.target);
  return s;
}

OrientedBox perturb(const OrientedBox& t, SplitMix64& rng, double scale) {
  OrientedBox p;
  p.cx = t.cx + scale * rng.uniform(-0.5, 0.5);
  p.cy = t.cy + scale * rng.uniform(-0.5, 0.5);
  p.w = t.w * (1.0 + scale * rng.uniform(-0.3, 0.3));
  p.h = t.h * (1.0 + scale * rng.uniform(-0.3, 0.3));
  p.theta = t.theta + scale * rng.uniform(-0.5, 0.5);
  return p;
}

void finish(FitTrace& trace, const FitSpec& spec) {
  const FitStep& last = trace.steps.back();
  trace.final_iou = last.skew_iou;
  trace.final_angle_residual = angle_residual(last.box, spec.target);
}

}  // namespace

void validate(const FitSpec& spec) {
  validate(spec.target);
  validate(spec.init);
  validate(spec.loss_cfg);
  if (spec.max_steps < 1) throw InvalidArgumentError("max_steps must be >= 1");
  if (!(spec.learning_rate > 0.0) || !std::isfinite(spec.learning_rate)) {
    throw InvalidArgumentError("learning rate must be > 0");
  }
  if (!(spec.momentum >= 0.0 && spec.momentum < 1.0)) {
    throw InvalidArgumentError("momentum must be in [0, 1)");
  }
  if (!(spec.stop_iou > 0.0 && spec.stop_iou <= 1.0)) {
    throw InvalidArgumentError("stop_iou must be in (0, 1]");
  }
}

double angle_residual(const OrientedBox& pred, const OrientedBox& target) {
  if (is_square(target)) return fold(pred.theta - target.theta, kPi / 2.0);
  const auto long_axis = [](const OrientedBox& b) {
    return b.w >= b.h ? b.theta : b.theta + kPi / 2.0;
  };
  return fold(long_axis(pred) - long_axis(target), kPi);
}

FitTrace fit(const FitSpec& spec) {
  validate(spec);
  const Objective objective(spec);
  FitTrace trace;

  const auto diverged = [&](const std::string& why) {
    if (!trace.steps.empty()) finish(trace, spec);
    return FitDivergedError("fit diverged: " + why, trace);
  };

  Params x = to_params(spec.init);
  Params velocity{};
  double loss = 0.0;
  try {
    loss = objective.value(x);
  } catch (const NumericalFailureError& e) {
    throw diverged(e.what());
  }
  if (!std::isfinite(loss)) throw diverged("initial loss is not finite");
  trace.steps.push_back(record(0, x, loss, spec));

  for (int step = 1; step <= spec.max_steps; ++step) {
    if (trace.steps.back().skew_iou >= spec.stop_iou) {
      trace.converged = true;
      break;
    }
    Params grad;
    try {
      grad = objective.gradient(x);
    } catch (const Error& e) {
      throw diverged(e.what());
    }
    trace.steps.back().theta_grad = grad[4];

    Params update;
    for (std::size_t i = 0; i < 5; ++i) {
      update[i] = spec.momentum * velocity[i] - spec.learning_rate * grad[i];
    }
    Params candidate{};
    double candidate_loss = 0.0;
    int halvings = 0;
    for (;; ++halvings) {
      for (std::size_t i = 0; i < 5; ++i) candidate[i] = x[i] + update[i];
      candidate_loss = objective.value(candidate);
      if (candidate_loss <= loss || halvings == kMaxHalvings) break;
      for (double& u : update) u *= 0.5;
    }
    if (!std::isfinite(candidate_loss)) {
      throw diverged("loss became non-finite at step " + std::to_string(step));
    }
    const bool forced = candidate_loss > loss;
    x = candidate;
    velocity = update;
    loss = candidate_loss;
    FitStep s = record(step, x, loss, spec);
    s.halvings = halvings;
    s.forced = forced;
    trace.steps.push_back(s);
  }
  if (!trace.converged && trace.steps.back().skew_iou >= spec.stop_iou) {
    trace.converged = true;
  }
  finish(trace, spec);
  return trace;
}

OrientedBox perturbed_init(const OrientedBox& target, std::uint64_t seed,
                           double scale) {
  validate(target);
  SplitMix64 rng(seed);
  return perturb(target, rng, scale);
}

std::string_view to_string(Scenario s) {
  switch (s) {
    case Scenario::random: return "random";
    case Scenario::boundary: return "boundary";
    case Scenario::square: return "square";
  }
  throw InvalidArgumentError("unknown scenario");
}

Scenario parse_scenario(std::string_view name) {
  if (name == "random") return Scenario::random;
  if (name == "boundary") return Scenario::boundary;
  if (name == "square") return Scenario::square;
  throw InvalidArgumentError("unknown scenario '" + std::string(name) +
                             "' (expected random, boundary or square)");
}

FitSpec make_scenario_spec(Scenario scenario, const LossConfig& cfg,
                           std::uint64_t seed, const BatchOptions& options) {
  SplitMix64 rng(seed);
  const double k = options.perturbation;

  FitSpec spec;
  spec.loss_cfg = cfg;
  spec.max_steps = options.max_steps;
  spec.learning_rate = options.learning_rate;
  spec.momentum = options.momentum;
  spec.stop_iou = options.stop_iou;
  spec.seed = seed;

  OrientedBox& t = spec.target;
  t.cx = rng.uniform(-2.0, 2.0);
  t.cy = rng.uniform(-2.0, 2.0);
  const double size = rng.uniform(1.0, 4.0);
  const double ar = scenario == Scenario::square ? 1.0 : rng.uniform(1.2, 6.0);
  t.w = size * std::sqrt(ar);
  t.h = size / std::sqrt(ar);
  t.theta = rng.uniform(-kPi / 2.0, kPi / 2.0);

  OrientedBox& p = spec.init;
  p = perturb(t, rng, k);

  if (scenario == Scenario::boundary) {
    // Target just inside +-pi/2; init just past the same edge, written in
    // its wrapped (far-side) form.
    const double side = rng.uniform() < 0.5 ? 1.0 : -1.0;
    const double inside = rng.uniform(0.0, 0.1);
    const double across = rng.uniform(0.02, 0.4);
    t.theta = side * (kPi / 2.0 - inside);
    p.theta = k == 0.0 ? t.theta
                       : wrap_half_turn(t.theta + side * k * (inside + across));
  }
  return spec;
}

double BatchSummary::fraction_at_least(double threshold) const {
  if (fits.empty()) return 0.0;
  const auto hits = std::count_if(fits.begin(), fits.end(), [&](const auto& f) {
    return !f.diverged && f.final_iou >= threshold;
  });
  return static_cast<double>(hits) / static_cast<double>(fits.size());
}

BatchSummary batch_fit(std::size_t n, Scenario scenario, const LossConfig& cfg,
                       std::uint64_t seed, const BatchOptions& options) {
  if (n == 0) throw InvalidArgumentError("batch_fit needs n >= 1");
  validate(cfg);

  BatchSummary summary;
  summary.scenario = scenario;
  summary.n = n;
  summary.fits.resize(n);

  const auto run_one = [&](std::size_t i) {
    FitOutcome& out = summary.fits[i];
    out.seed = derive_seed(seed, i);
    const FitSpec spec = make_scenario_spec(scenario, cfg, out.seed, options);
    out.initial_iou = skew_iou(spec.init, spec.target);
    const auto absorb = [&out](const FitTrace& trace) {
      out.initial_loss = trace.steps.front().loss;
      out.final_loss = trace.steps.back().loss;
      out.final_iou = trace.final_iou;
      out.angle_residual = trace.final_angle_residual;
      out.steps_used = trace.steps.back().step;
      out.converged = trace.converged;
      for (const FitStep& s : trace.steps) {
        out.max_abs_theta_grad =
            std::max(out.max_abs_theta_grad, std::abs(s.theta_grad));
      }
    };
    try {
      absorb(fit(spec));
    } catch (const FitDivergedError& e) {
      out.diverged = true;
      if (!e.partial_trace().steps.empty()) absorb(e.partial_trace());
      out.converged = false;
    }
  };

  unsigned threads = options.threads != 0 ? options.threads
                                          : std::thread::hardware_concurrency();
  threads = std::clamp<unsigned>(threads, 1, static_cast<unsigned>(n));
  if (threads == 1) {
    for (std::size_t i = 0; i < n; ++i) run_one(i);
  } else {
    std::vector<std::thread> workers;
    workers.reserve(threads);
    for (unsigned w = 0; w < threads; ++w) {
      workers.emplace_back([&, w] {
        for (std::size_t i = w; i < n; i += threads) run_one(i);
      });
    }
    for (auto& t : workers) t.join();
  }

  double iou_sum = 0.0;
  double residual_sum = 0.0;
  for (const FitOutcome& f : summary.fits) {
    summary.converged += f.converged ? 1 : 0;
    summary.diverged += f.diverged ? 1 : 0;
    iou_sum += f.final_iou;
    residual_sum += f.angle_residual;
    summary.max_abs_theta_grad =
        std::max(summary.max_abs_theta_grad, f.max_abs_theta_grad);
  }
  const double count = static_cast<double>(n);
  summary.convergence_rate = static_cast<double>(summary.converged) / count;
  summary.mean_final_iou = iou_sum / count;
  summary.mean_angle_residual = residual_sum / count;
  return summary;
}

void write_trace_csv(std::ostream& out, const FitTrace& trace) {
  CsvWriter csv(out);
  csv.header({"step", "cx", "cy", "w", "h", "theta", "loss", "skew_iou"});
  for (const FitStep& s : trace.steps) {
    csv.row({static_cast<double>(s.step), s.box.cx, s.box.cy, s.box.w, s.box.h,
             s.box.theta * 180.0 / kPi, s.loss, s.skew_iou});
  }
}

void write_trace_jsonl(std::ostream& out, const FitTrace& trace) {
  static const std::vector<std::string> keys{"step", "cx", "cy", "w",
                                             "h", "theta", "loss", "skew_iou"};
  for (const FitStep& s : trace.steps) {
    write_json_object_line(
        out, keys,
        {static_cast<double>(s.step), s.box.cx, s.box.cy, s.box.w, s.box.h,
         s.box.theta * 180.0 / kPi, s.loss, s.skew_iou});
  }
}

}  // namespace obbloss
