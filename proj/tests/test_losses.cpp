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

#include <cmath>
#include <random>

#include <doctest.h>

#include "obbloss/errors.hpp"
#include "obbloss/losses.hpp"
#include "test_support.hpp"

using namespace obbloss;
using obbloss::testing::random_box;
using obbloss::testing::swapped;

namespace {

LossConfig with_variant(LossVariant v) {
  LossConfig cfg;
  cfg.variant = v;
  return cfg;
}

// Plain central difference in theta_p, separate from numeric_grad.
double fd_theta(const OrientedBox& p, const OrientedBox& t, const LossConfig& cfg,
                double h) {
  OrientedBox up = p, down = p;
  up.theta += h;
  down.theta -= h;
  return (ga_loss(up, t, cfg) - ga_loss(down, t, cfg)) / (up.theta - down.theta);
}

}  // namespace

TEST_CASE("smooth_l1 examples and C1 continuity") {
  CHECK(smooth_l1(0.0, 1.0) == 0.0);
  CHECK(smooth_l1(0.5, 1.0) == 0.125);
  CHECK(smooth_l1(3.0, 1.0) == 2.5);
  CHECK(smooth_l1(-3.0, 1.0) == 2.5);
  CHECK_THROWS_AS(smooth_l1(1.0, 0.0), InvalidArgumentError);
  CHECK_THROWS_AS(smooth_l1(1.0, -1.0), InvalidArgumentError);
  for (double delta : {0.1, 1.0, 2.5}) {
    const double e = 1e-9;
    CHECK(smooth_l1(delta - e, delta) == doctest::Approx(smooth_l1(delta + e, delta)));
    const double left = (smooth_l1(delta, delta) - smooth_l1(delta - e, delta)) / e;
    const double right = (smooth_l1(delta + e, delta) - smooth_l1(delta, delta)) / e;
    CHECK(left == doctest::Approx(right).epsilon(1e-5));
  }
}

TEST_CASE("variant names round-trip") {
  for (LossVariant v : kAllVariants) CHECK(parse_variant(to_string(v)) == v);
  CHECK_THROWS_AS(parse_variant("gwd"), InvalidArgumentError);
}

TEST_CASE("config validation") {
  LossConfig cfg;
  CHECK_NOTHROW(validate(cfg));
  cfg.alpha = 4.0;
  CHECK_THROWS_AS(validate(cfg), InvalidArgumentError);
  cfg = {};
  cfg.beta = -0.1;
  CHECK_THROWS_AS(validate(cfg), InvalidArgumentError);
  cfg = {};
  cfg.lambda = 0.0;
  CHECK_THROWS_AS(validate(cfg), InvalidArgumentError);
  cfg = {};
  cfg.sl1_delta = 0.0;
  CHECK_THROWS_AS(validate(cfg), InvalidArgumentError);
  cfg = {};
  cfg.variant = static_cast<LossVariant>(42);
  CHECK_THROWS_AS(validate(cfg), InvalidArgumentError);
  const OrientedBox b{0, 0, 1, 1, 0};
  CHECK_THROWS_AS(iou_loss(b, b, cfg), InvalidArgumentError);
}

TEST_CASE("ga_loss examples") {
  const LossConfig cfg;  // beta 0.3, lambda 3
  const OrientedBox square{0, 0, 2, 2, 0};
  CHECK(ga_loss({0, 0, 2, 2, kPi / 4}, square, cfg) == doctest::Approx(0.3).epsilon(1e-15));
  CHECK(ga_loss({1, 2, 5, 1, 0.7}, {0, 0, 3, 1, 0.7}, cfg) == 0.0);
  CHECK(ga_loss({0, 0, 2, 2, kPi / 2}, square, cfg) < 1e-30);
  const double expected = 0.3 * std::exp(-6.75);
  CHECK(expected == doctest::Approx(3.52e-4).epsilon(2e-3));
  CHECK(ga_loss({0, 0, 2, 1, kPi / 4}, {0, 0, 2, 1, 0}, cfg) ==
        doctest::Approx(expected).epsilon(1e-14));
}

TEST_CASE("ga_loss properties") {
  const LossConfig cfg;
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> angle(-kPi, kPi);
  for (int i = 0; i < 1000; ++i) {
    const OrientedBox t = random_box(rng);
    OrientedBox p = random_box(rng);
    const double g = ga_loss(p, t, cfg);
    CHECK(g >= 0.0);
    CHECK(g <= cfg.beta);
    // Only the target's shape matters.
    OrientedBox p2 = p;
    p2.w *= 3.0;
    p2.cx += 1.0;
    CHECK(ga_loss(p2, t, cfg) == g);
    // Period pi/2 in the angle offset.
    OrientedBox p3 = p;
    p3.theta += kPi / 2;
    CHECK(std::abs(ga_loss(p3, t, cfg) - g) <= 1e-12);
  }
  // Decays monotonically in the target aspect ratio.
  double prev = 1.0;
  for (double ar = 1.0; ar <= 6.0; ar += 0.25) {
    const double g = ga_loss({0, 0, 1, 1, 0.3}, {0, 0, ar, 1, 0}, cfg);
    CHECK(g < prev);
    prev = g;
    if (ar >= 4.0) CHECK(g < 1e-12 * cfg.beta);
  }
}

TEST_CASE("ga_grad_theta examples") {
  const LossConfig cfg;
  const OrientedBox square{0, 0, 2, 2, 0};
  CHECK(ga_grad_theta({0, 0, 2, 2, kPi / 8}, square, cfg) == doctest::Approx(0.6).epsilon(1e-15));
  CHECK(fd_theta({0, 0, 2, 2, kPi / 8}, square, cfg, 1e-6) == doctest::Approx(0.6).epsilon(1e-8));
  CHECK(ga_grad_theta({0, 0, 3, 2, 0.4}, {0, 0, 3, 1, 0.4}, cfg) == 0.0);
  for (double d = -kPi; d <= kPi; d += 0.05) {
    CHECK(std::abs(ga_grad_theta({0, 0, 4, 1, d}, {0, 0, 4, 1, 0}, cfg)) < 1e-12);
  }
}

TEST_CASE("ga_grad_theta matches finite differences") {
  LossConfig cfg;
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> ar(1.0, 3.0);
  for (int i = 0; i < 2000; ++i) {
    OrientedBox t = random_box(rng);
    t.h = t.w / ar(rng);
    const OrientedBox p = random_box(rng);
    const double analytic = ga_grad_theta(p, t, cfg);
    const double amplitude = 2.0 * cfg.beta * ga_weight(t, cfg.lambda);
    const double scale = std::max(std::abs(analytic), amplitude);
    CHECK(std::abs(fd_theta(p, t, cfg, 1e-6) - analytic) <= 1e-5 * scale);
    const BoxGradient g =
        numeric_grad([](auto& a, auto& b, auto& c) { return ga_loss(a, b, c); }, p, t, cfg, 1e-6);
    CHECK(std::abs(g[4] - analytic) <= 1e-5 * scale);
  }
}

TEST_CASE("iou_loss examples") {
  const OrientedBox b{1, -1, 3, 2, 0.4};
  CHECK(iou_loss(b, b, with_variant(LossVariant::mk)) == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(std::abs(iou_loss(b, b, with_variant(LossVariant::mk))) < 1e-14);
  CHECK(iou_loss(b, b, with_variant(LossVariant::kf_linear)) == doctest::Approx(2.0 / 3).epsilon(1e-13));
  CHECK(iou_loss(b, b, with_variant(LossVariant::kf_neglog)) == doctest::Approx(std::log(3.0)).epsilon(1e-13));
  CHECK(iou_loss(b, b, with_variant(LossVariant::kf_exp)) ==
        doctest::Approx(std::exp(2.0 / 3) - 1).epsilon(1e-13));
}

TEST_CASE("every iou_loss variant is minimized at coincidence") {
  std::mt19937_64 rng(14);
  const OrientedBox t{0, 0, 3, 1.2, 0.3};
  for (LossVariant v : kAllVariants) {
    const LossConfig cfg = with_variant(v);
    const double floor_value = iou_loss(t, t, cfg);
    CHECK(iou_loss(swapped(t), t, cfg) == doctest::Approx(floor_value).epsilon(1e-12));
    for (int i = 0; i < 300; ++i) {
      CHECK(iou_loss(random_box(rng), t, cfg) >= floor_value - 1e-12);
    }
  }
}

TEST_CASE("reg_loss examples") {
  const OrientedBox b{0.5, -0.5, 3, 1, 0.2};
  const LossBreakdown zero = reg_loss(b, b, with_variant(LossVariant::mk_ga));
  CHECK(zero.center_term == 0.0);
  CHECK(std::abs(zero.iou_term) < 1e-14);
  CHECK(zero.angle_term == 0.0);
  CHECK(std::abs(zero.total) < 1e-14);

  const LossBreakdown shifted =
      reg_loss({1, 0, 2, 2, 0}, {0, 0, 2, 2, 0}, with_variant(LossVariant::mk));
  CHECK(shifted.center_term == 0.5);
  CHECK(std::abs(shifted.iou_term) < 1e-14);
  CHECK(shifted.angle_term == 0.0);
  CHECK(shifted.total == doctest::Approx(0.5).epsilon(1e-14));

  const LossBreakdown rotated =
      reg_loss({0, 0, 2, 2, kPi / 4}, {0, 0, 2, 2, 0}, with_variant(LossVariant::mk_ga));
  CHECK(rotated.center_term == 0.0);
  CHECK(std::abs(rotated.iou_term) < 1e-14);
  CHECK(rotated.angle_term == doctest::Approx(0.3).epsilon(1e-15));
  CHECK(rotated.total == doctest::Approx(0.3).epsilon(1e-14));
}

TEST_CASE("reg_loss breakdown sums and is non-negative") {
  std::mt19937_64 rng(15);
  for (LossVariant v : kAllVariants) {
    const LossConfig cfg = with_variant(v);
    for (int i = 0; i < 300; ++i) {
      const OrientedBox p = random_box(rng);
      const OrientedBox t = random_box(rng);
      const LossBreakdown l = reg_loss(p, t, cfg);
      CHECK(l.total == l.center_term + l.iou_term + l.angle_term);
      CHECK(l.total >= 0.0);
      if (v != LossVariant::mk_ga) CHECK(l.angle_term == 0.0);
    }
  }
}

TEST_CASE("losses are continuous across the canonical angle boundary") {
  std::mt19937_64 rng(16);
  const double eps = 1e-10;
  for (LossVariant v : kAllVariants) {
    const LossConfig cfg = with_variant(v);
    for (int i = 0; i < 200; ++i) {
      const OrientedBox t = random_box(rng);
      OrientedBox below = random_box(rng);
      below.theta = kPi / 2 - eps;
      OrientedBox above = below;
      above.theta = -kPi / 2 + eps;
      const double at_below = reg_loss_total(below, t, cfg);
      CHECK(std::abs(at_below - reg_loss_total(above, t, cfg)) <= 1e-9);
      CHECK(std::abs(at_below - reg_loss_total(swapped(below), t, cfg)) <= 1e-9);
    }
  }
}

TEST_CASE("numeric_grad") {
  const LossConfig cfg;
  const OrientedBox t{0.3, -0.2, 3, 1.5, 0.6};
  const BoxGradient g = numeric_grad(reg_loss_total, t, t, cfg, 1e-5);
  for (double gi : g) CHECK(std::abs(gi) <= 1e-6);

  // Square pair under mk: theta is not identifiable.
  const OrientedBox sq{0, 0, 2, 2, 0};
  const BoxGradient gs =
      numeric_grad(reg_loss_total, {0, 0, 2, 2, 0.4}, sq, with_variant(LossVariant::mk), 1e-6);
  CHECK(std::abs(gs[4]) < 1e-9);

  // Tiny extents: probe is clamped instead of going negative.
  CHECK_NOTHROW(numeric_grad(reg_loss_total, {0, 0, 1e-7, 1, 0}, t, cfg, 1e-3));

  CHECK_THROWS_AS(numeric_grad(reg_loss_total, t, t, cfg, 0.0), InvalidArgumentError);
  const LossFn bad = [](const OrientedBox&, const OrientedBox&, const LossConfig&) {
    return std::nan("");
  };
  CHECK_THROWS_AS(numeric_grad(bad, t, t, cfg, 1e-6), NumericalFailureError);
}
