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

#include <algorithm>
#include <cmath>
#include <random>

#include <doctest.h>

#include "obbloss/errors.hpp"
#include "obbloss/geometry.hpp"
#include "test_support.hpp"

using namespace obbloss;
using obbloss::testing::random_box;
using obbloss::testing::swapped;

namespace {

const double kOctagonArea = 8.0 * (std::sqrt(2.0) - 1.0);

// True when `expected` equals `got` up to a cyclic shift of the vertex list.
bool same_cycle(const std::vector<Point>& got, const std::vector<Point>& expected,
                double tol) {
  if (got.size() != expected.size()) return false;
  const std::size_t n = got.size();
  for (std::size_t shift = 0; shift < n; ++shift) {
    bool ok = true;
    for (std::size_t i = 0; i < n && ok; ++i) {
      const Point a = got[(i + shift) % n];
      ok = std::abs(a.x - expected[i].x) <= tol && std::abs(a.y - expected[i].y) <= tol;
    }
    if (ok) return true;
  }
  return false;
}

// Independent area oracle: midpoint rasterization of the set
// {|x| <= 1, |y| <= 1, |x + y| <= sqrt2, |x - y| <= sqrt2}, i.e. the axis
// square intersected with its 45-degree rotation.
double rasterized_octagon_area(int n) {
  const double r = std::sqrt(2.0);
  const double cell = 2.0 / n;
  long hits = 0;
  for (int i = 0; i < n; ++i) {
    const double x = -1.0 + (i + 0.5) * cell;
    for (int j = 0; j < n; ++j) {
      const double y = -1.0 + (j + 0.5) * cell;
      hits += (std::abs(x + y) <= r && std::abs(x - y) <= r) ? 1 : 0;
    }
  }
  return static_cast<double>(hits) * cell * cell;
}

}  // namespace

TEST_CASE("canonicalize examples") {
  const OrientedBox a = canonicalize({0, 0, 2, 4, 0});
  CHECK(a.w == 4.0);
  CHECK(a.h == 2.0);
  CHECK(a.theta == doctest::Approx(-kPi / 2).epsilon(1e-15));

  const OrientedBox b = canonicalize({0, 0, 3, 1, kPi});
  CHECK(b.w == 3.0);
  CHECK(b.h == 1.0);
  CHECK(std::abs(b.theta) < 1e-15);

  const OrientedBox c = canonicalize({1, 1, 2, 2, 0.3});
  CHECK(c.cx == 1.0);
  CHECK(c.w == 2.0);
  CHECK(c.theta == 0.3);
}

TEST_CASE("canonicalize keeps the vertex set and range") {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 500; ++i) {
    OrientedBox b = random_box(rng);
    b.theta *= 4.0;  // well outside one period
    const OrientedBox c = canonicalize(b);
    CHECK(c.theta >= -kPi / 2);
    CHECK(c.theta < kPi / 2);
    CHECK(c.w >= c.h);
    const Polygon inter = clip_convex(corners(b), corners(c));
    CHECK(area(inter) == doctest::Approx(b.area()).epsilon(1e-10));
  }
}

TEST_CASE("invalid boxes are rejected") {
  CHECK_THROWS_AS(canonicalize({0, 0, 0, 1, 0}), InvalidBoxError);
  CHECK_THROWS_AS(corners({0, 0, 1, -1, 0}), InvalidBoxError);
  CHECK_THROWS_AS(skew_iou({0, 0, 1, 1, NAN}, {0, 0, 1, 1, 0}), InvalidBoxError);
  CHECK_THROWS_AS(skew_iou({0, 0, 1, 1, 0}, {INFINITY, 0, 1, 1, 0}), InvalidBoxError);
}

TEST_CASE("corners examples") {
  CHECK(same_cycle(corners({0, 0, 2, 2, 0}).vertices,
                   {{1, 1}, {-1, 1}, {-1, -1}, {1, -1}}, 1e-15));
  const double r = std::sqrt(2.0);
  CHECK(same_cycle(corners({0, 0, 2, 2, kPi / 4}).vertices,
                   {{r, 0}, {0, r}, {-r, 0}, {0, -r}}, 1e-15));
  CHECK(same_cycle(corners({5, 5, 4, 2, 0}).vertices,
                   {{7, 6}, {3, 6}, {3, 4}, {7, 4}}, 1e-15));
}

TEST_CASE("corners are counter-clockwise with the right centroid and edges") {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 200; ++i) {
    const OrientedBox b = random_box(rng);
    const Polygon p = corners(b);
    REQUIRE(p.size() == 4);
    CHECK(signed_area(p) > 0.0);
    double sx = 0, sy = 0;
    for (const Point& v : p.vertices) {
      sx += v.x;
      sy += v.y;
    }
    CHECK(sx / 4 == doctest::Approx(b.cx).epsilon(1e-12));
    CHECK(sy / 4 == doctest::Approx(b.cy).epsilon(1e-12));
    const auto edge = [&](int k) {
      const Point a = p.vertices[k];
      const Point c = p.vertices[(k + 1) % 4];
      return std::hypot(a.x - c.x, a.y - c.y);
    };
    CHECK(edge(0) == doctest::Approx(b.w).epsilon(1e-12));
    CHECK(edge(1) == doctest::Approx(b.h).epsilon(1e-12));
  }
}

TEST_CASE("clip_convex examples") {
  const Polygon square = corners({0, 0, 2, 2, 0});
  const Polygon self = clip_convex(square, square);
  CHECK(self.size() == 4);
  CHECK(area(self) == doctest::Approx(4.0).epsilon(1e-15));

  const Polygon shifted = clip_convex(square, corners({1, 0, 2, 2, 0}));
  CHECK(area(shifted) == doctest::Approx(2.0).epsilon(1e-15));

  const Polygon octagon = clip_convex(square, corners({0, 0, 2, 2, kPi / 4}));
  CHECK(octagon.size() == 8);
  CHECK(signed_area(octagon) > 0.0);
  CHECK(area(octagon) == doctest::Approx(kOctagonArea).epsilon(1e-14));
  // The analytic value itself, checked against an independent rasterization.
  CHECK(std::abs(rasterized_octagon_area(2000) - kOctagonArea) < 2e-3);
}

TEST_CASE("clip_convex degenerate contacts yield empty polygons") {
  const Polygon a = corners({0, 0, 2, 2, 0});
  CHECK(clip_convex(a, corners({2, 0, 2, 2, 0})).empty());   // shared edge
  CHECK(clip_convex(a, corners({2, 2, 2, 2, 0})).empty());   // shared corner
  CHECK(clip_convex(a, corners({10, 0, 2, 2, 0.3})).empty());
  CHECK(clip_convex(Polygon{}, a).empty());
}

TEST_CASE("clip_convex accepts clockwise input") {
  Polygon cw = corners({0, 0, 2, 2, 0});
  std::reverse(cw.vertices.begin(), cw.vertices.end());
  const Polygon out = clip_convex(cw, corners({1, 0, 2, 2, 0}));
  CHECK(signed_area(out) > 0.0);
  CHECK(area(out) == doctest::Approx(2.0));
}

TEST_CASE("area examples") {
  CHECK(area(corners({0, 0, 4, 2, 0.7})) == doctest::Approx(8.0).epsilon(1e-14));
  CHECK(area(Polygon{}) == 0.0);
  CHECK(area(Polygon{{{0, 0}, {1, 1}}}) == 0.0);
}

TEST_CASE("clip output is convex and no larger than either input") {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 1000; ++i) {
    const Polygon a = corners(random_box(rng, 2.0));
    const Polygon b = corners(random_box(rng, 2.0));
    const Polygon c = clip_convex(a, b);
    CHECK(area(c) <= std::min(area(a), area(b)) * (1 + 1e-12));
    const std::size_t n = c.size();
    for (std::size_t k = 0; k < n && n >= 3; ++k) {
      const Point p = c.vertices[k];
      const Point q = c.vertices[(k + 1) % n];
      const Point r = c.vertices[(k + 2) % n];
      const double turn = (q.x - p.x) * (r.y - p.y) - (q.y - p.y) * (r.x - p.x);
      CHECK(turn > -1e-9);
    }
  }
}

TEST_CASE("skew_iou examples") {
  const OrientedBox unit{0, 0, 2, 2, 0};
  CHECK(skew_iou(unit, unit) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(skew_iou(unit, {1, 0, 2, 2, 0}) == doctest::Approx(1.0 / 3).epsilon(1e-15));
  CHECK(skew_iou(unit, {0, 0, 2, 2, kPi / 4}) ==
        doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-13));
  CHECK(skew_iou({0, 0, 4, 2, 0}, {0, 0, 2, 4, 0}) == doctest::Approx(1.0 / 3).epsilon(1e-15));
  CHECK(skew_iou(unit, {5, 5, 2, 2, 0.2}) == 0.0);
}

TEST_CASE("skew_iou is symmetric and representation invariant") {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 1000; ++i) {
    const OrientedBox a = random_box(rng, 3.0);
    const OrientedBox b = random_box(rng, 3.0);
    const double ab = skew_iou(a, b);
    CHECK(ab >= 0.0);
    CHECK(ab <= 1.0);
    CHECK(std::abs(ab - skew_iou(b, a)) <= 1e-12);
    CHECK(std::abs(ab - skew_iou(canonicalize(a), b)) <= 1e-12);
    CHECK(std::abs(ab - skew_iou(a, swapped(b))) <= 1e-12);
  }
}

TEST_CASE("containment law") {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> shrink(0.1, 1.0);
  for (int i = 0; i < 500; ++i) {
    const OrientedBox outer = random_box(rng);
    OrientedBox inner = outer;
    inner.w *= shrink(rng);
    inner.h *= shrink(rng);
    CHECK(skew_iou(inner, outer) ==
          doctest::Approx(inner.area() / outer.area()).epsilon(1e-12));
  }
}

TEST_CASE("monte_carlo_iou examples") {
  const OrientedBox unit{0, 0, 2, 2, 0};
  CHECK(monte_carlo_iou(unit, unit, 1000, 1) == 1.0);
  CHECK(monte_carlo_iou(unit, unit, 1000, 99) == 1.0);
  CHECK(std::abs(monte_carlo_iou(unit, {1, 0, 2, 2, 0}, 1'000'000, 17) - 1.0 / 3) < 0.005);
  CHECK(monte_carlo_iou(unit, {6, 0, 2, 2, 0.4}, 10000, 2) == 0.0);
  CHECK_THROWS_AS(monte_carlo_iou(unit, unit, 0, 1), InvalidArgumentError);
}

TEST_CASE("monte_carlo_iou is deterministic per seed") {
  const OrientedBox a{0, 0, 3, 1, 0.2};
  const OrientedBox b{0.5, 0.1, 2, 2, -0.4};
  CHECK(monte_carlo_iou(a, b, 50000, 42) == monte_carlo_iou(a, b, 50000, 42));
  CHECK(monte_carlo_iou(a, b, 50000, 42) != monte_carlo_iou(a, b, 50000, 43));
}

TEST_CASE("wrap_half_turn") {
  CHECK(wrap_half_turn(kPi / 2) == doctest::Approx(-kPi / 2));
  CHECK(wrap_half_turn(-kPi / 2) == doctest::Approx(-kPi / 2));
  CHECK(wrap_half_turn(0.25 + 7 * kPi) == doctest::Approx(0.25));
  for (double t = -20.0; t < 20.0; t += 0.37) {
    const double w = wrap_half_turn(t);
    CHECK(w >= -kPi / 2);
    CHECK(w < kPi / 2);
    CHECK(std::abs(std::sin(2 * (w - t))) < 1e-12);
  }
}
