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

#include "obbloss/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "obbloss/errors.hpp"
#include "obbloss/rng.hpp"

namespace obbloss {
namespace {

constexpr double kCollinearTolerance = 1e-12;

double cross(Point o, Point a, Point b) {
  return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

double distance(Point a, Point b) { return std::hypot(a.x - b.x, a.y - b.y); }

std::vector<Point> counter_clockwise(const Polygon& poly) {
  std::vector<Point> pts = poly.vertices;
  if (signed_area(poly) < 0.0) std::reverse(pts.begin(), pts.end());
  return pts;
}

// Drops vertices closer than kCollinearTolerance to the line through their
// neighbours. Repeated until stable, since each removal changes neighbours.
std::vector<Point> drop_degenerate_vertices(std::vector<Point> pts) {
  bool changed = true;
  while (changed && pts.size() >= 3) {
    changed = false;
    const std::size_t n = pts.size();
    for (std::size_t i = 0; i < n; ++i) {
      const Point prev = pts[(i + n - 1) % n];
      const Point cur = pts[i];
      const Point next = pts[(i + 1) % n];
      const double base = distance(prev, next);
      const double offset = base > 0.0 ? std::abs(cross(prev, next, cur)) / base
                                       : distance(prev, cur);
      if (offset <= kCollinearTolerance) {
        pts.erase(pts.begin() + static_cast<std::ptrdiff_t>(i));
        changed = true;
        break;
      }
    }
  }
  if (pts.size() < 3) pts.clear();
  return pts;
}

// Point-in-rectangle test with the rotation precomputed.
struct FrameTest {
  explicit FrameTest(const OrientedBox& box)
      : cx(box.cx), cy(box.cy), c(std::cos(box.theta)), s(std::sin(box.theta)),
        half_w(box.w / 2.0), half_h(box.h / 2.0) {}

  bool operator()(Point p) const {
    const double dx = p.x - cx;
    const double dy = p.y - cy;
    return std::abs(dx * c + dy * s) <= half_w &&
           std::abs(-dx * s + dy * c) <= half_h;
  }

  double cx, cy, c, s, half_w, half_h;
};


}  // namespace

void validate(const OrientedBox& box) {
  const bool finite = std::isfinite(box.cx) && std::isfinite(box.cy) &&
                      std::isfinite(box.w) && std::isfinite(box.h) &&
                      std::isfinite(box.theta);
  if (!finite) throw InvalidBoxError("box has a non-finite field");
  if (!(box.w > 0.0) || !(box.h > 0.0)) {
    throw InvalidBoxError("box extents must be positive, got w=" +
                          std::to_string(box.w) +
                          " h=" + std::to_string(box.h));
  }
}

double wrap_half_turn(double theta) {
  double t = theta - kPi * std::floor((theta + kPi / 2.0) / kPi);
  // floor() can land one period off when theta + pi/2 rounds onto a multiple.
  if (t >= kPi / 2.0) t -= kPi;
  if (t < -kPi / 2.0) t += kPi;
  return t;
}

OrientedBox canonicalize(const OrientedBox& box) {
  validate(box);
  OrientedBox out = box;
  if (out.w < out.h) {
    std::swap(out.w, out.h);
    out.theta += kPi / 2.0;
  }
  out.theta = wrap_half_turn(out.theta);
  return out;
}

Polygon corners(const OrientedBox& box) {
  validate(box);
  const double c = std::cos(box.theta);
  const double s = std::sin(box.theta);
  const Point u{c * box.w / 2.0, s * box.w / 2.0};
  const Point v{-s * box.h / 2.0, c * box.h / 2.0};
  return Polygon{{
      {box.cx + u.x + v.x, box.cy + u.y + v.y},
      {box.cx - u.x + v.x, box.cy - u.y + v.y},
      {box.cx - u.x - v.x, box.cy - u.y - v.y},
      {box.cx + u.x - v.x, box.cy + u.y - v.y},
  }};
}

double signed_area(const Polygon& poly) {
  const auto& pts = poly.vertices;
  if (pts.size() < 3) return 0.0;
  // Shoelace relative to the first vertex keeps cancellation small when the
  // polygon sits far from the origin.
  const Point o = pts.front();
  double twice = 0.0;
  for (std::size_t i = 1; i + 1 < pts.size(); ++i) {
    twice += cross(o, pts[i], pts[i + 1]);
  }
  return twice / 2.0;
}

double area(const Polygon& poly) { return std::abs(signed_area(poly)); }

Polygon clip_convex(const Polygon& subject, const Polygon& clip) {
  if (subject.empty() || clip.empty()) return {};
  std::vector<Point> output = counter_clockwise(subject);
  const std::vector<Point> edges = counter_clockwise(clip);

  for (std::size_t e = 0; e < edges.size() && !output.empty(); ++e) {
    const Point a = edges[e];
    const Point b = edges[(e + 1) % edges.size()];
    std::vector<Point> input;
    input.swap(output);
    for (std::size_t i = 0; i < input.size(); ++i) {
      const Point p = input[i];
      const Point q = input[(i + 1) % input.size()];
      const double dp = cross(a, b, p);
      const double dq = cross(a, b, q);
      if (dp >= 0.0) output.push_back(p);
      if ((dp >= 0.0) != (dq >= 0.0)) {
        const double t = dp / (dp - dq);
        output.push_back({p.x + t * (q.x - p.x), p.y + t * (q.y - p.y)});
      }
    }
  }
  return Polygon{drop_degenerate_vertices(std::move(output))};
}

double skew_iou(const OrientedBox& a, const OrientedBox& b) {
  const double inter = area(clip_convex(corners(a), corners(b)));
  const double uni = std::max(a.area() + b.area() - inter,
                              std::numeric_limits<double>::epsilon());
  return std::clamp(inter / uni, 0.0, 1.0);
}

bool contains(const OrientedBox& box, Point p) { return FrameTest(box)(p); }

double monte_carlo_iou(const OrientedBox& a, const OrientedBox& b,
                       std::size_t samples, std::uint64_t seed) {
  if (samples == 0) {
    throw InvalidArgumentError("monte_carlo_iou needs at least one sample");
  }
  const Polygon pa = corners(a);
  const Polygon pb = corners(b);
  double x0 = std::numeric_limits<double>::infinity();
  double y0 = x0;
  double x1 = -x0;
  double y1 = -x0;
  for (const auto* poly : {&pa, &pb}) {
    for (const Point& p : poly->vertices) {
      x0 = std::min(x0, p.x);
      y0 = std::min(y0, p.y);
      x1 = std::max(x1, p.x);
      y1 = std::max(y1, p.y);
    }
  }

  SplitMix64 rng(seed);

  const FrameTest in_box_a(a);
  const FrameTest in_box_b(b);
  std::size_t both = 0;
  std::size_t either = 0;
  for (std::size_t i = 0; i < samples; ++i) {
    const Point p{rng.uniform(x0, x1), rng.uniform(y0, y1)};
    const bool in_a = in_box_a(p);
    const bool in_b = in_box_b(p);
    both += (in_a && in_b) ? 1 : 0;
    either += (in_a || in_b) ? 1 : 0;
  }
  if (either == 0) return 0.0;
  return static_cast<double>(both) / static_cast<double>(either);
}

}  // namespace obbloss
