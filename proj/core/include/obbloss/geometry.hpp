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
#include <vector>

namespace obbloss {

inline constexpr double kPi = 3.14159265358979323846;

struct Point {
  double x = 0.0;
  double y = 0.0;
};

/// Rotated rectangle. `w` is the extent along the direction at angle `theta`
/// (radians, counter-clockwise from +x); `h` is the perpendicular extent.
struct OrientedBox {
  double cx = 0.0;
  double cy = 0.0;
  double w = 1.0;
  double h = 1.0;
  double theta = 0.0;

  double area() const { return w * h; }
};

/// Convex polygon with counter-clockwise vertices. Fewer than three vertices
/// means an empty (zero-area) region.
struct Polygon {
  std::vector<Point> vertices;

  std::size_t size() const { return vertices.size(); }
  bool empty() const { return vertices.size() < 3; }
};

/// Throws InvalidBoxError unless every field is finite and w, h > 0.
void validate(const OrientedBox& box);

/// Reduces an angle modulo pi into [-pi/2, pi/2).
double wrap_half_turn(double theta);

/// Long-edge canonical form: w >= h and theta in [-pi/2, pi/2). The returned
/// box has the same vertex set as the input.
OrientedBox canonicalize(const OrientedBox& box);

/// The four corners, counter-clockwise, starting at (+w/2, +h/2) in the box
/// frame.
Polygon corners(const OrientedBox& box);

/// Intersection of two convex polygons (Sutherland-Hodgman). Inputs may be
/// given in either orientation; the output is counter-clockwise with
/// duplicate and collinear vertices removed. Returns an empty polygon when the
/// inputs are disjoint or touch only along an edge or at a point.
Polygon clip_convex(const Polygon& subject, const Polygon& clip);

/// Shoelace area, always non-negative. Zero for fewer than three vertices.
double area(const Polygon& poly);

/// Signed shoelace area; positive for counter-clockwise vertex order.
double signed_area(const Polygon& poly);

/// Exact rotated-rectangle IoU, |a & b| / |a | b|.
double skew_iou(const OrientedBox& a, const OrientedBox& b);

/// Whether `p` lies in the closed rectangle.
bool contains(const OrientedBox& box, Point p);

/// Monte-Carlo IoU estimate from `samples` uniform points over the
/// axis-aligned bounding rectangle of both boxes. Deterministic for a fixed
/// seed. Throws InvalidArgumentError when samples == 0.
double monte_carlo_iou(const OrientedBox& a, const OrientedBox& b,
                       std::size_t samples, std::uint64_t seed);

}  // namespace obbloss
