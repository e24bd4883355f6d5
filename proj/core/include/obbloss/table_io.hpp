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

#include <initializer_list>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "obbloss/analysis.hpp"

namespace obbloss {

/// Shortest "%.12g" rendering with a '.' decimal point, used for every
/// number this library prints.
std::string format_number(double value);

/// Comma-separated output with a mandatory header row.
class CsvWriter {
 public:
  explicit CsvWriter(std::ostream& out) : out_(out) {}

  void header(std::initializer_list<std::string_view> names);
  void header(std::span<const std::string> names);
  void row(std::initializer_list<double> values);
  void row(std::span<const double> values);
  /// Pre-formatted cells, for mixed text/number rows.
  void cells(std::span<const std::string> cells);

 private:
  std::ostream& out_;
};

/// Writes {"k0": v0, ...} followed by a newline, keys in the given order.
void write_json_object_line(std::ostream& out,
                            const std::vector<std::string>& keys,
                            const std::vector<double>& values);

void write_csv(std::ostream& out, const SweepTable& table);
void write_json(std::ostream& out, const SweepTable& table);

/// Columns: aspect_ratio,dtheta_deg,loss.
void write_csv(std::ostream& out, const SurfaceTable& table);
void write_json(std::ostream& out, const SurfaceTable& table);

}  // namespace obbloss
