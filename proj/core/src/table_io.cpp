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

#include "obbloss/table_io.hpp"

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <ostream>

#include <json.hpp>

namespace obbloss {
namespace {

using Json = nlohmann::ordered_json;

constexpr double kDegPerRad = 180.0 / kPi;

template <typename Range, typename Fn>
void join(std::ostream& out, const Range& items, Fn&& render) {
  bool first = true;
  for (const auto& item : items) {
    if (!first) out << ',';
    first = false;
    out << render(item);
  }
  out << '\n';
}

Json number(double v) {
  // JSON has no NaN/Inf; null keeps the document parseable.
  if (!std::isfinite(v)) return Json(nullptr);
  if (v == std::trunc(v) && std::abs(v) < 0x1.0p53) {
    return Json(static_cast<std::int64_t>(v));
  }
  return Json(v);
}

Json box_json(const OrientedBox& b) {
  return Json{{"cx", b.cx}, {"cy", b.cy}, {"w", b.w}, {"h", b.h},
              {"theta_deg", b.theta * kDegPerRad}};
}

}  // namespace

std::string format_number(double value) {
  if (value == 0.0) return "0";  // folds -0
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", value);
  return buf;
}

void CsvWriter::header(std::initializer_list<std::string_view> names) {
  join(out_, names, [](std::string_view s) { return s; });
}

void CsvWriter::header(std::span<const std::string> names) {
  join(out_, names, [](const std::string& s) -> const std::string& { return s; });
}

void CsvWriter::row(std::initializer_list<double> values) {
  join(out_, values, format_number);
}

void CsvWriter::row(std::span<const double> values) {
  join(out_, values, format_number);
}

void CsvWriter::cells(std::span<const std::string> cells) {
  join(out_, cells, [](const std::string& s) -> const std::string& { return s; });
}

void write_json_object_line(std::ostream& out,
                            const std::vector<std::string>& keys,
                            const std::vector<double>& values) {
  Json obj = Json::object();
  for (std::size_t i = 0; i < keys.size() && i < values.size(); ++i) {
    obj[keys[i]] = number(values[i]);
  }
  out << obj.dump() << '\n';
}

void write_csv(std::ostream& out, const SweepTable& table) {
  CsvWriter csv(out);
  csv.header(table.columns);
  for (const auto& row : table.rows) csv.row(row);
}

void write_json(std::ostream& out, const SweepTable& table) {
  Json doc;
  doc["control"] = table.control;
  doc["unit"] = table.control_unit;
  doc["base"] = box_json(table.base);
  doc["alphas"] = table.alphas;
  doc["seed"] = table.seed;
  doc["columns"] = table.columns;
  Json rows = Json::array();
  for (const auto& row : table.rows) {
    Json obj = Json::object();
    for (std::size_t i = 0; i < table.columns.size(); ++i) {
      obj[table.columns[i]] = number(row[i]);
    }
    rows.push_back(std::move(obj));
  }
  doc["rows"] = std::move(rows);
  out << doc.dump(2) << '\n';
}

void write_csv(std::ostream& out, const SurfaceTable& table) {
  CsvWriter csv(out);
  csv.header({"aspect_ratio", "dtheta_deg", "loss"});
  for (const SurfaceCell& c : table.cells) {
    csv.row({c.aspect_ratio, c.dtheta_deg, c.loss});
  }
}

void write_json(std::ostream& out, const SurfaceTable& table) {
  Json doc;
  doc["loss"] = std::string(to_string(table.loss));
  doc["ar_steps"] = table.ar_steps;
  doc["dtheta_steps"] = table.dtheta_steps;
  doc["columns"] = {"aspect_ratio", "dtheta_deg", "loss"};
  Json rows = Json::array();
  for (const SurfaceCell& c : table.cells) {
    rows.push_back(Json{{"aspect_ratio", number(c.aspect_ratio)},
                        {"dtheta_deg", number(c.dtheta_deg)},
                        {"loss", number(c.loss)}});
  }
  doc["rows"] = std::move(rows);
  out << doc.dump(2) << '\n';
}

}  // namespace obbloss
