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

#include "cli.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "obbloss/analysis.hpp"
#include "obbloss/errors.hpp"
#include "obbloss/fitting.hpp"
#include "obbloss/gaussian.hpp"
#include "obbloss/losses.hpp"
#include "obbloss/table_io.hpp"

namespace obbloss::cli {
namespace {

using Json = nlohmann::ordered_json;

constexpr double kRadPerDeg = kPi / 180.0;
constexpr double kDegPerRad = 180.0 / kPi;

std::string_view trim(std::string_view s) {
  const auto not_space = [](char c) { return c != ' ' && c != '\t' && c != '\r'; };
  while (!s.empty() && !not_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && !not_space(s.back())) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  for (;;) {
    const std::size_t pos = s.find(sep, start);
    parts.push_back(s.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

std::optional<double> parse_double(std::string_view text) {
  text = trim(text);
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  if (text.empty()) return std::nullopt;
  double value = 0.0;
  const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || end != text.data() + text.size()) return std::nullopt;
  if (!std::isfinite(value)) return std::nullopt;
  return value;
}

OrientedBox degrees_to_box(double cx, double cy, double w, double h,
                           double theta_deg) {
  return {cx, cy, w, h, theta_deg * kRadPerDeg};
}

std::pair<double, double> parse_pair(std::string_view text, const char* what) {
  const auto parts = split(text, ',');
  if (parts.size() == 2) {
    const auto lo = parse_double(parts[0]);
    const auto hi = parse_double(parts[1]);
    if (lo && hi) return {*lo, *hi};
  }
  throw CliError(kUsage, std::string(what) + " must be 'lo,hi', got '" +
                             std::string(text) + "'");
}

// Flags shared by every subcommand that evaluates losses.
struct LossFlags {
  std::vector<double> alphas{3.0};
  double beta = 0.3;
  double lambda = 3.0;
  double delta = 1.0;
  std::string variant = "mk_ga";

  void attach(CLI::App* cmd, bool with_variant) {
    cmd->add_option("--alpha", alphas, "MKIoU modulation factor(s), < 4 (repeatable)");
    cmd->add_option("--beta", beta, "GA loss weight")->capture_default_str();
    cmd->add_option("--lambda", lambda, "GA loss sharpness")->capture_default_str();
    cmd->add_option("--delta", delta, "Smooth L1 transition point")->capture_default_str();
    if (with_variant) {
      cmd->add_option("--variant", variant,
                      "kf_linear | kf_exp | kf_neglog | mk | mk_ga")
          ->capture_default_str();
    }
  }

  LossConfig config() const {
    if (alphas.empty()) throw CliError(kUsage, "at least one --alpha is required");
    LossConfig cfg;
    cfg.alpha = alphas.front();
    cfg.beta = beta;
    cfg.lambda = lambda;
    cfg.sl1_delta = delta;
    cfg.variant = parse_variant(variant);
    validate(cfg);
    for (double a : alphas) validate(ModulationParams{a});
    return cfg;
  }
};

enum class Format { csv, json };

Format parse_format(std::string_view name, bool lines) {
  if (name == "csv") return Format::csv;
  if (name == "json" || (lines && name == "jsonl")) return Format::json;
  throw CliError(kUsage, "unknown format '" + std::string(name) + "'");
}

// Writes `content` to `path`, or to `fallback` when path is empty.
void emit(const std::string& path, const std::string& content,
          std::ostream& fallback) {
  if (path.empty()) {
    fallback << content;
    return;
  }
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw CliError(kData, "cannot open '" + path + "' for writing");
  file << content;
  file.flush();
  if (!file) throw CliError(kData, "failed writing '" + path + "'");
}

void print_aligned(std::ostream& out,
                   const std::vector<std::pair<std::string, double>>& rows) {
  std::size_t width = 0;
  for (const auto& [key, value] : rows) width = std::max(width, key.size());
  for (const auto& [key, value] : rows) {
    out << key << std::string(width - key.size() + 2, ' ')
        << format_number(value) << '\n';
  }
}

// --- iou -----------------------------------------------------------------

struct IouCommand {
  std::string pred_text;
  std::string target_text;
  LossFlags loss;
  std::string format = "text";

  void attach(CLI::App* cmd) {
    cmd->add_option("pred", pred_text, "predicted box cx,cy,w,h,theta_deg")->required();
    cmd->add_option("target", target_text, "target box cx,cy,w,h,theta_deg")->required();
    loss.attach(cmd, false);
    cmd->add_option("--format", format, "text | json")->capture_default_str();
  }

  int run(std::ostream& out) const {
    if (format != "text" && format != "json") {
      throw CliError(kUsage, "unknown format '" + format + "'");
    }
    const OrientedBox pred = parse_box_literal(pred_text);
    const OrientedBox target = parse_box_literal(target_text);
    validate(pred);
    validate(target);
    LossConfig cfg = loss.config();

    std::vector<std::pair<std::string, double>> rows;
    const double kf = kfiou(pred, target);
    rows.emplace_back("skew_iou", skew_iou(pred, target));
    rows.emplace_back("kfiou", kf);
    rows.emplace_back("kfiou3", 3.0 * kf);
    for (double alpha : loss.alphas) {
      rows.emplace_back(mkiou_column_name(alpha), mkiou(pred, target, {alpha}));
    }
    const LossBreakdown base = reg_loss(pred, target, cfg);
    rows.emplace_back("center_term", base.center_term);
    rows.emplace_back("ga_loss", ga_loss(pred, target, cfg));
    for (LossVariant v : kAllVariants) {
      cfg.variant = v;
      rows.emplace_back("loss_" + std::string(to_string(v)),
                        reg_loss(pred, target, cfg).total);
    }

    if (format == "json") {
      Json obj = Json::object();
      for (const auto& [key, value] : rows) obj[key] = value;
      out << obj.dump(2) << '\n';
    } else {
      print_aligned(out, rows);
    }
    return kOk;
  }
};

// --- sweep ---------------------------------------------------------------

struct SweepCommand {
  std::string kind = "wh";
  std::string base_text;
  std::string range_text;
  std::size_t steps = 0;
  std::vector<double> alphas{3.0, 2.0, 1.0};
  std::string format = "csv";
  std::string out_path;

  void attach(CLI::App* cmd) {
    cmd->add_option("--kind", kind,
                    "wh: scale both extents (control 'scale'); angle: rotate "
                    "(control 'dtheta_deg')")
        ->capture_default_str();
    cmd->add_option("--base", base_text,
                    "base box cx,cy,w,h,theta_deg (default 0,0,4,2,0 for wh, "
                    "0,0,4,1,0 for angle)");
    cmd->add_option("--range", range_text,
                    "lo,hi: scales for wh (default 0.5,2), degrees for angle "
                    "(default -90,90)");
    cmd->add_option("--steps", steps, "grid points, >= 2 (default 151 wh, 181 angle)");
    cmd->add_option("--alpha", alphas, "MKIoU alphas, one column each (default 3 2 1)");
    cmd->add_option("--format", format, "csv | json")->capture_default_str();
    cmd->add_option("--out", out_path, "output file (default: stdout)");
    cmd->footer(
        "Columns: <control>,skew_iou,kfiou3,mkiou_a<alpha>... where kfiou3 = "
        "3*KFIoU.\nA consistency summary (mean |column - skew_iou|) is printed "
        "per approximate column.");
  }

  int run(std::ostream& out, std::ostream& err) const {
    const bool wh = kind == "wh";
    if (!wh && kind != "angle") throw CliError(kUsage, "unknown sweep kind '" + kind + "'");
    const Format fmt = parse_format(format, false);
    const OrientedBox base = parse_box_literal(
        !base_text.empty() ? base_text : (wh ? "0,0,4,2,0" : "0,0,4,1,0"));
    validate(base);
    auto [lo, hi] = range_text.empty() ? (wh ? std::pair{0.5, 2.0} : std::pair{-90.0, 90.0})
                                       : parse_pair(range_text, "--range");
    const std::size_t n = steps != 0 ? steps : (wh ? 151 : 181);
    if (n < 2) throw CliError(kUsage, "--steps must be at least 2");

    const SweepTable table =
        wh ? sweep_wh(base, {lo, hi}, n, alphas)
           : sweep_angle(base, {lo * kRadPerDeg, hi * kRadPerDeg}, n, alphas);

    std::ostringstream body;
    if (fmt == Format::csv) write_csv(body, table); else write_json(body, table);
    emit(out_path, body.str(), out);

    std::ostream& summary = out_path.empty() ? err : out;
    for (std::size_t i = 2; i < table.columns.size(); ++i) {
      summary << "consistency " << table.columns[i] << ' '
              << format_number(consistency_metric(table, table.columns[i])) << '\n';
    }
    return kOk;
  }
};

// --- surface -------------------------------------------------------------

struct SurfaceCommand {
  std::string loss_name = "ga";
  std::string ar_text = "1,5";
  std::string dtheta_text = "0,180";
  std::string grid_text = "37";
  LossFlags loss;
  std::string format = "csv";
  std::string out_path;

  void attach(CLI::App* cmd) {
    cmd->add_option("--loss", loss_name, "mk | ga")->capture_default_str();
    cmd->add_option("--ar-range", ar_text, "aspect ratios lo,hi (>= 1)")->capture_default_str();
    cmd->add_option("--dtheta-range", dtheta_text, "angle offsets lo,hi in degrees")
        ->capture_default_str();
    cmd->add_option("--grid", grid_text, "N or N,M grid points (aspect ratio, angle)")
        ->capture_default_str();
    loss.attach(cmd, false);
    cmd->add_option("--format", format, "csv | json")->capture_default_str();
    cmd->add_option("--out", out_path, "output file (default: stdout)");
    cmd->footer("Columns: aspect_ratio,dtheta_deg,loss. Target has unit area.");
  }

  int run(std::ostream& out, std::ostream& err) const {
    const SurfaceLoss which = parse_surface_loss(loss_name);
    const Format fmt = parse_format(format, false);
    const auto [ar_lo, ar_hi] = parse_pair(ar_text, "--ar-range");
    const auto [th_lo, th_hi] = parse_pair(dtheta_text, "--dtheta-range");
    const auto grid = split(grid_text, ',');
    std::size_t ar_steps = 0;
    std::size_t th_steps = 0;
    const auto count = [&](std::string_view s) {
      const auto v = parse_double(s);
      if (!v || *v < 2 || *v != std::floor(*v)) {
        throw CliError(kUsage, "--grid counts must be integers >= 2");
      }
      return static_cast<std::size_t>(*v);
    };
    if (grid.size() == 1) {
      ar_steps = th_steps = count(grid[0]);
    } else if (grid.size() == 2) {
      ar_steps = count(grid[0]);
      th_steps = count(grid[1]);
    } else {
      throw CliError(kUsage, "--grid must be N or N,M");
    }
    const SurfaceTable table =
        surface(which, {ar_lo, ar_hi}, {th_lo * kRadPerDeg, th_hi * kRadPerDeg},
                ar_steps, th_steps, loss.config());

    std::ostringstream body;
    if (fmt == Format::csv) write_csv(body, table); else write_json(body, table);
    emit(out_path, body.str(), out);

    double lo = table.cells.front().loss;
    double hi = lo;
    for (const SurfaceCell& c : table.cells) {
      lo = std::min(lo, c.loss);
      hi = std::max(hi, c.loss);
    }
    std::ostream& summary = out_path.empty() ? err : out;
    summary << "cells " << table.cells.size() << '\n'
            << "min_loss " << format_number(lo) << '\n'
            << "max_loss " << format_number(hi) << '\n';
    return kOk;
  }
};

// --- fit -----------------------------------------------------------------

struct FitCommand {
  std::string target_text;
  std::string init_text;
  std::uint64_t seed = 0;
  LossFlags loss;
  double lr = 0.05;
  double momentum = 0.9;
  int max_steps = 2000;
  double stop_iou = 0.99;
  std::string trace_path;
  std::string format = "csv";

  void attach(CLI::App* cmd) {
    cmd->add_option("--target", target_text, "target box cx,cy,w,h,theta_deg")->required();
    cmd->add_option("--init", init_text,
                    "initial prediction (default: target perturbed using --seed)");
    cmd->add_option("--seed", seed, "seed for the perturbed init")->capture_default_str();
    loss.attach(cmd, true);
    cmd->add_option("--lr", lr, "learning rate")->capture_default_str();
    cmd->add_option("--momentum", momentum, "momentum in [0, 1)")->capture_default_str();
    cmd->add_option("--max-steps", max_steps, "step budget")->capture_default_str();
    cmd->add_option("--stop-iou", stop_iou, "stop once exact IoU reaches this")
        ->capture_default_str();
    cmd->add_option("--trace", trace_path, "write the per-step trace here");
    cmd->add_option("--format", format, "trace format: csv | jsonl")->capture_default_str();
    cmd->footer("Trace columns: step,cx,cy,w,h,theta,loss,skew_iou (theta in degrees).");
  }

  int run(std::ostream& out) const {
    const Format fmt = parse_format(format, true);
    FitSpec spec;
    spec.target = parse_box_literal(target_text);
    validate(spec.target);
    spec.init = init_text.empty() ? perturbed_init(spec.target, seed)
                                  : parse_box_literal(init_text);
    spec.loss_cfg = loss.config();
    spec.learning_rate = lr;
    spec.momentum = momentum;
    spec.max_steps = max_steps;
    spec.stop_iou = stop_iou;
    spec.seed = seed;
    validate(spec);

    const auto write_trace = [&](const FitTrace& trace) {
      if (trace_path.empty()) return;
      std::ostringstream body;
      if (fmt == Format::csv) write_trace_csv(body, trace); else write_trace_jsonl(body, trace);
      emit(trace_path, body.str(), out);
    };
    const auto summarize = [&](std::string_view status, const FitTrace& trace) {
      out << status << " step=" << trace.steps.back().step
          << " iou=" << format_number(trace.final_iou)
          << " angle_residual_deg="
          << format_number(trace.final_angle_residual * kDegPerRad) << '\n';
    };

    try {
      const FitTrace trace = fit(spec);
      write_trace(trace);
      summarize(trace.converged ? "converged" : "not_converged", trace);
      return kOk;
    } catch (const FitDivergedError& e) {
      const FitTrace& partial = e.partial_trace();
      if (!partial.steps.empty()) {
        write_trace(partial);
        summarize("diverged", partial);
      } else {
        out << "diverged step=0\n";
      }
      throw CliError(kNumerical, e.what());
    }
  }
};

// --- batch ---------------------------------------------------------------

struct BatchCommand {
  std::string input_path;
  LossFlags loss;
  std::string format = "csv";
  std::string out_path;

  void attach(CLI::App* cmd) {
    cmd->add_option("--input", input_path, "JSONL or CSV file of box pairs")->required();
    loss.attach(cmd, false);
    cmd->add_option("--format", format, "csv | json")->capture_default_str();
    cmd->add_option("--out", out_path, "output file (default: stdout)");
    cmd->footer(
        "JSONL keys: id, pred{cx,cy,w,h,theta_deg}, target{...}.\n"
        "CSV header: id,pred_cx,pred_cy,pred_w,pred_h,pred_theta_deg,"
        "target_cx,target_cy,target_w,target_h,target_theta_deg.\n"
        "Output columns: id,skew_iou,kfiou,kfiou3,mkiou_a<alpha>...,loss_<variant>...");
  }

  int run(std::ostream& out, std::ostream& err) const {
    const Format fmt = parse_format(format, false);
    LossConfig cfg = loss.config();
    std::ifstream in(input_path, std::ios::binary);
    if (!in) throw CliError(kData, "cannot read '" + input_path + "'");

    const bool csv_input = is_csv(in);
    const ParsedRecords parsed = csv_input ? parse_csv_records(in) : parse_jsonl_records(in);
    for (const RecordError& e : parsed.errors) {
      err << input_path << ":" << e.line << ": " << e.message << '\n';
    }
    const std::size_t total = parsed.records.size() + parsed.errors.size();
    if (total == 0) throw CliError(kUsage, "'" + input_path + "' contains no records");
    if (2 * parsed.errors.size() > total) {
      throw CliError(kData, std::to_string(parsed.errors.size()) + " of " +
                                std::to_string(total) + " records failed to parse");
    }

    std::vector<std::string> columns{"skew_iou", "kfiou", "kfiou3"};
    for (double a : loss.alphas) columns.push_back(mkiou_column_name(a));
    for (LossVariant v : kAllVariants) columns.push_back("loss_" + std::string(to_string(v)));

    std::vector<std::vector<double>> rows;
    rows.reserve(parsed.records.size());
    for (const BoxPairRecord& r : parsed.records) {
      std::vector<double> row;
      const double kf = kfiou(r.pred, r.target);
      row.push_back(skew_iou(r.pred, r.target));
      row.push_back(kf);
      row.push_back(3.0 * kf);
      for (double a : loss.alphas) row.push_back(mkiou(r.pred, r.target, {a}));
      for (LossVariant v : kAllVariants) {
        cfg.variant = v;
        row.push_back(reg_loss(r.pred, r.target, cfg).total);
      }
      rows.push_back(std::move(row));
    }

    std::ostringstream body;
    if (fmt == Format::csv) {
      std::vector<std::string> header{"id"};
      header.insert(header.end(), columns.begin(), columns.end());
      CsvWriter csv(body);
      csv.header(header);
      for (std::size_t i = 0; i < rows.size(); ++i) {
        std::vector<std::string> cells{parsed.records[i].id};
        for (double v : rows[i]) cells.push_back(format_number(v));
        csv.cells(cells);
      }
    } else {
      Json doc = Json::array();
      for (std::size_t i = 0; i < rows.size(); ++i) {
        Json obj = Json::object();
        obj["id"] = parsed.records[i].id;
        for (std::size_t c = 0; c < columns.size(); ++c) obj[columns[c]] = rows[i][c];
        doc.push_back(std::move(obj));
      }
      body << doc.dump(2) << '\n';
    }
    emit(out_path, body.str(), out);

    std::ostream& summary = out_path.empty() ? err : out;
    summary << "records " << rows.size() << '\n'
            << "errors " << parsed.errors.size() << '\n';
    // Consistency over the file: mean |approx - skew_iou| per IoU-like column.
    for (std::size_t c = 2; c < 3 + loss.alphas.size(); ++c) {
      double sum = 0.0;
      for (const auto& row : rows) sum += std::abs(row[c] - row[0]);
      summary << "consistency " << columns[c] << ' '
              << format_number(sum / static_cast<double>(rows.size())) << '\n';
    }
    return kOk;
  }

  bool is_csv(std::istream& in) const {
    const auto ends_with = [&](std::string_view suffix) {
      return input_path.size() >= suffix.size() &&
             input_path.compare(input_path.size() - suffix.size(), suffix.size(), suffix) == 0;
    };
    if (ends_with(".csv")) return true;
    if (ends_with(".jsonl") || ends_with(".json")) return false;
    // Sniff: JSON lines start with '{'.
    const auto pos = in.tellg();
    char c = 0;
    while (in.get(c) && std::isspace(static_cast<unsigned char>(c))) {}
    in.clear();
    in.seekg(pos);
    return c != '{';
  }
};

BoxPairRecord* track_id(ParsedRecords& parsed, std::set<std::string>& seen,
                        BoxPairRecord record, std::size_t line) {
  if (record.id.empty()) {
    parsed.errors.push_back({line, "record id is empty"});
    return nullptr;
  }
  if (!seen.insert(record.id).second) {
    parsed.errors.push_back({line, "duplicate id '" + record.id + "'"});
    return nullptr;
  }
  try {
    validate(record.pred);
    validate(record.target);
  } catch (const InvalidBoxError& e) {
    parsed.errors.push_back({line, e.what()});
    return nullptr;
  }
  parsed.records.push_back(std::move(record));
  return &parsed.records.back();
}

}  // namespace

OrientedBox parse_box_literal(std::string_view text) {
  const auto parts = split(text, ',');
  if (parts.size() != 5) {
    throw CliError(kUsage, "box literal must be cx,cy,w,h,theta_deg, got '" +
                               std::string(text) + "'");
  }
  double v[5];
  for (std::size_t i = 0; i < 5; ++i) {
    const auto parsed = parse_double(parts[i]);
    if (!parsed) {
      throw CliError(kUsage, "box literal field '" + std::string(parts[i]) +
                                 "' is not a finite number");
    }
    v[i] = *parsed;
  }
  return degrees_to_box(v[0], v[1], v[2], v[3], v[4]);
}

ParsedRecords parse_jsonl_records(std::istream& in) {
  ParsedRecords parsed;
  std::set<std::string> seen;
  std::string line;
  std::size_t line_no = 0;
  const auto read_box = [](const Json& obj, const char* which) {
    if (!obj.contains(which) || !obj[which].is_object()) {
      throw std::invalid_argument(std::string("missing object '") + which + "'");
    }
    const Json& b = obj[which];
    double v[5];
    const char* keys[5] = {"cx", "cy", "w", "h", "theta_deg"};
    for (int i = 0; i < 5; ++i) {
      if (!b.contains(keys[i]) || !b[keys[i]].is_number()) {
        throw std::invalid_argument(std::string(which) + "." + keys[i] +
                                    " missing or not a number");
      }
      v[i] = b[keys[i]].get<double>();
    }
    return degrees_to_box(v[0], v[1], v[2], v[3], v[4]);
  };
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    try {
      const Json obj = Json::parse(line);
      if (!obj.is_object()) throw std::invalid_argument("line is not a JSON object");
      if (!obj.contains("id")) throw std::invalid_argument("missing 'id'");
      const Json& id = obj["id"];
      BoxPairRecord record;
      record.id = id.is_string() ? id.get<std::string>() : id.dump();
      record.pred = read_box(obj, "pred");
      record.target = read_box(obj, "target");
      track_id(parsed, seen, std::move(record), line_no);
    } catch (const Json::exception& e) {
      parsed.errors.push_back({line_no, std::string("invalid JSON: ") + e.what()});
    } catch (const std::invalid_argument& e) {
      parsed.errors.push_back({line_no, e.what()});
    }
  }
  return parsed;
}

ParsedRecords parse_csv_records(std::istream& in) {
  static const char* const kColumns[11] = {
      "id",        "pred_cx",   "pred_cy",   "pred_w",   "pred_h",
      "pred_theta_deg", "target_cx", "target_cy", "target_w", "target_h",
      "target_theta_deg"};
  ParsedRecords parsed;
  std::set<std::string> seen;
  std::string line;
  std::size_t line_no = 0;
  std::vector<std::size_t> index;  // kColumns[i] lives at field index[i]
  std::size_t width = 0;

  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto fields = split(line, ',');
    if (index.empty()) {
      std::map<std::string, std::size_t, std::less<>> at;
      for (std::size_t i = 0; i < fields.size(); ++i) at[std::string(trim(fields[i]))] = i;
      for (const char* name : kColumns) {
        const auto it = at.find(name);
        if (it == at.end()) {
          throw CliError(kData, "CSV header on line " + std::to_string(line_no) +
                                    " lacks column '" + name + "'");
        }
        index.push_back(it->second);
      }
      width = fields.size();
      continue;
    }
    if (fields.size() != width) {
      parsed.errors.push_back({line_no, "expected " + std::to_string(width) +
                                            " fields, got " +
                                            std::to_string(fields.size())});
      continue;
    }
    double v[10];
    bool ok = true;
    for (std::size_t i = 0; i < 10 && ok; ++i) {
      const auto parsed_value = parse_double(fields[index[i + 1]]);
      if (!parsed_value) {
        parsed.errors.push_back({line_no, std::string("field '") + kColumns[i + 1] +
                                              "' is not a finite number"});
        ok = false;
      } else {
        v[i] = *parsed_value;
      }
    }
    if (!ok) continue;
    BoxPairRecord record;
    record.id = std::string(trim(fields[index[0]]));
    record.pred = degrees_to_box(v[0], v[1], v[2], v[3], v[4]);
    record.target = degrees_to_box(v[5], v[6], v[7], v[8], v[9]);
    track_id(parsed, seen, std::move(record), line_no);
  }
  return parsed;
}

int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"Oriented-box IoU approximations, losses, sweeps and fits", "obbloss"};
  app.require_subcommand(1);

  IouCommand iou;
  SweepCommand sweep;
  SurfaceCommand surf;
  FitCommand fitcmd;
  BatchCommand batch;
  iou.attach(app.add_subcommand("iou", "Exact SkewIoU, KFIoU, MKIoU and every loss for one pair"));
  sweep.attach(app.add_subcommand("sweep", "Width/height or angle sensitivity sweep"));
  surf.attach(app.add_subcommand("surface", "Loss surface over aspect ratio x angle offset"));
  fitcmd.attach(app.add_subcommand("fit", "Gradient-descent box fit against a target"));
  batch.attach(app.add_subcommand("batch", "Evaluate every pair in a JSONL/CSV file"));

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (app.got_subcommand("iou")) return iou.run(out);
    if (app.got_subcommand("sweep")) return sweep.run(out, err);
    if (app.got_subcommand("surface")) return surf.run(out, err);
    if (app.got_subcommand("fit")) return fitcmd.run(out);
    if (app.got_subcommand("batch")) return batch.run(out, err);
  } catch (const CliError& e) {
    err << "error: " << e.what() << '\n';
    return e.code();
  } catch (const InvalidBoxError& e) {
    err << "error: " << e.what() << '\n';
    return kData;
  } catch (const InvalidArgumentError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const NumericalFailureError& e) {
    err << "error: " << e.what() << '\n';
    return kNumerical;
  } catch (const DegenerateCovarianceError& e) {
    err << "error: " << e.what() << '\n';
    return kNumerical;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kData;
  }
  return kUsage;
}

}  // namespace obbloss::cli
