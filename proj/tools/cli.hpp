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

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "obbloss/geometry.hpp"

namespace obbloss::cli {

/// Process exit codes.
enum ExitCode : int {
  kOk = 0,
  kUsage = 1,
  kData = 2,
  kNumerical = 3,
};

/// Error carrying the exit code it should map to.
class CliError : public std::exception {
 public:
  CliError(ExitCode code, std::string message)
      : code_(code), message_(std::move(message)) {}
  ExitCode code() const { return code_; }
  const char* what() const noexcept override { return message_.c_str(); }

 private:
  ExitCode code_;
  std::string message_;
};

/// Parses "cx,cy,w,h,theta_deg". Throws CliError(kUsage) on malformed text;
/// the box itself is not validated.
OrientedBox parse_box_literal(std::string_view text);

struct BoxPairRecord {
  std::string id;
  OrientedBox pred;
  OrientedBox target;
};

struct RecordError {
  std::size_t line = 0;
  std::string message;
};

struct ParsedRecords {
  std::vector<BoxPairRecord> records;
  std::vector<RecordError> errors;
};

/// JSON lines: {"id": ..., "pred": {cx,cy,w,h,theta_deg}, "target": {...}}.
ParsedRecords parse_jsonl_records(std::istream& in);

/// CSV with header id,pred_cx,pred_cy,pred_w,pred_h,pred_theta_deg,
/// target_cx,target_cy,target_w,target_h,target_theta_deg (any column order).
ParsedRecords parse_csv_records(std::istream& in);

/// Entry point shared by the executable and the tests.
int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err);

}  // namespace obbloss::cli
