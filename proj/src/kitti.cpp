// Copyright (c) 2026 The spherevis Authors
// SPDX-License-Identifier: Apache-2.0

#include "spherevis/kitti.hpp"

#include <charconv>
#include <cmath>
#include <limits>
#include <vector>

#include "spherevis/errors.hpp"

namespace spherevis {

namespace {

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t pos = 0;
  while (pos < line.size()) {
    while (pos < line.size() && (line[pos] == ' ' || line[pos] == '\t' || line[pos] == '\r')) ++pos;
    const std::size_t start = pos;
    while (pos < line.size() && line[pos] != ' ' && line[pos] != '\t' && line[pos] != '\r') ++pos;
    if (pos > start) fields.push_back(line.substr(start, pos - start));
  }
  return fields;
}

double numeric_field(std::string_view token, int line, int index) {
  double value = 0.0;
  const char* first = token.data();
  const char* last = first + token.size();
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc{} || ptr != last) {
    throw ParseError(line, "field " + std::to_string(index + 1) +
                               " is not a number: '" + std::string(token) + "'");
  }
  return value;
}

}  // namespace

LabelFile parse_kitti_label_file(std::string_view text, const FrameConfig& cfg,
                                 std::vector<ParseDiagnostic>* diagnostics) {
  LabelFile out;
  std::int64_t next_id = 0;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t eol = text.find('\n', pos);
    const std::size_t len = (eol == std::string_view::npos ? text.size() : eol) - pos;
    const std::string_view line = text.substr(pos, len);
    pos += len + 1;
    ++line_no;
    if (eol == std::string_view::npos && line.empty()) break;

    const std::vector<std::string_view> fields = split_fields(line);
    if (fields.empty()) continue;
    if (fields.size() != 15 && fields.size() != 16) {
      throw ParseError(line_no, "expected 15 or 16 fields, got " +
                                    std::to_string(fields.size()));
    }
    // Numeric fields are validated even on skipped lines, so malformed
    // text never passes silently.
    double f[15] = {};
    for (int k = 1; k < static_cast<int>(fields.size()); ++k) {
      f[k - 1] = numeric_field(fields[static_cast<std::size_t>(k)], line_no, k);
    }
    if (fields[0] == "DontCare") continue;

    const double h = f[7];
    const double w = f[8];
    const double l = f[9];
    const double x = f[10];
    const double y = f[11];
    const double z = f[12];
    const double ry = f[13];

    ObjectBox box;
    box.length = l;
    box.width = w;
    box.height = h;
    if (cfg.convention == FrameConvention::KittiCamera) {
      // Camera frame (x right, y down, z forward) to ego frame (x forward,
      // y left, z up); location is the bottom-face center, so the
      // geometric center sits height/2 higher.
      box.center = Vec3{z, -x, -y + h * 0.5};
      box.yaw = normalize_angle(-ry - kPi * 0.5);
    } else {
      box.center = Vec3{x, y, z};
      box.yaw = normalize_angle(ry);
    }
    if (!class_from_string(fields[0], box.class_label)) {
      box.class_label = ClassLabel::Other;
    }

    bool finite = true;
    for (const double value : {box.center.x, box.center.y, box.center.z,
                               box.length, box.width, box.height, box.yaw}) {
      finite = finite && std::isfinite(value);
    }
    if (!finite || !box.valid()) {
      if (diagnostics) {
        diagnostics->push_back(
            {line_no, "skipped '" + std::string(fields[0]) +
                          "': non-positive or non-finite box dimensions"});
      }
      continue;
    }

    box.id = next_id++;
    out.scene.boxes.push_back(box);
    out.scores.push_back(fields.size() == 16
                             ? f[14]
                             : std::numeric_limits<double>::quiet_NaN());
  }
  return out;
}

Scene parse_kitti_labels(std::string_view text, const FrameConfig& cfg,
                         std::vector<ParseDiagnostic>* diagnostics) {
  return parse_kitti_label_file(text, cfg, diagnostics).scene;
}

}  // namespace spherevis
