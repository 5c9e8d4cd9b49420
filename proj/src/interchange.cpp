// Copyright (c) 2026 The spherevis Authors
// SPDX-License-Identifier: Apache-2.0

#include "spherevis/interchange.hpp"

#include <charconv>
#include <cstdio>
#include <stdexcept>

#include "spherevis/errors.hpp"

namespace spherevis {

namespace {

void append_fixed(std::string& out, double value, int decimals) {
  char buf[64];
  const int n = std::snprintf(buf, sizeof buf, "%.*f", decimals, value);
  out.append(buf, static_cast<std::size_t>(n));
}

double numeric_field(std::string_view token, int line, const char* name) {
  double value = 0.0;
  const char* first = token.data();
  const auto [ptr, ec] = std::from_chars(first, first + token.size(), value);
  if (ec != std::errc{} || ptr != first + token.size()) {
    throw ParseError(line, std::string(name) + " is not a number: '" +
                               std::string(token) + "'");
  }
  return value;
}

}  // namespace

InterchangeRecord make_interchange_record(std::string frame_id, const ObjectBox& box,
                                          const VisibilityRecord& record) {
  InterchangeRecord rec;
  rec.frame_id = std::move(frame_id);
  rec.box_id = record.box_id;
  rec.class_label = box.class_label;
  rec.center = box.center;
  rec.length = box.length;
  rec.width = box.width;
  rec.height = box.height;
  rec.yaw = box.yaw;
  rec.omega_sr = record.omega;
  rec.visibility = record.visibility.value_or(0.0);
  rec.degenerate = record.degenerate;
  return rec;
}

ObjectBox to_object_box(const InterchangeRecord& rec) {
  ObjectBox box;
  box.id = rec.box_id;
  box.class_label = rec.class_label;
  box.center = rec.center;
  box.length = rec.length;
  box.width = rec.width;
  box.height = rec.height;
  box.yaw = rec.yaw;
  return box;
}

void append_interchange_row(std::string& out, const InterchangeRecord& rec) {
  if (rec.frame_id.find_first_of(",\n\r") != std::string::npos) {
    throw std::invalid_argument("frame_id must not contain ',' or line breaks: '" +
                                rec.frame_id + "'");
  }
  out += rec.frame_id;
  out += ',';
  out += std::to_string(rec.box_id);
  out += ',';
  out += to_string(rec.class_label);
  for (const double value : {rec.center.x, rec.center.y, rec.center.z,
                             rec.length, rec.width, rec.height, rec.yaw}) {
    out += ',';
    append_fixed(out, value, 6);
  }
  out += ',';
  append_fixed(out, rec.omega_sr, 9);
  out += ',';
  append_fixed(out, rec.visibility, 6);
  out += ',';
  out += rec.degenerate ? '1' : '0';
  out += '\n';
}

std::string serialize_interchange(std::span<const InterchangeRecord> records) {
  std::string out;
  out.reserve(kInterchangeHeader.size() + 1 + records.size() * 96);
  out += kInterchangeHeader;
  out += '\n';
  for (const InterchangeRecord& rec : records) append_interchange_row(out, rec);
  return out;
}

std::vector<InterchangeRecord> parse_interchange(std::string_view text) {
  std::vector<InterchangeRecord> records;
  int line_no = 0;
  bool header_seen = false;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::string_view line = text.substr(pos, eol - pos);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    pos = eol + 1;
    ++line_no;
    if (line.empty()) continue;

    if (!header_seen) {
      if (line != kInterchangeHeader) {
        throw ParseError(line_no, "unsupported header, expected '" +
                                      std::string(kInterchangeHeader) + "'");
      }
      header_seen = true;
      continue;
    }
    if (line.front() == '#') continue;

    std::vector<std::string_view> fields;
    std::size_t field_pos = 0;
    while (true) {
      const std::size_t comma = line.find(',', field_pos);
      if (comma == std::string_view::npos) {
        fields.push_back(line.substr(field_pos));
        break;
      }
      fields.push_back(line.substr(field_pos, comma - field_pos));
      field_pos = comma + 1;
    }
    if (fields.size() != 13) {
      throw ParseError(line_no, "expected 13 columns, got " +
                                    std::to_string(fields.size()));
    }

    InterchangeRecord rec;
    rec.frame_id = std::string(fields[0]);
    {
      const std::string_view token = fields[1];
      const char* first = token.data();
      const auto [ptr, ec] = std::from_chars(first, first + token.size(), rec.box_id);
      if (ec != std::errc{} || ptr != first + token.size()) {
        throw ParseError(line_no, "box_id is not an integer: '" +
                                      std::string(token) + "'");
      }
    }
    if (!class_from_string(fields[2], rec.class_label)) {
      throw ParseError(line_no, "unknown class '" + std::string(fields[2]) + "'");
    }
    rec.center.x = numeric_field(fields[3], line_no, "center_x");
    rec.center.y = numeric_field(fields[4], line_no, "center_y");
    rec.center.z = numeric_field(fields[5], line_no, "center_z");
    rec.length = numeric_field(fields[6], line_no, "length");
    rec.width = numeric_field(fields[7], line_no, "width");
    rec.height = numeric_field(fields[8], line_no, "height");
    rec.yaw = numeric_field(fields[9], line_no, "yaw");
    rec.omega_sr = numeric_field(fields[10], line_no, "omega_sr");
    rec.visibility = numeric_field(fields[11], line_no, "visibility");
    if (!(rec.visibility >= 0.0 && rec.visibility <= 1.0)) {
      throw ParseError(line_no, "visibility outside [0, 1]: '" +
                                    std::string(fields[11]) + "'");
    }
    if (fields[12] == "0") {
      rec.degenerate = false;
    } else if (fields[12] == "1") {
      rec.degenerate = true;
    } else {
      throw ParseError(line_no, "degenerate flag must be 0 or 1, got '" +
                                    std::string(fields[12]) + "'");
    }
    records.push_back(std::move(rec));
  }
  if (!header_seen) {
    throw ParseError(1, "missing interchange header");
  }
  return records;
}

}  // namespace spherevis
