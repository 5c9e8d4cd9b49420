// Copyright (c) 2026 The spherevis Authors
// SPDX-License-Identifier: Apache-2.0
//
// Visibility interchange format: the comma-separated record stream emitted
// by `spherevis compute` and consumed by `spherevis eval`.  One record per
// line,
//
//   frame_id,box_id,class,center_x,center_y,center_z,
//   length,width,height,yaw,omega_sr,visibility,degenerate
//
// with centers/dims/yaw/visibility at 6 decimals, omega_sr at 9, and the
// degenerate flag as 0/1.  The first line is a '#' header naming the
// columns and the format version; any column change bumps the version.
// Serialization followed by parsing followed by serialization reproduces
// the exact bytes.

#ifndef SPHEREVIS_INTERCHANGE_HPP
#define SPHEREVIS_INTERCHANGE_HPP

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "spherevis/scene.hpp"

namespace spherevis {

inline constexpr std::string_view kInterchangeHeader =
    "# spherevis-visibility-v1 frame_id,box_id,class,center_x,center_y,"
    "center_z,length,width,height,yaw,omega_sr,visibility,degenerate";

struct InterchangeRecord {
  std::string frame_id;
  std::int64_t box_id = 0;
  ClassLabel class_label = ClassLabel::Other;
  Vec3 center;
  double length = 0.0;
  double width = 0.0;
  double height = 0.0;
  double yaw = 0.0;
  double omega_sr = 0.0;
  double visibility = 0.0;  // 0 for degenerate records
  bool degenerate = false;
};

InterchangeRecord make_interchange_record(std::string frame_id, const ObjectBox& box,
                                          const VisibilityRecord& record);

/// The record's box, ego frame (class/center/dims/yaw round-trip losslessly
/// at the stated precision).
ObjectBox to_object_box(const InterchangeRecord& rec);

void append_interchange_row(std::string& out, const InterchangeRecord& rec);

/// Header plus one row per record.
std::string serialize_interchange(std::span<const InterchangeRecord> records);

/// Parse an interchange stream.  Throws ParseError on malformed rows, an
/// unknown header version, or a visibility outside [0,1].
std::vector<InterchangeRecord> parse_interchange(std::string_view text);

}  // namespace spherevis

#endif  // SPHEREVIS_INTERCHANGE_HPP
