// Copyright (c) 2026 The spherevis Authors
// SPDX-License-Identifier: Apache-2.0
//
// KITTI label ingestion.  One object per line, whitespace separated:
//
//   type truncated occluded alpha x1 y1 x2 y2 h w l x y z rotation_y [score]
//
// 15 fields for ground-truth labels, 16 for predictions (trailing score).
// `(x, y, z)` is the bottom-face center in the camera frame (x right,
// y down, z forward); `rotation_y` rotates about the camera y axis.  The
// ego frame used everywhere else is x forward, y left, z up, so under the
// KittiCamera convention
//
//   x_ego = z_cam,  y_ego = -x_cam,  z_ego = -y_cam,
//   yaw_ego = -rotation_y - pi/2,
//
// and the center is lifted by height/2 along ego up.  No per-frame
// calibration is applied; the fixed nominal transform is a documented
// approximation (visibility is insensitive to the small mount offset).

#ifndef SPHEREVIS_KITTI_HPP
#define SPHEREVIS_KITTI_HPP

#include <string>
#include <string_view>
#include <vector>

#include "spherevis/scene.hpp"

namespace spherevis {

enum class FrameConvention {
  KittiCamera,  // camera-frame bottom-center locations, rotation_y yaw
  EgoDirect,    // locations already ego-frame geometric centers, yaw as-is
};

struct FrameConfig {
  FrameConvention convention = FrameConvention::KittiCamera;
};

/// Non-fatal parse note (skipped line and why).  `line` is 1-based.
struct ParseDiagnostic {
  int line = 0;
  std::string message;
};

struct LabelFile {
  Scene scene;
  /// Per emitted box: the trailing score of a 16-field prediction line,
  /// NaN for 15-field label lines.
  std::vector<double> scores;
};

/// Parse one KITTI label or prediction file.  DontCare lines are skipped;
/// well-formed lines that fail box invariants are skipped with a
/// diagnostic; wrong field counts or non-numeric fields throw ParseError
/// with the line number.  Box ids are assigned by emission order.
LabelFile parse_kitti_label_file(std::string_view text, const FrameConfig& cfg,
                                 std::vector<ParseDiagnostic>* diagnostics = nullptr);

Scene parse_kitti_labels(std::string_view text, const FrameConfig& cfg,
                         std::vector<ParseDiagnostic>* diagnostics = nullptr);

}  // namespace spherevis

#endif  // SPHEREVIS_KITTI_HPP
