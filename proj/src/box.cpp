// Copyright (c) 2026 The spherevis Authors
// SPDX-License-Identifier: Apache-2.0

#include "spherevis/box.hpp"

#include <algorithm>
#include <cmath>

namespace spherevis {

double normalize_angle(double radians) {
  double a = std::fmod(radians + kPi, 2.0 * kPi);
  if (a < 0.0) a += 2.0 * kPi;
  return a - kPi;
}

std::string_view to_string(ClassLabel label) {
  switch (label) {
    case ClassLabel::Car: return "Car";
    case ClassLabel::Pedestrian: return "Pedestrian";
    case ClassLabel::Cyclist: return "Cyclist";
    case ClassLabel::Other: return "Other";
  }
  return "Other";
}

bool class_from_string(std::string_view text, ClassLabel& out) {
  if (text == "Car") { out = ClassLabel::Car; return true; }
  if (text == "Pedestrian") { out = ClassLabel::Pedestrian; return true; }
  if (text == "Cyclist") { out = ClassLabel::Cyclist; return true; }
  if (text == "Other") { out = ClassLabel::Other; return true; }
  return false;
}

std::array<Vec3, 8> ObjectBox::corners() const {
  const Vec3 h = half_dims();
  const Vec3 ex = axis_x() * h.x;
  const Vec3 ey = axis_y() * h.y;
  const Vec3 ez = axis_z() * h.z;
  std::array<Vec3, 8> out;
  for (int i = 0; i < 8; ++i) {
    const double sx = (i & 1) ? 1.0 : -1.0;
    const double sy = (i & 2) ? 1.0 : -1.0;
    const double sz = (i & 4) ? 1.0 : -1.0;
    out[static_cast<std::size_t>(i)] = center + ex * sx + ey * sy + ez * sz;
  }
  return out;
}

double ObjectBox::origin_distance() const {
  const Vec3 p = to_local({0.0, 0.0, 0.0});
  const Vec3 h = half_dims();
  const double qx = std::abs(p.x) - h.x;
  const double qy = std::abs(p.y) - h.y;
  const double qz = std::abs(p.z) - h.z;
  const Vec3 outside{std::max(qx, 0.0), std::max(qy, 0.0), std::max(qz, 0.0)};
  const double inside = std::min(std::max({qx, qy, qz}), 0.0);
  return outside.norm() + inside;
}

}  // namespace spherevis
