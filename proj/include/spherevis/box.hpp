// Copyright (c) 2026 The spherevis Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef SPHEREVIS_BOX_HPP
#define SPHEREVIS_BOX_HPP

#include <array>
#include <cstdint>
#include <string>
#include <string_view>

#include "spherevis/vec3.hpp"

namespace spherevis {

inline constexpr double kPi = 3.14159265358979323846;

/// Wrap an angle into [-pi, pi].
double normalize_angle(double radians);

enum class ClassLabel { Car, Pedestrian, Cyclist, Other };

std::string_view to_string(ClassLabel label);
/// Exact enum-name match; anything else is reported via the bool.
bool class_from_string(std::string_view text, ClassLabel& out);

/// Oriented 3D bounding box in the ego frame (x forward, y left, z up,
/// right-handed, origin at the ego sensor reference point).  `yaw` rotates
/// the box about the up axis; `length` runs along the box's local x,
/// `width` along local y, `height` along local z.  `center` is the
/// geometric center.
struct ObjectBox {
  std::int64_t id = 0;
  ClassLabel class_label = ClassLabel::Other;
  Vec3 center;
  double length = 0.0;
  double width = 0.0;
  double height = 0.0;
  double yaw = 0.0;

  bool valid() const {
    return length > 0.0 && width > 0.0 && height > 0.0 && yaw >= -kPi && yaw <= kPi;
  }

  Vec3 axis_x() const { return {std::cos(yaw), std::sin(yaw), 0.0}; }
  Vec3 axis_y() const { return {-std::sin(yaw), std::cos(yaw), 0.0}; }
  static constexpr Vec3 axis_z() { return {0.0, 0.0, 1.0}; }

  Vec3 half_dims() const { return {length * 0.5, width * 0.5, height * 0.5}; }

  /// World point of the local coordinate `p`.
  Vec3 to_world(const Vec3& p) const {
    return center + axis_x() * p.x + axis_y() * p.y + axis_z() * p.z;
  }

  /// World point expressed in the box frame.
  Vec3 to_local(const Vec3& p) const {
    const Vec3 d = p - center;
    return {d.dot(axis_x()), d.dot(axis_y()), d.dot(axis_z())};
  }

  /// Corner i has local sign bits (i&1 -> x, i&2 -> y, i&4 -> z).
  std::array<Vec3, 8> corners() const;

  /// Signed distance from the ego origin to the box surface; positive
  /// outside, negative inside.
  double origin_distance() const;

  double volume() const { return length * width * height; }
};

/// Margin below which the origin counts as inside the box (projection and
/// visibility undefined).
inline constexpr double kOriginMargin = 1e-6;

inline bool origin_inside(const ObjectBox& box) {
  return box.origin_distance() <= kOriginMargin;
}

}  // namespace spherevis

#endif  // SPHEREVIS_BOX_HPP
