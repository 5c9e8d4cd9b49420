// Copyright (c) 2026 The spherevis Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef SPHEREVIS_SCENE_GEN_HPP
#define SPHEREVIS_SCENE_GEN_HPP

#include <cstdint>

#include "spherevis/scene.hpp"

namespace spherevis {

struct SizeRange {
  double length_min = 0.0, length_max = 0.0;
  double width_min = 0.0, width_max = 0.0;
  double height_min = 0.0, height_max = 0.0;

  bool valid() const {
    return length_min > 0 && width_min > 0 && height_min > 0 &&
           length_max >= length_min && width_max >= width_min &&
           height_max >= height_min;
  }
};

/// Synthetic ground-plane scenes for tests and benchmarks.  Boxes sit on
/// z = ground_z with centers uniform in [-e, e]^2, classes drawn uniformly
/// from {Car, Pedestrian, Cyclist}, yaw uniform in [-pi, pi).  Candidates
/// closer than 1.5 m to the origin, candidates whose box would contain the
/// origin, and candidates within min_center_spacing of an existing center
/// are rejected and resampled.  Deterministic and platform-independent for
/// a fixed seed.
struct SceneGenConfig {
  std::size_t n_boxes = 0;
  double area_half_extent = 40.0;
  SizeRange car_size{3.5, 5.0, 1.6, 2.0, 1.4, 1.8};
  SizeRange pedestrian_size{0.5, 1.0, 0.5, 1.0, 1.6, 1.9};
  SizeRange cyclist_size{1.6, 2.0, 0.5, 0.9, 1.6, 1.9};
  double ground_z = -1.0;
  double min_center_spacing = 1.0;
  std::uint64_t seed = 0;

  bool valid() const {
    return area_half_extent > 0 && min_center_spacing >= 0 && car_size.valid() &&
           pedestrian_size.valid() && cyclist_size.valid();
  }
};

/// Minimum distance from the origin to any generated center.
inline constexpr double kOriginClearance = 1.5;

/// Throws GenerationExhausted after 1000 * n_boxes rejections, and
/// std::invalid_argument for an invalid config.
Scene generate_scene(const SceneGenConfig& cfg);

}  // namespace spherevis

#endif  // SPHEREVIS_SCENE_GEN_HPP
