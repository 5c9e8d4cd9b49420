// Copyright (c) 2026 The spherevis Authors
// SPDX-License-Identifier: Apache-2.0

#include "spherevis/scene_gen.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "spherevis/errors.hpp"
#include "spherevis/rng.hpp"

namespace spherevis {

Scene generate_scene(const SceneGenConfig& cfg) {
  if (!cfg.valid()) {
    throw std::invalid_argument("generate_scene: invalid config");
  }
  Scene scene;
  scene.frame_id = "synthetic-" + std::to_string(cfg.seed);
  scene.boxes.reserve(cfg.n_boxes);

  SplitMix64 rng(SplitMix64::stream_seed(cfg.seed, 0));
  const std::uint64_t budget = 1000 * static_cast<std::uint64_t>(cfg.n_boxes);
  std::uint64_t rejections = 0;
  while (scene.boxes.size() < cfg.n_boxes) {
    ObjectBox box;
    box.id = static_cast<std::int64_t>(scene.boxes.size());
    switch (rng.next_below(3)) {
      case 0: box.class_label = ClassLabel::Car; break;
      case 1: box.class_label = ClassLabel::Pedestrian; break;
      default: box.class_label = ClassLabel::Cyclist; break;
    }
    const SizeRange& size = box.class_label == ClassLabel::Car ? cfg.car_size
                            : box.class_label == ClassLabel::Pedestrian
                                ? cfg.pedestrian_size
                                : cfg.cyclist_size;
    box.center.x = rng.uniform(-cfg.area_half_extent, cfg.area_half_extent);
    box.center.y = rng.uniform(-cfg.area_half_extent, cfg.area_half_extent);
    box.length = rng.uniform(size.length_min, size.length_max);
    box.width = rng.uniform(size.width_min, size.width_max);
    box.height = rng.uniform(size.height_min, size.height_max);
    box.center.z = cfg.ground_z + box.height * 0.5;
    box.yaw = rng.uniform(-kPi, kPi);

    bool ok = std::hypot(box.center.x, box.center.y) >= kOriginClearance &&
              !origin_inside(box);
    for (std::size_t i = 0; ok && i < scene.boxes.size(); ++i) {
      const Vec3 d = scene.boxes[i].center - box.center;
      ok = std::hypot(d.x, d.y) >= cfg.min_center_spacing;
    }
    if (!ok) {
      if (++rejections > budget) {
        throw GenerationExhausted(
            "generate_scene: " + std::to_string(rejections) +
            " rejections for " + std::to_string(cfg.n_boxes) + " boxes; "
            "the requested density does not fit the area");
      }
      continue;
    }
    scene.boxes.push_back(box);
  }
  return scene;
}

}  // namespace spherevis
