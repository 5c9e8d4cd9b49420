// Copyright (c) 2026 The spherevis Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef SPHEREVIS_SCENE_HPP
#define SPHEREVIS_SCENE_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "spherevis/box.hpp"

namespace spherevis {

/// A set of boxes with the ego origin implicitly at (0,0,0).
struct Scene {
  std::vector<ObjectBox> boxes;
  std::string frame_id;

  /// All box ids unique within the scene.
  bool ids_unique() const;
};

/// Per-box result of the visibility computation.
struct VisibilityRecord {
  std::int64_t box_id = 0;
  /// Projected solid angle of the box, steradians.
  double omega = 0.0;
  /// Part of omega covered by the projections of closer boxes.
  double occluded_omega = 0.0;
  /// (omega - occluded_omega) / omega, clamped to [0,1].  Unset when the
  /// record is degenerate or a Monte-Carlo estimate had too few hits.
  std::optional<double> visibility;
  /// Ids of the closer boxes whose projection actually intersected this
  /// box's remaining projection, in ascending depth order.
  std::vector<std::int64_t> occluder_ids;
  /// Origin inside the box; omega/visibility undefined.
  bool degenerate = false;
};

/// How a scene's visibilities are computed.
struct Backend {
  enum class Kind {
    NaiveQuadratic,  // exact reference; each target independently rebuilds,
                     // sorts, and subtracts its full occluder set
    CapPruned,       // exact; shares one depth ordering across targets and
                     // skips closer boxes whose bounding caps are disjoint
    MonteCarlo,      // seeded ray-sampling estimate
  };

  Kind kind = Kind::CapPruned;
  std::uint64_t sample_count = 1'000'000;  // MonteCarlo only
  std::uint64_t seed = 0;                  // MonteCarlo only

  static Backend naive() { return {Kind::NaiveQuadratic, 0, 0}; }
  static Backend pruned() { return {Kind::CapPruned, 0, 0}; }
  static Backend monte_carlo(std::uint64_t samples, std::uint64_t seed) {
    return {Kind::MonteCarlo, samples, seed};
  }
  bool exact() const { return kind != Kind::MonteCarlo; }
};

/// Depth ordering: distance from the origin to the box center, with ties
/// (within 1e-9) broken by smaller id counted as closer.
inline constexpr double kDepthTieEps = 1e-9;

inline double depth(const ObjectBox& box) { return box.center.norm(); }

bool closer_than(const ObjectBox& a, const ObjectBox& b);

}  // namespace spherevis

#endif  // SPHEREVIS_SCENE_HPP
