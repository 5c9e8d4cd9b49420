// Copyright (c) 2026 The spherevis Authors
// SPDX-License-Identifier: Apache-2.0
//
// Seeded Monte-Carlo estimator for projected solid angles and visibilities.
// Directions are sampled uniformly inside the target's bounding cap (exact
// cap-area correction), rays are tested with a slab intersector, and every
// sample is a pure function of (seed, index), so estimates are bit-identical
// across runs and thread counts.

#ifndef SPHEREVIS_RAY_ORACLE_HPP
#define SPHEREVIS_RAY_ORACLE_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include "spherevis/scene.hpp"
#include "spherevis/vec3.hpp"

namespace spherevis {

struct OracleConfig {
  std::uint64_t sample_count = 1'000'000;
  std::uint64_t seed = 0;
};

/// A binomial estimate.  `mean` is a visibility ratio in [0,1] for
/// estimate_visibility and a solid angle in steradians for
/// estimate_solid_angle; `std_error` is scaled the same way.
struct OracleEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::uint64_t samples_hit = 0;
  std::uint64_t samples_total = 0;
};

/// Smallest t > 0 with origin + t*dir on the box, by slab test in the box
/// frame.  Returns 0 for an origin on or inside the box.  `dir` must be
/// unit-norm.
std::optional<double> ray_box_intersect(const Vec3& origin, const Vec3& dir,
                                        const ObjectBox& box);

/// Estimate of the box's projected solid angle: 4*pi * (cap fraction) *
/// (hit rate) over sample_count directions drawn uniformly in the
/// silhouette's bounding cap.  Throws OriginInsideBox.
OracleEstimate estimate_solid_angle(const ObjectBox& box, const OracleConfig& cfg,
                                    int jobs = 1);

/// Estimate of box i's visibility: among sampled directions whose ray hits
/// box i, the fraction whose ray intersects no box of the occluder set.
/// Coverage is decided by occluder-set membership (center-depth ordering),
/// not by per-ray hit distance.  Throws InsufficientHits when fewer than
/// 100 sampled rays hit box i, and OriginInsideBox for a degenerate target.
OracleEstimate estimate_visibility(const Scene& scene, std::size_t i,
                                   const OracleConfig& cfg, int jobs = 1);

/// Everything the Monte-Carlo scene backend needs from one sampling pass.
struct McVisibility {
  OracleEstimate visibility;           // may be all-zero when hits < threshold
  OracleEstimate omega;                // solid-angle estimate from the same rays
  std::vector<std::int64_t> covering_ids;  // occluders covering >= 1 hit ray
  bool insufficient_hits = false;
};

McVisibility estimate_visibility_detail(const Scene& scene, std::size_t i,
                                        const OracleConfig& cfg, int jobs = 1);

/// Minimum hit count below which estimate_visibility refuses to report.
inline constexpr std::uint64_t kMinOracleHits = 100;

}  // namespace spherevis

#endif  // SPHEREVIS_RAY_ORACLE_HPP
