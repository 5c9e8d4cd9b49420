// Copyright (c) 2026 The spherevis Authors
// SPDX-License-Identifier: Apache-2.0
//
// Per-box visibility over a scene: each box's projected solid angle, minus
// the parts covered by the projections of all strictly closer boxes,
// normalized by the box's own solid angle.  A box with no closer box is
// fully visible.

#ifndef SPHEREVIS_VISIBILITY_HPP
#define SPHEREVIS_VISIBILITY_HPP

#include <cstddef>
#include <string>
#include <vector>

#include "spherevis/scene.hpp"

namespace spherevis {

/// Indices of the boxes strictly closer to the origin than box i under the
/// center-depth ordering, sorted by ascending depth (ties by id).
std::vector<std::size_t> occluder_set(const Scene& scene, std::size_t i);

/// Visibility of one box.  Exact backends subtract each occluder's full
/// silhouette from the box's projection in ascending depth order; the
/// MonteCarlo backend returns the ray-sampling estimate in the same record
/// shape.  Occluders that contain the origin are skipped with a diagnostic.
/// A degenerate target (origin inside) yields a flagged record, not an
/// error.
VisibilityRecord visibility_one(const Scene& scene, std::size_t i,
                                const Backend& backend,
                                std::vector<std::string>* diagnostics = nullptr);

/// One record per box, in input order.  `jobs` > 1 distributes boxes over
/// worker threads; results are identical to the single-threaded run.
/// Throws std::invalid_argument when box ids are not unique.
std::vector<VisibilityRecord> visibility_all(
    const Scene& scene, const Backend& backend, int jobs = 1,
    std::vector<std::string>* diagnostics = nullptr);

}  // namespace spherevis

#endif  // SPHEREVIS_VISIBILITY_HPP
