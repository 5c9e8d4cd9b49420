// Copyright (c) 2026 The spherevis Authors
// SPDX-License-Identifier: Apache-2.0
//
// Silhouette extraction: the closed loop of box edges separating
// front-facing from back-facing faces as seen from the origin.  For a
// convex box viewed from an exterior point the projection of this loop
// equals the union of the six face projections, so no polygon union is
// ever needed.

#include <array>
#include <stdexcept>
#include <string>
#include <vector>

#include "spherevis/errors.hpp"
#include "spherevis/spherical.hpp"

namespace spherevis {

namespace {

// Face index: 2*axis + (positive side ? 1 : 0), axes in box-local order
// x (length), y (width), z (height).
struct Edge {
  int corner_a;
  int corner_b;
  int face_1;
  int face_2;
};

// The 12 edges of the unit-cube corner lattice, each with its two adjacent
// faces.  Corner bit k carries the sign of axis k.
constexpr std::array<Edge, 12> make_edges() {
  std::array<Edge, 12> edges{};
  int idx = 0;
  for (int axis = 0; axis < 3; ++axis) {
    const int b = (axis + 1) % 3;
    const int c = (axis + 2) % 3;
    for (int sb = 0; sb < 2; ++sb) {
      for (int sc = 0; sc < 2; ++sc) {
        const int base = (sb << b) | (sc << c);
        edges[static_cast<std::size_t>(idx++)] = Edge{
            base,
            base | (1 << axis),
            2 * b + sb,
            2 * c + sc,
        };
      }
    }
  }
  return edges;
}

constexpr std::array<Edge, 12> kEdges = make_edges();

}  // namespace

SphericalPolygon silhouette(const ObjectBox& box) {
  if (origin_inside(box)) {
    throw OriginInsideBox("origin inside or touching box id " + std::to_string(box.id));
  }

  const std::array<Vec3, 8> corners = box.corners();

  // Front/back classification of the six faces with respect to the origin.
  // Faces whose plane passes within kFaceEps of the origin count as
  // back-facing, so edge-on faces contribute nothing.
  const std::array<Vec3, 3> axes = {box.axis_x(), box.axis_y(), box.axis_z()};
  const Vec3 h = box.half_dims();
  const std::array<double, 3> half = {h.x, h.y, h.z};
  std::array<bool, 6> front{};
  for (int axis = 0; axis < 3; ++axis) {
    // Signed distance from the origin to each face plane, along the
    // outward normal: -dot(center, n) - half_extent.
    const double along = box.center.dot(axes[static_cast<std::size_t>(axis)]);
    front[static_cast<std::size_t>(2 * axis + 1)] = (along + half[static_cast<std::size_t>(axis)]) < -kFaceEps;
    front[static_cast<std::size_t>(2 * axis)] = (along - half[static_cast<std::size_t>(axis)]) > kFaceEps;
  }

  // Adjacency over silhouette edges (front/back transition edges).  Each
  // involved corner has exactly two such edges: the loop is closed.
  std::array<std::array<int, 2>, 8> next{};
  std::array<int, 8> degree{};
  degree.fill(0);
  int start = -1;
  for (const Edge& e : kEdges) {
    if (front[static_cast<std::size_t>(e.face_1)] == front[static_cast<std::size_t>(e.face_2)]) continue;
    next[static_cast<std::size_t>(e.corner_a)][degree[static_cast<std::size_t>(e.corner_a)]++] = e.corner_b;
    next[static_cast<std::size_t>(e.corner_b)][degree[static_cast<std::size_t>(e.corner_b)]++] = e.corner_a;
    if (start < 0) start = e.corner_a;
  }
  if (start < 0) {
    throw OriginInsideBox("no silhouette edge for box id " + std::to_string(box.id));
  }

  std::vector<Vec3> loop;
  loop.reserve(6);
  int prev = -1;
  int cur = start;
  do {
    if (degree[static_cast<std::size_t>(cur)] != 2) {
      throw std::logic_error("silhouette loop is not closed");
    }
    loop.push_back(corners[static_cast<std::size_t>(cur)]);
    const auto& nbrs = next[static_cast<std::size_t>(cur)];
    const int nxt = (nbrs[0] == prev) ? nbrs[1] : nbrs[0];
    prev = cur;
    cur = nxt;
  } while (cur != start && loop.size() <= 8);
  if (cur != start) {
    throw std::logic_error("silhouette loop did not close");
  }

  // Projection by normalization; make_spherical_polygon canonicalizes the
  // orientation and drops duplicate directions (corners collinear with the
  // origin).
  return make_spherical_polygon(std::move(loop));
}

}  // namespace spherevis
