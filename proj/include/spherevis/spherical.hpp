// Copyright (c) 2026 The spherevis Authors
// SPDX-License-Identifier: Apache-2.0
//
// Spherical-polygon geometry for box projections.  A box seen from an
// exterior point subtends a convex cone of directions; its trace on the
// unit sphere is a convex spherical polygon bounded by minor great-circle
// arcs and contained in an open hemisphere.  Everything here is exact
// closed-form geometry: areas come from the spherical excess, boolean
// operations from great-circle half-space clipping.

#ifndef SPHEREVIS_SPHERICAL_HPP
#define SPHEREVIS_SPHERICAL_HPP

#include <optional>
#include <span>
#include <vector>

#include "spherevis/box.hpp"
#include "spherevis/vec3.hpp"

namespace spherevis {

/// Epsilon on signed distances used by all half-space classification.
inline constexpr double kClipEps = 1e-9;

/// Polygons with less spherical area than this are treated as empty
/// (clipping slivers below arc-plane intersection noise).
inline constexpr double kMinPolygonArea = 1e-12;

/// Faces whose plane passes within this distance of the origin are
/// classified back-facing, so edge-on faces never contribute.
inline constexpr double kFaceEps = 1e-9;

/// Half of the sphere bounded by the great circle with the given unit
/// normal; contains p iff dot(p, normal) >= -kClipEps.
struct GreatCircleHalfSpace {
  Vec3 normal;

  bool contains(const Vec3& p, double eps = kClipEps) const {
    return p.dot(normal) >= -eps;
  }
  GreatCircleHalfSpace complement() const { return {-normal}; }
};

/// Convex spherical polygon.  Invariants (maintained by every constructor
/// path in this module, checked by `validate`):
///   - vertices are unit-norm,
///   - consecutive vertices are joined by the minor great-circle arc,
///   - counterclockwise as seen from outside the sphere (positive excess),
///   - convex, contained in an open hemisphere, area in (0, 2*pi).
struct SphericalPolygon {
  std::vector<Vec3> vertices;

  std::size_t size() const { return vertices.size(); }
};

/// Canonicalize an arbitrary convex vertex loop: normalizes vertices, drops
/// consecutive duplicates, and flips orientation to counterclockwise.
/// Throws DegeneratePolygon when fewer than 3 distinct vertices survive or
/// the enclosed area falls below kMinPolygonArea.
SphericalPolygon make_spherical_polygon(std::vector<Vec3> directions);

/// Check all SphericalPolygon invariants (unit norm within 1e-9, convexity,
/// hemisphere containment, positive area).  Intended for tests and for
/// validating externally supplied polygons.
bool validate(const SphericalPolygon& poly);

/// Spherical area (= solid angle, steradians) by the spherical excess,
/// evaluated as a fan of triangle excesses in tangent half-angle form
/// (Van Oosterom & Strackee), which keeps full relative precision for
/// polygons far smaller than a steradian.
/// Throws DegeneratePolygon for polygons with fewer than 3 vertices or
/// area below kMinPolygonArea.
double solid_angle(const SphericalPolygon& poly);

/// Portion of `poly` inside `hs`.  New vertices lie exactly on the great
/// circle.  Empty (nullopt) when nothing of substance remains.
std::optional<SphericalPolygon> clip(const SphericalPolygon& poly,
                                     const GreatCircleHalfSpace& hs);

/// Convex intersection: `a` clipped by every edge half-space of `b`.
std::optional<SphericalPolygon> intersect(const SphericalPolygon& a,
                                          const SphericalPolygon& b);

/// Subtract a convex occluder from a set of pairwise interior-disjoint
/// convex fragments.  The complement of the occluder is decomposed into
/// edge-anchored wedges (outside edge j, inside edges 1..j-1) and each
/// fragment is clipped by each wedge, so the result is again a disjoint
/// convex cover of (union of fragments) minus occluder.
std::vector<SphericalPolygon> subtract_from_fragments(
    const std::vector<SphericalPolygon>& fragments,
    const SphericalPolygon& occluder);

/// Directions within `angular_radius` of `axis`.
struct SphericalCap {
  Vec3 axis;
  double angular_radius = 0.0;

  bool contains(const Vec3& dir) const {
    return angle_between(axis, dir) <= angular_radius;
  }
};

/// Conservative cap around a polygon: axis through the normalized vertex
/// centroid, radius to the farthest vertex plus 1e-9 slack.  The cap
/// contains the whole polygon region, not just its vertices: an edge arc
/// stays within the farthest-vertex angle while that angle is below a
/// quarter turn, so when the vertex radius reaches pi/2 the cap degrades
/// to the full sphere rather than under-contain the edges.
SphericalCap bounding_cap(const SphericalPolygon& poly);

/// True when the caps cannot share any direction; disjoint caps imply the
/// generating polygons are disjoint, never the other way round.
bool caps_disjoint(const SphericalCap& a, const SphericalCap& b);

/// Projection of a box onto the unit sphere around the ego origin.  The
/// union of the six face projections of a convex box viewed from outside
/// equals the projection of its silhouette loop (the edges whose adjacent
/// faces differ in front/back classification), so the silhouette corners
/// are projected by normalization and canonicalized.
/// Throws OriginInsideBox when the origin is inside or within kOriginMargin
/// of the surface.
SphericalPolygon silhouette(const ObjectBox& box);

namespace detail {
/// Raw signed fan excess without degeneracy checks; positive for
/// counterclockwise loops.  Exposed for the clipping internals and tests.
double signed_fan_area(std::span<const Vec3> vertices);

/// Interior half-space of every (non-degenerate) edge, in edge order.
std::vector<GreatCircleHalfSpace> edge_half_spaces(const SphericalPolygon& poly);

/// True when clipping `poly` by every half-space leaves nothing.
bool clipped_empty(const SphericalPolygon& poly,
                   const std::vector<GreatCircleHalfSpace>& half_spaces);

/// One fragment's share of subtract_from_fragments, with precomputed
/// occluder edges; returns whether the occluder actually removed anything.
bool subtract_one(const SphericalPolygon& fragment,
                  const std::vector<GreatCircleHalfSpace>& occluder_edges,
                  std::vector<SphericalPolygon>& out);
}  // namespace detail

}  // namespace spherevis

#endif  // SPHEREVIS_SPHERICAL_HPP
