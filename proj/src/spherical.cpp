// Copyright (c) 2026 The spherevis Authors
// SPDX-License-Identifier: Apache-2.0

#include "spherevis/spherical.hpp"

#include <algorithm>
#include <cmath>

#include "spherevis/errors.hpp"

namespace spherevis {

namespace {

// Consecutive vertices closer than this (chord length) collapse to one.
constexpr double kDuplicateChord2 = 1e-24;

void drop_consecutive_duplicates(std::vector<Vec3>& verts) {
  if (verts.size() < 2) return;
  std::vector<Vec3> out;
  out.reserve(verts.size());
  for (const Vec3& v : verts) {
    if (!out.empty() && (v - out.back()).norm2() < kDuplicateChord2) continue;
    out.push_back(v);
  }
  while (out.size() >= 2 && (out.front() - out.back()).norm2() < kDuplicateChord2) {
    out.pop_back();
  }
  verts = std::move(out);
}

}  // namespace

namespace detail {

double signed_fan_area(std::span<const Vec3> vertices) {
  const std::size_t n = vertices.size();
  if (n < 3) return 0.0;
  // Sum of fan-triangle excesses in tangent half-angle form:
  //   tan(E/2) = a.(b x c) / (1 + a.b + b.c + c.a)
  // Exact for any spherical triangle inside an open hemisphere and keeps
  // full relative precision when the whole polygon is tiny.
  const Vec3& a = vertices[0];
  double total = 0.0;
  for (std::size_t k = 1; k + 1 < n; ++k) {
    const Vec3& b = vertices[k];
    const Vec3& c = vertices[k + 1];
    const double det = a.dot(b.cross(c));
    const double denom = 1.0 + a.dot(b) + b.dot(c) + c.dot(a);
    total += 2.0 * std::atan2(det, denom);
  }
  return total;
}

}  // namespace detail

SphericalPolygon make_spherical_polygon(std::vector<Vec3> directions) {
  for (Vec3& v : directions) {
    const double n = v.norm();
    if (!(n > 0.0)) throw DegeneratePolygon("zero-length direction");
    v = v / n;
  }
  drop_consecutive_duplicates(directions);
  if (directions.size() < 3) {
    throw DegeneratePolygon("fewer than 3 distinct vertices");
  }
  double area = detail::signed_fan_area(directions);
  if (area < 0.0) {
    std::reverse(directions.begin(), directions.end());
    area = -area;
  }
  if (area < kMinPolygonArea) {
    throw DegeneratePolygon("area below sliver threshold");
  }
  return SphericalPolygon{std::move(directions)};
}

bool validate(const SphericalPolygon& poly) {
  const auto& v = poly.vertices;
  const std::size_t n = v.size();
  if (n < 3) return false;
  for (const Vec3& p : v) {
    if (std::abs(p.norm() - 1.0) > 1e-9) return false;
  }
  // Hemisphere containment: the normalized centroid must see every vertex
  // at less than a quarter turn.
  Vec3 centroid{0, 0, 0};
  for (const Vec3& p : v) centroid += p;
  const double cn = centroid.norm();
  if (!(cn > 0.0)) return false;
  centroid = centroid / cn;
  for (const Vec3& p : v) {
    if (p.dot(centroid) <= 0.0) return false;
  }
  // Convexity and counterclockwise orientation: every vertex lies inside
  // every edge's interior half-space (within the clipping epsilon).
  for (std::size_t i = 0; i < n; ++i) {
    const Vec3 edge_normal = v[i].cross(v[(i + 1) % n]);
    const double en = edge_normal.norm();
    if (en < 1e-15) return false;
    const Vec3 unit_normal = edge_normal / en;
    for (std::size_t j = 0; j < n; ++j) {
      if (v[j].dot(unit_normal) < -kClipEps * 8) return false;
    }
  }
  const double area = detail::signed_fan_area(v);
  return area > 0.0 && area < 2.0 * kPi;
}

double solid_angle(const SphericalPolygon& poly) {
  if (poly.vertices.size() < 3) {
    throw DegeneratePolygon("solid_angle: fewer than 3 vertices");
  }
  const double area = detail::signed_fan_area(poly.vertices);
  if (area < kMinPolygonArea) {
    throw DegeneratePolygon("solid_angle: area below sliver threshold");
  }
  return area;
}

std::optional<SphericalPolygon> clip(const SphericalPolygon& poly,
                                     const GreatCircleHalfSpace& hs) {
  const auto& verts = poly.vertices;
  const std::size_t n = verts.size();
  std::vector<Vec3> out;
  out.reserve(n + 2);

  double d_prev = verts.empty() ? 0.0 : verts.back().dot(hs.normal);
  const Vec3* prev = verts.empty() ? nullptr : &verts.back();
  for (std::size_t i = 0; i < n; ++i) {
    const Vec3& cur = verts[i];
    const double d_cur = cur.dot(hs.normal);
    const bool in_prev = d_prev >= -kClipEps;
    const bool in_cur = d_cur >= -kClipEps;
    if (in_cur != in_prev) {
      // Crossing point on the great circle: the zero of the signed distance
      // along the chord, re-normalized (the plane passes through the
      // origin, so normalization stays on it).
      double t = d_prev / (d_prev - d_cur);
      t = std::clamp(t, 0.0, 1.0);
      const Vec3 p = (*prev + (cur - *prev) * t).normalized();
      out.push_back(p);
    }
    if (in_cur) out.push_back(cur);
    d_prev = d_cur;
    prev = &cur;
  }

  drop_consecutive_duplicates(out);
  if (out.size() < 3) return std::nullopt;
  if (detail::signed_fan_area(out) < kMinPolygonArea) return std::nullopt;
  return SphericalPolygon{std::move(out)};
}

std::optional<SphericalPolygon> intersect(const SphericalPolygon& a,
                                          const SphericalPolygon& b) {
  std::optional<SphericalPolygon> result = a;
  const std::size_t n = b.vertices.size();
  for (std::size_t i = 0; i < n && result; ++i) {
    const Vec3 raw = b.vertices[i].cross(b.vertices[(i + 1) % n]);
    const double len = raw.norm();
    if (len < 1e-15) continue;
    result = clip(*result, GreatCircleHalfSpace{raw / len});
  }
  return result;
}

namespace detail {

std::vector<GreatCircleHalfSpace> edge_half_spaces(const SphericalPolygon& poly) {
  const std::size_t n = poly.vertices.size();
  std::vector<GreatCircleHalfSpace> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Vec3 raw = poly.vertices[i].cross(poly.vertices[(i + 1) % n]);
    const double len = raw.norm();
    if (len < 1e-15) continue;
    out.push_back(GreatCircleHalfSpace{raw / len});
  }
  return out;
}

bool clipped_empty(const SphericalPolygon& poly,
                   const std::vector<GreatCircleHalfSpace>& half_spaces) {
  std::optional<SphericalPolygon> result = poly;
  for (const GreatCircleHalfSpace& hs : half_spaces) {
    result = clip(*result, hs);
    if (!result) return true;
  }
  return false;
}

// Shared by the public operation and the visibility engine (which also
// wants to know whether anything was actually removed).
bool subtract_one(const SphericalPolygon& fragment,
                  const std::vector<GreatCircleHalfSpace>& occluder_edges,
                  std::vector<SphericalPolygon>& out) {
  if (clipped_empty(fragment, occluder_edges)) {
    out.push_back(fragment);
    return false;
  }
  // Wedge decomposition of the occluder's complement: piece j is the part
  // of the fragment outside edge j but inside edges 1..j-1.  Pieces are
  // convex, pairwise interior-disjoint, and cover fragment \ occluder.
  std::optional<SphericalPolygon> remaining = fragment;
  for (const GreatCircleHalfSpace& edge : occluder_edges) {
    if (auto piece = clip(*remaining, edge.complement())) {
      out.push_back(std::move(*piece));
    }
    remaining = clip(*remaining, edge);
    if (!remaining) break;
  }
  // Whatever is left lies inside every occluder edge and is discarded.
  return true;
}

}  // namespace detail

std::vector<SphericalPolygon> subtract_from_fragments(
    const std::vector<SphericalPolygon>& fragments, const SphericalPolygon& occluder) {
  const auto edges = detail::edge_half_spaces(occluder);
  std::vector<SphericalPolygon> out;
  out.reserve(fragments.size());
  for (const SphericalPolygon& fragment : fragments) {
    detail::subtract_one(fragment, edges, out);
  }
  return out;
}

SphericalCap bounding_cap(const SphericalPolygon& poly) {
  Vec3 sum{0, 0, 0};
  for (const Vec3& v : poly.vertices) sum += v;
  const double sum_norm = sum.norm();
  const Vec3 axis = sum_norm > 0.0 ? sum / sum_norm : poly.vertices.front();
  double max_angle = 0.0;
  for (const Vec3& v : poly.vertices) {
    max_angle = std::max(max_angle, angle_between(axis, v));
  }
  // An edge arc between vertices within angle t of the axis stays within
  // t only while cos(t) >= 0.  Past a quarter turn the vertex radius no
  // longer bounds the edges, so fall back to the full sphere.
  if (max_angle + 1e-9 >= kPi / 2) {
    return SphericalCap{axis, kPi};
  }
  return SphericalCap{axis, max_angle + 1e-9};
}

bool caps_disjoint(const SphericalCap& a, const SphericalCap& b) {
  return angle_between(a.axis, b.axis) > a.angular_radius + b.angular_radius;
}

}  // namespace spherevis
