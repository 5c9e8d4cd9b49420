// Copyright (c) 2026 The spherevis Authors
// SPDX-License-Identifier: Apache-2.0

#include "spherevis/ray_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <exception>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "spherevis/errors.hpp"
#include "spherevis/rng.hpp"
#include "spherevis/spherical.hpp"
#include "spherevis/visibility.hpp"

namespace spherevis {

std::optional<double> ray_box_intersect(const Vec3& origin, const Vec3& dir,
                                        const ObjectBox& box) {
  const Vec3 ax = box.axis_x();
  const Vec3 ay = box.axis_y();
  const Vec3 az = box.axis_z();
  const Vec3 rel = origin - box.center;
  const Vec3 o{rel.dot(ax), rel.dot(ay), rel.dot(az)};
  const Vec3 d{dir.dot(ax), dir.dot(ay), dir.dot(az)};
  const Vec3 h = box.half_dims();

  double t_near = 0.0;
  double t_far = std::numeric_limits<double>::infinity();
  const double oc[3] = {o.x, o.y, o.z};
  const double dc[3] = {d.x, d.y, d.z};
  const double hc[3] = {h.x, h.y, h.z};
  for (int k = 0; k < 3; ++k) {
    if (dc[k] == 0.0) {
      if (std::abs(oc[k]) > hc[k]) return std::nullopt;
      continue;
    }
    const double inv = 1.0 / dc[k];
    double t1 = (-hc[k] - oc[k]) * inv;
    double t2 = (hc[k] - oc[k]) * inv;
    if (t1 > t2) std::swap(t1, t2);
    t_near = std::max(t_near, t1);
    t_far = std::min(t_far, t2);
    if (t_near > t_far) return std::nullopt;
  }
  return t_near;
}

namespace {

// Orthonormal frame and entry-angle cosine of a sampling cap.
struct CapFrame {
  Vec3 axis;
  Vec3 t1;
  Vec3 t2;
  double cos_alpha = 1.0;
  double solid_angle = 0.0;
};

CapFrame cap_frame(const SphericalCap& cap) {
  CapFrame f;
  f.axis = cap.axis;
  const Vec3 ref = std::abs(cap.axis.z) < 0.9 ? Vec3{0.0, 0.0, 1.0}
                                              : Vec3{1.0, 0.0, 0.0};
  f.t1 = cap.axis.cross(ref).normalized();
  f.t2 = cap.axis.cross(f.t1);
  f.cos_alpha = std::cos(std::min(cap.angular_radius, kPi));
  f.solid_angle = 2.0 * kPi * (1.0 - f.cos_alpha);
  return f;
}

// Direction k of the stream, uniform over the cap.  Depends only on
// (stream, k): partitioning k-ranges over threads cannot change any sample.
Vec3 sample_direction(const CapFrame& f, std::uint64_t stream, std::uint64_t k) {
  const double u1 = SplitMix64::to_unit_double(SplitMix64::at(stream, 2 * k));
  const double u2 = SplitMix64::to_unit_double(SplitMix64::at(stream, 2 * k + 1));
  const double cos_t = 1.0 - u1 * (1.0 - f.cos_alpha);
  const double sin_t = std::sqrt(std::max(0.0, 1.0 - cos_t * cos_t));
  const double phi = 2.0 * kPi * u2;
  return f.axis * cos_t + (f.t1 * std::cos(phi) + f.t2 * std::sin(phi)) * sin_t;
}

OracleEstimate binomial(double scale, std::uint64_t hit, std::uint64_t total) {
  OracleEstimate e;
  e.samples_hit = hit;
  e.samples_total = total;
  if (total == 0) return e;
  const double p = static_cast<double>(hit) / static_cast<double>(total);
  e.mean = scale * p;
  e.std_error = scale * std::sqrt(p * (1.0 - p) / static_cast<double>(total));
  return e;
}

// Runs body(worker, begin, end) over a partition of [0, n).  Worker 0 runs
// on the calling thread when jobs <= 1.
void parallel_ranges(std::uint64_t n, int jobs,
                     const std::function<void(int, std::uint64_t, std::uint64_t)>& body) {
  const int workers = std::max(jobs, 1);
  if (workers == 1 || n == 0) {
    body(0, 0, n);
    return;
  }
  const std::uint64_t w64 = static_cast<std::uint64_t>(workers);
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> failures(static_cast<std::size_t>(workers));
  pool.reserve(static_cast<std::size_t>(workers));
  for (int w = 0; w < workers; ++w) {
    const std::uint64_t begin = n * static_cast<std::uint64_t>(w) / w64;
    const std::uint64_t end = n * (static_cast<std::uint64_t>(w) + 1) / w64;
    pool.emplace_back([&, w, begin, end] {
      try {
        body(w, begin, end);
      } catch (...) {
        failures[static_cast<std::size_t>(w)] = std::current_exception();
      }
    });
  }
  for (std::thread& t : pool) t.join();
  for (const std::exception_ptr& failure : failures) {
    if (failure) std::rethrow_exception(failure);
  }
}

}  // namespace

OracleEstimate estimate_solid_angle(const ObjectBox& box, const OracleConfig& cfg,
                                    int jobs) {
  const SphericalPolygon outline = silhouette(box);
  const CapFrame frame = cap_frame(bounding_cap(outline));
  const std::uint64_t stream =
      SplitMix64::stream_seed(cfg.seed, static_cast<std::uint64_t>(box.id));

  const int workers = std::max(jobs, 1);
  std::vector<std::uint64_t> hits(static_cast<std::size_t>(workers), 0);
  parallel_ranges(cfg.sample_count, workers,
                  [&](int w, std::uint64_t begin, std::uint64_t end) {
                    std::uint64_t local = 0;
                    for (std::uint64_t k = begin; k < end; ++k) {
                      const Vec3 dir = sample_direction(frame, stream, k);
                      if (ray_box_intersect(Vec3{}, dir, box)) ++local;
                    }
                    hits[static_cast<std::size_t>(w)] = local;
                  });
  std::uint64_t hit = 0;
  for (const std::uint64_t h : hits) hit += h;
  return binomial(frame.solid_angle, hit, cfg.sample_count);
}

McVisibility estimate_visibility_detail(const Scene& scene, std::size_t i,
                                        const OracleConfig& cfg, int jobs) {
  if (i >= scene.boxes.size()) {
    throw std::out_of_range("estimate_visibility_detail: box index out of range");
  }
  const ObjectBox& target = scene.boxes[i];
  const SphericalPolygon outline = silhouette(target);
  const SphericalCap target_cap = bounding_cap(outline);
  const CapFrame frame = cap_frame(target_cap);
  const std::uint64_t stream =
      SplitMix64::stream_seed(cfg.seed, static_cast<std::uint64_t>(target.id));

  // Candidate occluders: closer boxes whose projection cap can overlap the
  // sampling cap.  Every sampled direction lies inside the sampling cap, so
  // a box outside it can never cover a sampled ray.
  std::vector<std::size_t> candidates;
  for (const std::size_t j : occluder_set(scene, i)) {
    const ObjectBox& occ = scene.boxes[j];
    if (origin_inside(occ)) continue;
    const SphericalCap occ_cap = bounding_cap(silhouette(occ));
    const double gap = angle_between(target_cap.axis, occ_cap.axis) -
                       (target_cap.angular_radius + occ_cap.angular_radius);
    if (gap > 1e-9) continue;
    candidates.push_back(j);
  }

  const int workers = std::max(jobs, 1);
  const std::size_t n_cand = candidates.size();
  std::vector<std::uint64_t> hits(static_cast<std::size_t>(workers), 0);
  std::vector<std::uint64_t> uncovered(static_cast<std::size_t>(workers), 0);
  std::vector<std::vector<char>> covering(
      static_cast<std::size_t>(workers), std::vector<char>(n_cand, 0));

  parallel_ranges(
      cfg.sample_count, workers, [&](int w, std::uint64_t begin, std::uint64_t end) {
        std::uint64_t local_hits = 0;
        std::uint64_t local_uncovered = 0;
        std::vector<char>& flags = covering[static_cast<std::size_t>(w)];
        for (std::uint64_t k = begin; k < end; ++k) {
          const Vec3 dir = sample_direction(frame, stream, k);
          if (!ray_box_intersect(Vec3{}, dir, target)) continue;
          ++local_hits;
          bool covered = false;
          for (std::size_t c = 0; c < n_cand; ++c) {
            if (ray_box_intersect(Vec3{}, dir, scene.boxes[candidates[c]])) {
              flags[c] = 1;
              covered = true;
            }
          }
          if (!covered) ++local_uncovered;
        }
        hits[static_cast<std::size_t>(w)] = local_hits;
        uncovered[static_cast<std::size_t>(w)] = local_uncovered;
      });

  std::uint64_t hit = 0;
  std::uint64_t clear = 0;
  std::vector<char> any(n_cand, 0);
  for (int w = 0; w < workers; ++w) {
    hit += hits[static_cast<std::size_t>(w)];
    clear += uncovered[static_cast<std::size_t>(w)];
    for (std::size_t c = 0; c < n_cand; ++c) {
      any[c] = static_cast<char>(any[c] | covering[static_cast<std::size_t>(w)][c]);
    }
  }

  McVisibility out;
  out.omega = binomial(frame.solid_angle, hit, cfg.sample_count);
  for (std::size_t c = 0; c < n_cand; ++c) {
    if (any[c]) out.covering_ids.push_back(scene.boxes[candidates[c]].id);
  }
  if (hit < kMinOracleHits) {
    out.insufficient_hits = true;
    out.visibility.samples_total = hit;
    return out;
  }
  out.visibility = binomial(1.0, clear, hit);
  return out;
}

OracleEstimate estimate_visibility(const Scene& scene, std::size_t i,
                                   const OracleConfig& cfg, int jobs) {
  const McVisibility detail = estimate_visibility_detail(scene, i, cfg, jobs);
  if (detail.insufficient_hits) {
    throw InsufficientHits(
        "box id " + std::to_string(scene.boxes[i].id) + ": " +
        std::to_string(detail.visibility.samples_total) + " of " +
        std::to_string(cfg.sample_count) +
        " sampled rays hit the box (need " + std::to_string(kMinOracleHits) + ")");
  }
  return detail.visibility;
}

}  // namespace spherevis
