// Copyright (c) 2026 The spherevis Authors
// SPDX-License-Identifier: Apache-2.0

#include "spherevis/visibility.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "spherevis/errors.hpp"
#include "spherevis/ray_oracle.hpp"
#include "spherevis/spherical.hpp"

namespace spherevis {

bool Scene::ids_unique() const {
  std::vector<std::int64_t> ids;
  ids.reserve(boxes.size());
  for (const ObjectBox& box : boxes) ids.push_back(box.id);
  std::sort(ids.begin(), ids.end());
  return std::adjacent_find(ids.begin(), ids.end()) == ids.end();
}

bool closer_than(const ObjectBox& a, const ObjectBox& b) {
  const double da = depth(a);
  const double db = depth(b);
  if (da < db - kDepthTieEps) return true;
  if (db < da - kDepthTieEps) return false;
  return a.id < b.id;
}

std::vector<std::size_t> occluder_set(const Scene& scene, std::size_t i) {
  if (i >= scene.boxes.size()) {
    throw std::out_of_range("occluder_set: box index out of range");
  }
  std::vector<std::size_t> out;
  const ObjectBox& target = scene.boxes[i];
  for (std::size_t j = 0; j < scene.boxes.size(); ++j) {
    if (j != i && closer_than(scene.boxes[j], target)) out.push_back(j);
  }
  // Exact (depth, id) sort; closer_than's tolerance is only for membership.
  std::sort(out.begin(), out.end(), [&](std::size_t a, std::size_t b) {
    const double da = depth(scene.boxes[a]);
    const double db = depth(scene.boxes[b]);
    if (da != db) return da < db;
    return scene.boxes[a].id < scene.boxes[b].id;
  });
  return out;
}

namespace {

// Everything derived from one box's outline, shared across target and
// occluder roles so the naive and pruned backends consume the same bits.
// cap_cos/cap_sin cache the cap radius trig for the pairwise disjointness
// test, which runs once per (target, occluder) pair and must stay cheap.
struct Projection {
  bool degenerate = false;
  SphericalPolygon outline;
  SphericalCap cap;
  double cap_cos = 1.0;
  double cap_sin = 0.0;
  double omega = 0.0;
  std::vector<GreatCircleHalfSpace> edges;
};

Projection project(const ObjectBox& box) {
  Projection p;
  if (origin_inside(box)) {
    p.degenerate = true;
    return p;
  }
  p.outline = silhouette(box);
  p.cap = bounding_cap(p.outline);
  p.cap_cos = std::cos(p.cap.angular_radius);
  p.cap_sin = std::sin(p.cap.angular_radius);
  p.omega = solid_angle(p.outline);
  p.edges = detail::edge_half_spaces(p.outline);
  return p;
}

// Exact (depth, id) ordering computed once per scene.  Walking `order`
// and filtering with the same tie rule as closer_than reproduces
// occluder_set for every target without a per-target sort.
struct DepthOrder {
  std::vector<std::size_t> order;  // box indices sorted by (depth, id)
  std::vector<std::size_t> pos;    // position of each box index in order
  std::vector<double> depths;
};

DepthOrder depth_order(const Scene& scene) {
  DepthOrder d;
  const std::size_t n = scene.boxes.size();
  d.depths.reserve(n);
  for (const ObjectBox& box : scene.boxes) d.depths.push_back(depth(box));
  d.order.resize(n);
  for (std::size_t i = 0; i < n; ++i) d.order[i] = i;
  std::sort(d.order.begin(), d.order.end(), [&](std::size_t a, std::size_t b) {
    if (d.depths[a] != d.depths[b]) return d.depths[a] < d.depths[b];
    return scene.boxes[a].id < scene.boxes[b].id;
  });
  d.pos.resize(n);
  for (std::size_t k = 0; k < n; ++k) d.pos[d.order[k]] = k;
  return d;
}

VisibilityRecord exact_one(const Scene& scene, std::size_t i,
                           Backend::Kind kind,
                           const std::vector<Projection>& projections,
                           const DepthOrder& by_depth,
                           std::vector<std::string>* diagnostics) {
  const ObjectBox& box = scene.boxes[i];
  const Projection& target = projections[i];

  VisibilityRecord rec;
  rec.box_id = box.id;
  if (target.degenerate) {
    rec.degenerate = true;
    if (diagnostics) {
      diagnostics->push_back("box id " + std::to_string(box.id) +
                             ": origin inside box, visibility undefined");
    }
    return rec;
  }
  rec.omega = target.omega;

  std::vector<SphericalPolygon> fragments = {target.outline};
  std::vector<SphericalPolygon> scratch;

  // Returns true once nothing of the target's projection remains.
  auto apply_occluder = [&](std::size_t j) {
    const Projection& occ = projections[j];
    if (occ.degenerate) {
      if (diagnostics) {
        diagnostics->push_back("box id " + std::to_string(box.id) +
                               ": occluder id " +
                               std::to_string(scene.boxes[j].id) +
                               " contains the origin, skipped");
      }
      return false;
    }
    if (kind == Backend::Kind::CapPruned) {
      // caps_disjoint via cos(r_t + r_o) from the cached trig terms; the
      // cosine comparison is only meaningful while the radii sum stays
      // below pi.
      const double radii = target.cap.angular_radius + occ.cap.angular_radius;
      if (radii < kPi &&
          target.cap.axis.dot(occ.cap.axis) <
              target.cap_cos * occ.cap_cos - target.cap_sin * occ.cap_sin) {
        return false;
      }
    }
    scratch.clear();
    bool touched = false;
    for (const SphericalPolygon& fragment : fragments) {
      touched |= detail::subtract_one(fragment, occ.edges, scratch);
    }
    if (touched) rec.occluder_ids.push_back(scene.boxes[j].id);
    fragments.swap(scratch);
    return fragments.empty();
  };

  if (kind == Backend::Kind::NaiveQuadratic) {
    // The reference backend treats every target independently, rebuilding
    // and sorting its occluder set from scratch.
    for (const std::size_t j : occluder_set(scene, i)) {
      if (apply_occluder(j)) break;
    }
  } else {
    // The pruned backend walks the shared depth ordering; entries past the
    // target's position matter only inside the depth tie window, where a
    // smaller id still wins.
    const double target_depth = by_depth.depths[i];
    for (std::size_t k = 0; k < by_depth.order.size(); ++k) {
      const std::size_t j = by_depth.order[k];
      const double dj = by_depth.depths[j];
      if (k > by_depth.pos[i] && dj > target_depth + kDepthTieEps) break;
      bool is_occluder;
      if (dj < target_depth - kDepthTieEps) {
        is_occluder = true;
      } else if (target_depth < dj - kDepthTieEps) {
        is_occluder = false;
      } else {
        is_occluder = scene.boxes[j].id < box.id;
      }
      if (j == i || !is_occluder) continue;
      if (apply_occluder(j)) break;
    }
  }

  double remaining = 0.0;
  for (const SphericalPolygon& fragment : fragments) {
    remaining += solid_angle(fragment);
  }
  rec.occluded_omega = std::max(0.0, rec.omega - remaining);
  rec.visibility = std::clamp(remaining / rec.omega, 0.0, 1.0);
  return rec;
}

VisibilityRecord monte_carlo_one(const Scene& scene, std::size_t i,
                                 const Backend& backend,
                                 std::vector<std::string>* diagnostics) {
  const ObjectBox& box = scene.boxes[i];
  VisibilityRecord rec;
  rec.box_id = box.id;
  if (origin_inside(box)) {
    rec.degenerate = true;
    if (diagnostics) {
      diagnostics->push_back("box id " + std::to_string(box.id) +
                             ": origin inside box, visibility undefined");
    }
    return rec;
  }
  const OracleConfig cfg{backend.sample_count, backend.seed};
  const McVisibility mc = estimate_visibility_detail(scene, i, cfg);
  rec.omega = mc.omega.mean;
  rec.occluder_ids = mc.covering_ids;
  if (mc.insufficient_hits) {
    if (diagnostics) {
      diagnostics->push_back(
          "box id " + std::to_string(box.id) + ": only " +
          std::to_string(mc.visibility.samples_total) + " of " +
          std::to_string(backend.sample_count) +
          " sampled rays hit the box, estimate withheld");
    }
    return rec;
  }
  rec.visibility = mc.visibility.mean;
  rec.occluded_omega = rec.omega * (1.0 - mc.visibility.mean);
  return rec;
}

}  // namespace

VisibilityRecord visibility_one(const Scene& scene, std::size_t i,
                                const Backend& backend,
                                std::vector<std::string>* diagnostics) {
  if (i >= scene.boxes.size()) {
    throw std::out_of_range("visibility_one: box index out of range");
  }
  if (backend.kind == Backend::Kind::MonteCarlo) {
    return monte_carlo_one(scene, i, backend, diagnostics);
  }
  std::vector<Projection> projections;
  projections.reserve(scene.boxes.size());
  for (const ObjectBox& box : scene.boxes) projections.push_back(project(box));
  return exact_one(scene, i, backend.kind, projections, depth_order(scene),
                   diagnostics);
}

std::vector<VisibilityRecord> visibility_all(
    const Scene& scene, const Backend& backend, int jobs,
    std::vector<std::string>* diagnostics) {
  if (!scene.ids_unique()) {
    throw std::invalid_argument("visibility_all: duplicate box ids in scene");
  }
  const std::size_t n = scene.boxes.size();
  std::vector<VisibilityRecord> records(n);
  if (n == 0) return records;

  std::vector<Projection> projections;
  DepthOrder by_depth;
  if (backend.exact()) {
    projections.reserve(n);
    for (const ObjectBox& box : scene.boxes) {
      projections.push_back(project(box));
    }
    by_depth = depth_order(scene);
  }

  // Per-box diagnostic buckets keep the merged order independent of the
  // thread schedule.
  std::vector<std::vector<std::string>> local_diags(n);
  auto run_one = [&](std::size_t i) {
    std::vector<std::string>* diag = diagnostics ? &local_diags[i] : nullptr;
    if (backend.exact()) {
      records[i] = exact_one(scene, i, backend.kind, projections, by_depth,
                             diag);
    } else {
      records[i] = monte_carlo_one(scene, i, backend, diag);
    }
  };

  const std::size_t workers =
      std::min<std::size_t>(n, static_cast<std::size_t>(std::max(jobs, 1)));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) run_one(i);
  } else {
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> failures(workers);
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        try {
          for (std::size_t i = w; i < n; i += workers) run_one(i);
        } catch (...) {
          failures[w] = std::current_exception();
        }
      });
    }
    for (std::thread& t : pool) t.join();
    for (const std::exception_ptr& failure : failures) {
      if (failure) std::rethrow_exception(failure);
    }
  }

  if (diagnostics) {
    for (std::vector<std::string>& bucket : local_diags) {
      for (std::string& line : bucket) diagnostics->push_back(std::move(line));
    }
  }
  return records;
}

}  // namespace spherevis
