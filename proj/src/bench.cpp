// Copyright (c) 2026 The spherevis Authors
// SPDX-License-Identifier: Apache-2.0

#include "spherevis/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <stdexcept>

#include "spherevis/rng.hpp"
#include "spherevis/visibility.hpp"

namespace spherevis {

std::string backend_label(const Backend& backend, int jobs) {
  std::string label;
  switch (backend.kind) {
    case Backend::Kind::NaiveQuadratic: label = "naive"; break;
    case Backend::Kind::CapPruned: label = "pruned"; break;
    case Backend::Kind::MonteCarlo: label = "montecarlo"; break;
  }
  if (jobs > 1) label += "-j" + std::to_string(jobs);
  return label;
}

double fit_loglog_slope(std::span<const std::pair<std::size_t, std::uint64_t>> points) {
  if (points.size() < 2) {
    throw std::invalid_argument("fit_loglog_slope: need at least 2 points");
  }
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (const auto& [n, ns] : points) {
    const double x = std::log(static_cast<double>(n));
    const double y = std::log(static_cast<double>(std::max<std::uint64_t>(ns, 1)));
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double k = static_cast<double>(points.size());
  const double denom = k * sxx - sx * sx;
  if (denom == 0.0) {
    throw std::invalid_argument("fit_loglog_slope: points share one n");
  }
  return (k * sxy - sx * sy) / denom;
}

BenchReport run_scaling_bench(const BenchOptions& options) {
  if (options.n_values.empty() ||
      !std::is_sorted(options.n_values.begin(), options.n_values.end()) ||
      std::adjacent_find(options.n_values.begin(), options.n_values.end()) !=
          options.n_values.end()) {
    throw std::invalid_argument("run_scaling_bench: n_values must be ascending");
  }
  if (options.repetitions < 5) {
    throw std::invalid_argument("run_scaling_bench: need >= 5 repetitions");
  }
  if (options.backends.empty()) {
    throw std::invalid_argument("run_scaling_bench: no backends");
  }

  // One scene per n, shared by all backends so their points are comparable.
  std::vector<Scene> scenes;
  scenes.reserve(options.n_values.size());
  const double n0 = static_cast<double>(options.n_values.front());
  for (const std::size_t n : options.n_values) {
    SceneGenConfig cfg = options.scene_template;
    cfg.n_boxes = n;
    cfg.seed = SplitMix64::stream_seed(options.scene_template.seed, n);
    if (options.sparse_scaling) {
      cfg.area_half_extent =
          options.scene_template.area_half_extent * std::sqrt(static_cast<double>(n) / n0);
    }
    scenes.push_back(generate_scene(cfg));
  }

  BenchReport report;
  double sink = 0.0;
  for (const Backend& backend : options.backends) {
    const std::string label = backend_label(backend, options.jobs);
    std::vector<std::pair<std::size_t, std::uint64_t>> points;
    for (std::size_t s = 0; s < scenes.size(); ++s) {
      std::vector<std::uint64_t> durations;
      durations.reserve(static_cast<std::size_t>(options.repetitions));
      for (int rep = 0; rep < options.repetitions; ++rep) {
        const auto t0 = std::chrono::steady_clock::now();
        const std::vector<VisibilityRecord> records =
            visibility_all(scenes[s], backend, options.jobs);
        const auto t1 = std::chrono::steady_clock::now();
        durations.push_back(static_cast<std::uint64_t>(
            std::chrono::duration_cast<std::chrono::nanoseconds>(t1 - t0).count()));
        for (const VisibilityRecord& r : records) sink += r.omega;
      }
      std::sort(durations.begin(), durations.end());
      const std::size_t mid = durations.size() / 2;
      const std::uint64_t median =
          durations.size() % 2 == 1
              ? durations[mid]
              : (durations[mid - 1] + durations[mid]) / 2;
      report.records.push_back(
          {label, options.n_values[s], median, options.repetitions});
      points.emplace_back(options.n_values[s], median);
    }
    if (points.size() >= 2) {
      const std::size_t tail = std::max<std::size_t>((points.size() + 1) / 2, 2);
      report.slopes.push_back(
          {label, fit_loglog_slope(std::span(points).subspan(points.size() - tail))});
    }
  }
  // The sink keeps the timed calls observable; its value is irrelevant.
  if (!std::isfinite(sink)) {
    throw std::runtime_error("run_scaling_bench: non-finite solid angles");
  }
  return report;
}

std::string serialize_bench_csv(std::span<const BenchRecord> records) {
  std::string out(kBenchCsvHeader);
  out += '\n';
  for (const BenchRecord& rec : records) {
    out += rec.backend;
    out += ',';
    out += std::to_string(rec.n_boxes);
    out += ',';
    out += std::to_string(rec.median_ns);
    out += ',';
    out += std::to_string(rec.repetitions);
    out += '\n';
  }
  return out;
}

}  // namespace spherevis
