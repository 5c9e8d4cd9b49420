// Copyright (c) 2026 The spherevis Authors
// SPDX-License-Identifier: Apache-2.0
//
// Runtime-vs-box-count measurement for the visibility backends.  Timing
// covers visibility_all only (scene generation excluded); each point is
// the median of >= 5 repetitions, and growth is summarized as the
// least-squares slope of log(time) against log(n) over the upper half of
// the measured n values.

#ifndef SPHEREVIS_BENCH_HPP
#define SPHEREVIS_BENCH_HPP

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "spherevis/scene.hpp"
#include "spherevis/scene_gen.hpp"

namespace spherevis {

struct BenchRecord {
  std::string backend;
  std::size_t n_boxes = 0;
  std::uint64_t median_ns = 0;
  int repetitions = 0;
};

struct SlopeFit {
  std::string backend;
  double slope = 0.0;
};

struct BenchReport {
  std::vector<BenchRecord> records;
  std::vector<SlopeFit> slopes;
};

struct BenchOptions {
  std::vector<Backend> backends{Backend::naive(), Backend::pruned()};
  std::vector<std::size_t> n_values{100, 200, 400, 800, 1600};
  int repetitions = 5;
  /// Scene template; n_boxes and seed are overridden per point.
  SceneGenConfig scene_template;
  /// Keep box density constant by scaling the placement half-extent with
  /// sqrt(n / n_values.front()).
  bool sparse_scaling = true;
  /// Worker threads inside visibility_all; backends are labeled
  /// "name-jN" when jobs > 1.
  int jobs = 1;
};

std::string backend_label(const Backend& backend, int jobs);

/// Least-squares slope of log(median_ns) vs log(n).
double fit_loglog_slope(std::span<const std::pair<std::size_t, std::uint64_t>> points);

/// Runs every backend over every n.  Requires ascending n_values and
/// repetitions >= 5 (std::invalid_argument otherwise).  Slopes are fitted
/// over the largest ceil(k/2) n values.
BenchReport run_scaling_bench(const BenchOptions& options);

inline constexpr std::string_view kBenchCsvHeader =
    "# spherevis-bench-v1 backend,n_boxes,median_ns,repetitions";

std::string serialize_bench_csv(std::span<const BenchRecord> records);

}  // namespace spherevis

#endif  // SPHEREVIS_BENCH_HPP
