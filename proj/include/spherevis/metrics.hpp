// Copyright (c) 2026 The spherevis Authors
// SPDX-License-Identifier: Apache-2.0
//
// Evaluation of externally predicted visibilities against the algorithmic
// values: IoU-based true-positive matching (false positives and false
// negatives are excluded) and the mean absolute error per class.

#ifndef SPHEREVIS_METRICS_HPP
#define SPHEREVIS_METRICS_HPP

#include <cstdint>
#include <span>
#include <vector>

#include "spherevis/scene.hpp"

namespace spherevis {

enum class IouKind {
  Bev,     // area IoU of the yaw-rotated ground footprints
  Full3d,  // volume IoU (footprint intersection times vertical overlap)
};

struct MatchConfig {
  double iou_threshold = 0.25;
  IouKind iou_kind = IouKind::Bev;
};

/// IoU of two boxes, in [0,1].
double box_iou(const ObjectBox& a, const ObjectBox& b, IouKind kind);

/// A matched (prediction, ground truth) pair carrying both visibilities.
struct EvalPair {
  std::int64_t pred_box_id = 0;
  std::int64_t gt_box_id = 0;
  ClassLabel class_label = ClassLabel::Other;
  double iou = 0.0;
  double v_pred = 0.0;
  double v_algo = 0.0;
};

/// Greedy per-class matching: candidate pairs sorted by descending IoU
/// (ties by ids, so the result is deterministic), each box used at most
/// once, pairs below the threshold discarded.  v_pred/v_algo are left zero
/// for the caller to fill.
std::vector<EvalPair> match_true_positives(const Scene& pred, const Scene& gt,
                                           const MatchConfig& cfg);

/// |v_pred - v_algo|; both arguments in [0,1].
double absolute_error(double v_pred, double v_algo);

struct ClassAe {
  ClassLabel class_label = ClassLabel::Other;
  std::size_t count = 0;
  double mean_ae = 0.0;
};

/// Classes with zero pairs are absent, not reported as zero.
struct AeSummary {
  std::vector<ClassAe> per_class;
  std::size_t total_count = 0;
  double overall_mean = 0.0;
};

AeSummary summarize(std::span<const EvalPair> pairs);

}  // namespace spherevis

#endif  // SPHEREVIS_METRICS_HPP
