// Copyright (c) 2026 The spherevis Authors
// SPDX-License-Identifier: Apache-2.0

#include "spherevis/metrics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

namespace spherevis {

namespace {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
};

double cross2(const Vec2& o, const Vec2& a, const Vec2& b) {
  return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

std::array<Vec2, 4> footprint(const ObjectBox& box) {
  const double c = std::cos(box.yaw);
  const double s = std::sin(box.yaw);
  const double hl = box.length * 0.5;
  const double hw = box.width * 0.5;
  // Counterclockwise in the ground plane.
  const std::array<Vec2, 4> local = {
      Vec2{hl, hw}, Vec2{-hl, hw}, Vec2{-hl, -hw}, Vec2{hl, -hw}};
  std::array<Vec2, 4> out;
  for (std::size_t i = 0; i < 4; ++i) {
    out[i] = Vec2{box.center.x + c * local[i].x - s * local[i].y,
                  box.center.y + s * local[i].x + c * local[i].y};
  }
  return out;
}

double polygon_area(const std::vector<Vec2>& poly) {
  double twice = 0.0;
  for (std::size_t i = 0, n = poly.size(); i < n; ++i) {
    const Vec2& a = poly[i];
    const Vec2& b = poly[(i + 1) % n];
    twice += a.x * b.y - a.y * b.x;
  }
  return 0.5 * std::abs(twice);
}

// Sutherland-Hodgman in the plane: subject clipped by the convex clip
// polygon (counterclockwise).
std::vector<Vec2> clip_convex(std::vector<Vec2> subject,
                              const std::array<Vec2, 4>& clip) {
  for (std::size_t e = 0; e < 4 && !subject.empty(); ++e) {
    const Vec2& ca = clip[e];
    const Vec2& cb = clip[(e + 1) % 4];
    std::vector<Vec2> out;
    out.reserve(subject.size() + 2);
    for (std::size_t i = 0, n = subject.size(); i < n; ++i) {
      const Vec2& p = subject[i];
      const Vec2& q = subject[(i + 1) % n];
      const double dp = cross2(ca, cb, p);
      const double dq = cross2(ca, cb, q);
      if (dp >= 0.0) out.push_back(p);
      if ((dp > 0.0 && dq < 0.0) || (dp < 0.0 && dq > 0.0)) {
        const double t = dp / (dp - dq);
        out.push_back(Vec2{p.x + t * (q.x - p.x), p.y + t * (q.y - p.y)});
      }
    }
    subject = std::move(out);
  }
  return subject;
}

double bev_intersection(const ObjectBox& a, const ObjectBox& b) {
  const std::array<Vec2, 4> fa = footprint(a);
  const std::array<Vec2, 4> fb = footprint(b);
  const std::vector<Vec2> overlap =
      clip_convex(std::vector<Vec2>(fa.begin(), fa.end()), fb);
  if (overlap.size() < 3) return 0.0;
  return polygon_area(overlap);
}

}  // namespace

double box_iou(const ObjectBox& a, const ObjectBox& b, IouKind kind) {
  if (!a.valid() || !b.valid()) {
    throw std::invalid_argument("box_iou: invalid box");
  }
  const double area_a = a.length * a.width;
  const double area_b = b.length * b.width;
  const double inter_area = bev_intersection(a, b);
  if (kind == IouKind::Bev) {
    const double uni = area_a + area_b - inter_area;
    return uni > 0.0 ? std::clamp(inter_area / uni, 0.0, 1.0) : 0.0;
  }
  const double a_lo = a.center.z - a.height * 0.5;
  const double a_hi = a.center.z + a.height * 0.5;
  const double b_lo = b.center.z - b.height * 0.5;
  const double b_hi = b.center.z + b.height * 0.5;
  const double dz = std::max(0.0, std::min(a_hi, b_hi) - std::max(a_lo, b_lo));
  const double inter_vol = inter_area * dz;
  const double uni = a.volume() + b.volume() - inter_vol;
  return uni > 0.0 ? std::clamp(inter_vol / uni, 0.0, 1.0) : 0.0;
}

std::vector<EvalPair> match_true_positives(const Scene& pred, const Scene& gt,
                                           const MatchConfig& cfg) {
  struct Candidate {
    double iou;
    std::size_t pred_idx;
    std::size_t gt_idx;
  };
  std::vector<Candidate> candidates;
  for (std::size_t p = 0; p < pred.boxes.size(); ++p) {
    for (std::size_t g = 0; g < gt.boxes.size(); ++g) {
      if (pred.boxes[p].class_label != gt.boxes[g].class_label) continue;
      const double iou = box_iou(pred.boxes[p], gt.boxes[g], cfg.iou_kind);
      if (iou >= cfg.iou_threshold) candidates.push_back({iou, p, g});
    }
  }
  std::sort(candidates.begin(), candidates.end(),
            [&](const Candidate& a, const Candidate& b) {
              if (a.iou != b.iou) return a.iou > b.iou;
              const auto ka = std::pair(pred.boxes[a.pred_idx].id, gt.boxes[a.gt_idx].id);
              const auto kb = std::pair(pred.boxes[b.pred_idx].id, gt.boxes[b.gt_idx].id);
              return ka < kb;
            });

  std::vector<char> pred_used(pred.boxes.size(), 0);
  std::vector<char> gt_used(gt.boxes.size(), 0);
  std::vector<EvalPair> pairs;
  for (const Candidate& c : candidates) {
    if (pred_used[c.pred_idx] || gt_used[c.gt_idx]) continue;
    pred_used[c.pred_idx] = 1;
    gt_used[c.gt_idx] = 1;
    EvalPair pair;
    pair.pred_box_id = pred.boxes[c.pred_idx].id;
    pair.gt_box_id = gt.boxes[c.gt_idx].id;
    pair.class_label = pred.boxes[c.pred_idx].class_label;
    pair.iou = c.iou;
    pairs.push_back(pair);
  }
  return pairs;
}

double absolute_error(double v_pred, double v_algo) {
  if (!(v_pred >= 0.0 && v_pred <= 1.0) || !(v_algo >= 0.0 && v_algo <= 1.0)) {
    throw std::invalid_argument("absolute_error: visibility outside [0, 1]");
  }
  return std::abs(v_pred - v_algo);
}

AeSummary summarize(std::span<const EvalPair> pairs) {
  AeSummary summary;
  constexpr std::array<ClassLabel, 4> kOrder = {
      ClassLabel::Car, ClassLabel::Pedestrian, ClassLabel::Cyclist,
      ClassLabel::Other};
  double total = 0.0;
  for (const ClassLabel label : kOrder) {
    std::size_t count = 0;
    double sum = 0.0;
    for (const EvalPair& pair : pairs) {
      if (pair.class_label != label) continue;
      ++count;
      sum += absolute_error(pair.v_pred, pair.v_algo);
    }
    if (count == 0) continue;
    summary.per_class.push_back({label, count, sum / static_cast<double>(count)});
    summary.total_count += count;
    total += sum;
  }
  if (summary.total_count > 0) {
    summary.overall_mean = total / static_cast<double>(summary.total_count);
  }
  return summary;
}

}  // namespace spherevis
