// Copyright (c) 2026 The spherevis Authors
// SPDX-License-Identifier: Apache-2.0
//
// spherevis: per-box visibility of 3D bounding boxes seen from the ego
// origin, via exact spherical occlusion geometry or a seeded Monte-Carlo
// oracle.
//
//   compute  label file or directory -> interchange rows
//   oracle   sampling estimate for one box of one frame
//   eval     predicted visibilities vs. the algorithmic values
//   bench    runtime scaling of the exact backends
//
// Stdout carries data, stderr carries diagnostics.  Exit codes: 0 success,
// 1 input error, 2 I/O failure, 3 statistical insufficiency.

#include <algorithm>
#include <cstdio>
#include <charconv>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "spherevis/bench.hpp"
#include "spherevis/errors.hpp"
#include "spherevis/interchange.hpp"
#include "spherevis/kitti.hpp"
#include "spherevis/metrics.hpp"
#include "spherevis/ray_oracle.hpp"
#include "spherevis/rng.hpp"
#include "spherevis/visibility.hpp"

namespace fs = std::filesystem;
using namespace spherevis;

namespace {

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw IoError("read failure on '" + path.string() + "'");
  return std::move(buf).str();
}

// Empty path means stdout.
void write_output(const std::string& data, const std::string& path) {
  if (path.empty()) {
    std::cout << data;
    std::cout.flush();
    if (!std::cout) throw IoError("write failure on stdout");
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << data;
  out.flush();
  if (!out) throw IoError("write failure on '" + path + "'");
}

struct Frame {
  std::string frame_id;
  Scene scene;
  std::vector<double> scores;  // prediction visibilities, NaN for labels
};

// A file is one frame named by its stem; a directory is its *.txt files in
// stem order.
std::vector<fs::path> frame_paths(const std::string& input) {
  std::error_code ec;
  const fs::file_status status = fs::status(input, ec);
  if (ec || status.type() == fs::file_type::not_found) {
    throw IoError("input '" + input + "' does not exist");
  }
  if (status.type() != fs::file_type::directory) return {fs::path(input)};
  std::vector<fs::path> paths;
  for (const fs::directory_entry& entry : fs::directory_iterator(input)) {
    if (entry.is_regular_file() && entry.path().extension() == ".txt") {
      paths.push_back(entry.path());
    }
  }
  std::sort(paths.begin(), paths.end(), [](const fs::path& a, const fs::path& b) {
    return a.stem().string() < b.stem().string();
  });
  if (paths.empty()) throw IoError("no .txt files in directory '" + input + "'");
  return paths;
}

Frame load_frame(const fs::path& path, const FrameConfig& cfg) {
  std::vector<ParseDiagnostic> notes;
  LabelFile parsed;
  try {
    parsed = parse_kitti_label_file(read_file(path), cfg, &notes);
  } catch (const ParseError& e) {
    throw ParseError(e.line(), path.string() + ": " + e.what());
  }
  for (const ParseDiagnostic& note : notes) {
    std::cerr << "warning: " << path.string() << ":" << note.line << ": "
              << note.message << "\n";
  }
  Frame frame;
  frame.frame_id = path.stem().string();
  frame.scene = std::move(parsed.scene);
  frame.scene.frame_id = frame.frame_id;
  frame.scores = std::move(parsed.scores);
  return frame;
}

std::vector<Frame> load_frames(const std::string& input, const FrameConfig& cfg) {
  std::vector<Frame> frames;
  for (const fs::path& path : frame_paths(input)) {
    frames.push_back(load_frame(path, cfg));
  }
  return frames;
}

// Shared flags.
struct CommonOpts {
  std::string backend = "pruned";
  std::uint64_t mc_samples = 1'000'000;
  std::uint64_t seed = 0;
  std::string frame = "kitti-camera";
  int jobs = 1;
};

void add_common(CLI::App* cmd, CommonOpts& opts, bool with_backend) {
  if (with_backend) {
    cmd->add_option("--backend", opts.backend, "Visibility backend")
        ->check(CLI::IsMember({"naive", "pruned", "mc"}))
        ->capture_default_str();
    cmd->add_option("--mc-samples", opts.mc_samples,
                    "Sample count for the mc backend")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
  }
  cmd->add_option("--seed", opts.seed, "Seed for all random draws")
      ->capture_default_str();
  cmd->add_option("--frame", opts.frame, "Input coordinate convention")
      ->check(CLI::IsMember({"kitti-camera", "ego"}))
      ->capture_default_str();
  cmd->add_option("--jobs", opts.jobs, "Worker threads")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
}

FrameConfig frame_config(const CommonOpts& opts) {
  FrameConfig cfg;
  cfg.convention = opts.frame == "ego" ? FrameConvention::EgoDirect
                                       : FrameConvention::KittiCamera;
  return cfg;
}

Backend make_backend(const CommonOpts& opts) {
  if (opts.backend == "naive") return Backend::naive();
  if (opts.backend == "mc") return Backend::monte_carlo(opts.mc_samples, opts.seed);
  return Backend::pruned();
}

// Visibility at the interchange format's printed precision, so values that
// round-trip through the format compare exactly equal.
double interchange_precision(double visibility) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6f", visibility);
  double out = 0.0;
  std::from_chars(buf, buf + std::string_view(buf).size(), out);
  return out;
}

// ---------------------------------------------------------------------------
// compute

struct ComputeOpts {
  CommonOpts common;
  std::string input;
  std::string output;
};

int cmd_compute(const ComputeOpts& opts) {
  const Backend backend = make_backend(opts.common);
  std::vector<Frame> frames = load_frames(opts.input, frame_config(opts.common));

  // Frame-level parallelism across many frames, box-level within a single
  // frame; both splits leave the output bytes unchanged.
  const int frame_jobs = frames.size() > 1 ? opts.common.jobs : 1;
  const int box_jobs = frames.size() > 1 ? 1 : opts.common.jobs;

  std::vector<std::vector<VisibilityRecord>> per_frame(frames.size());
  std::vector<std::vector<std::string>> per_frame_diags(frames.size());
  auto run_frame = [&](std::size_t f) {
    per_frame[f] = visibility_all(frames[f].scene, backend, box_jobs,
                                  &per_frame_diags[f]);
  };
  const std::size_t workers = std::min<std::size_t>(
      frames.size(), static_cast<std::size_t>(std::max(frame_jobs, 1)));
  if (workers <= 1) {
    for (std::size_t f = 0; f < frames.size(); ++f) run_frame(f);
  } else {
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> failures(workers);
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        try {
          for (std::size_t f = w; f < frames.size(); f += workers) run_frame(f);
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

  std::vector<InterchangeRecord> records;
  bool insufficient = false;
  for (std::size_t f = 0; f < frames.size(); ++f) {
    for (const std::string& diag : per_frame_diags[f]) {
      std::cerr << "warning: frame " << frames[f].frame_id << ": " << diag << "\n";
    }
    for (std::size_t b = 0; b < per_frame[f].size(); ++b) {
      const VisibilityRecord& rec = per_frame[f][b];
      if (!rec.degenerate && !rec.visibility.has_value()) {
        std::cerr << "error: frame " << frames[f].frame_id << ": box id "
                  << rec.box_id << ": too few oracle hits\n";
        insufficient = true;
      }
      records.push_back(make_interchange_record(frames[f].frame_id,
                                                frames[f].scene.boxes[b], rec));
    }
  }
  if (insufficient) return 3;
  write_output(serialize_interchange(records), opts.output);
  return 0;
}

// ---------------------------------------------------------------------------
// oracle

struct OracleOpts {
  CommonOpts common;
  std::string input;
  std::int64_t box_id = 0;
  std::string output;
};

int cmd_oracle(const OracleOpts& opts) {
  const std::vector<fs::path> paths = frame_paths(opts.input);
  if (paths.size() != 1) {
    std::cerr << "error: oracle expects a single frame file, got a directory of "
              << paths.size() << "\n";
    return 1;
  }
  const Frame frame = load_frame(paths.front(), frame_config(opts.common));
  std::size_t index = frame.scene.boxes.size();
  for (std::size_t i = 0; i < frame.scene.boxes.size(); ++i) {
    if (frame.scene.boxes[i].id == opts.box_id) index = i;
  }
  if (index == frame.scene.boxes.size()) {
    std::cerr << "error: no box with id " << opts.box_id << " in frame '"
              << frame.frame_id << "'\n";
    return 1;
  }
  const OracleConfig cfg{opts.common.mc_samples, opts.common.seed};
  const OracleEstimate est =
      estimate_visibility(frame.scene, index, cfg, opts.common.jobs);

  std::string out = "# spherevis-oracle-v1 box_id,mean,std_error,samples_hit,samples_total\n";
  char buf[128];
  std::snprintf(buf, sizeof buf, "%lld,%.6f,%.9f,%llu,%llu\n",
                static_cast<long long>(opts.box_id), est.mean, est.std_error,
                static_cast<unsigned long long>(est.samples_hit),
                static_cast<unsigned long long>(est.samples_total));
  out += buf;
  write_output(out, opts.output);
  return 0;
}

// ---------------------------------------------------------------------------
// eval

struct EvalOpts {
  CommonOpts common;
  std::string pred_path;
  std::string gt_path;
  double iou_threshold = 0.25;
  std::string iou_kind = "bev";
  bool random_baseline = false;
  std::string output;
};

struct PredBox {
  ObjectBox box;
  double v_pred = 0.0;
};

using PredFrames = std::map<std::string, std::vector<PredBox>>;

bool looks_like_interchange(const std::string& text) {
  return text.rfind("# spherevis-visibility-", 0) == 0;
}

PredFrames load_predictions(const std::string& input, const FrameConfig& cfg) {
  PredFrames frames;
  for (const fs::path& path : frame_paths(input)) {
    const std::string text = read_file(path);
    if (looks_like_interchange(text)) {
      std::vector<InterchangeRecord> rows;
      try {
        rows = parse_interchange(text);
      } catch (const ParseError& e) {
        throw ParseError(e.line(), path.string() + ": " + e.what());
      }
      for (const InterchangeRecord& row : rows) {
        if (row.degenerate) continue;
        frames[row.frame_id].push_back({to_object_box(row), row.visibility});
      }
      continue;
    }
    const Frame frame = load_frame(path, cfg);
    std::vector<PredBox>& boxes = frames[frame.frame_id];
    for (std::size_t b = 0; b < frame.scene.boxes.size(); ++b) {
      const double score = frame.scores[b];
      if (!(score >= 0.0 && score <= 1.0)) {
        throw ParseError(0, path.string() + ": box id " +
                                std::to_string(frame.scene.boxes[b].id) +
                                " has no visibility score in [0, 1]" +
                                " (16th field required)");
      }
      boxes.push_back({frame.scene.boxes[b], score});
    }
  }
  return frames;
}

int cmd_eval(const EvalOpts& opts) {
  if (opts.common.backend == "mc") {
    std::cerr << "error: eval computes reference values with an exact backend; "
                 "use --backend naive or pruned\n";
    return 1;
  }
  const Backend backend = make_backend(opts.common);
  const FrameConfig cfg = frame_config(opts.common);

  PredFrames pred = load_predictions(opts.pred_path, cfg);
  std::vector<Frame> gt_frames = load_frames(opts.gt_path, cfg);

  // Single-frame inputs pair up even when the stems differ; multi-frame
  // inputs pair by frame id.
  if (pred.size() == 1 && gt_frames.size() == 1 &&
      pred.begin()->first != gt_frames.front().frame_id) {
    std::cerr << "note: pairing prediction frame '" << pred.begin()->first
              << "' with label frame '" << gt_frames.front().frame_id << "'\n";
    std::vector<PredBox> only = std::move(pred.begin()->second);
    pred.clear();
    pred[gt_frames.front().frame_id] = std::move(only);
  }

  MatchConfig match_cfg;
  match_cfg.iou_threshold = opts.iou_threshold;
  match_cfg.iou_kind = opts.iou_kind == "3d" ? IouKind::Full3d : IouKind::Bev;

  std::vector<EvalPair> pairs;
  for (Frame& gt : gt_frames) {
    const auto it = pred.find(gt.frame_id);
    if (it == pred.end()) {
      std::cerr << "note: no predictions for frame '" << gt.frame_id << "'\n";
      continue;
    }
    std::vector<std::string> diags;
    const std::vector<VisibilityRecord> records =
        visibility_all(gt.scene, backend, opts.common.jobs, &diags);
    for (const std::string& diag : diags) {
      std::cerr << "warning: frame " << gt.frame_id << ": " << diag << "\n";
    }

    // Boxes without a defined visibility cannot enter the error metric.
    Scene gt_usable;
    gt_usable.frame_id = gt.frame_id;
    std::map<std::int64_t, double> v_algo;
    for (std::size_t b = 0; b < records.size(); ++b) {
      if (!records[b].visibility.has_value()) continue;
      gt_usable.boxes.push_back(gt.scene.boxes[b]);
      v_algo[records[b].box_id] = interchange_precision(*records[b].visibility);
    }
    Scene pred_scene;
    pred_scene.frame_id = gt.frame_id;
    std::map<std::int64_t, double> v_pred;
    for (const PredBox& pb : it->second) {
      pred_scene.boxes.push_back(pb.box);
      v_pred[pb.box.id] = pb.v_pred;
    }

    std::vector<EvalPair> matched =
        match_true_positives(pred_scene, gt_usable, match_cfg);
    for (EvalPair& pair : matched) {
      pair.v_pred = v_pred.at(pair.pred_box_id);
      pair.v_algo = v_algo.at(pair.gt_box_id);
      pairs.push_back(pair);
    }
  }

  if (opts.random_baseline) {
    SplitMix64 rng(SplitMix64::stream_seed(opts.common.seed, 1));
    for (EvalPair& pair : pairs) pair.v_pred = rng.next_double();
  }

  const AeSummary summary = summarize(pairs);

  std::string out = "# spherevis-eval-v1 class,count,mean_ae\n";
  char buf[96];
  for (const ClassAe& row : summary.per_class) {
    const std::string label(to_string(row.class_label));
    std::snprintf(buf, sizeof buf, "%s,%zu,%.6f\n", label.c_str(), row.count,
                  row.mean_ae);
    out += buf;
  }
  std::snprintf(buf, sizeof buf, "All,%zu,%.6f\n", summary.total_count,
                summary.overall_mean);
  out += buf;
  write_output(out, opts.output);

  std::cerr << "matched pairs: " << summary.total_count << "\n";
  for (const ClassAe& row : summary.per_class) {
    const std::string label(to_string(row.class_label));
    std::snprintf(buf, sizeof buf, "  %-12s %6zu  mean AE %.6f\n", label.c_str(),
                  row.count, row.mean_ae);
    std::cerr << buf;
  }
  return 0;
}

// ---------------------------------------------------------------------------
// bench

struct BenchCliOpts {
  CommonOpts common;
  std::vector<std::size_t> n_list{100, 200, 400, 800, 1600};
  std::vector<std::string> backends{"naive", "pruned"};
  int reps = 5;
  std::string csv;
};

int cmd_bench(const BenchCliOpts& opts) {
  BenchOptions bench;
  bench.n_values = opts.n_list;
  bench.repetitions = opts.reps;
  bench.jobs = opts.common.jobs;
  bench.scene_template.seed = opts.common.seed;
  bench.backends.clear();
  for (const std::string& name : opts.backends) {
    if (name == "naive") {
      bench.backends.push_back(Backend::naive());
    } else if (name == "pruned") {
      bench.backends.push_back(Backend::pruned());
    } else if (name == "mc") {
      bench.backends.push_back(
          Backend::monte_carlo(opts.common.mc_samples, opts.common.seed));
    } else {
      std::cerr << "error: unknown backend '" << name << "'\n";
      return 1;
    }
  }

  const BenchReport report = run_scaling_bench(bench);
  write_output(serialize_bench_csv(report.records), opts.csv);
  for (const SlopeFit& fit : report.slopes) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "fitted log-log slope %s: %.3f\n",
                  fit.backend.c_str(), fit.slope);
    std::cerr << buf;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Visibility of 3D bounding boxes from the ego origin"};
  app.require_subcommand(1);

  ComputeOpts compute;
  CLI::App* c = app.add_subcommand(
      "compute", "Visibility interchange rows for KITTI label files");
  c->add_option("input", compute.input,
                "Label file, or directory of .txt frames (concatenated "
                "output, ordered by frame id)")
      ->required();
  c->add_option("--output", compute.output, "Write to a file instead of stdout");
  add_common(c, compute.common, true);

  OracleOpts oracle;
  CLI::App* o = app.add_subcommand(
      "oracle", "Monte-Carlo visibility estimate for one box");
  o->add_option("input", oracle.input, "Label file (single frame)")->required();
  o->add_option("--box-id", oracle.box_id, "Target box id (line order)")
      ->required();
  o->add_option("--output", oracle.output, "Write to a file instead of stdout");
  add_common(o, oracle.common, true);

  EvalOpts eval;
  CLI::App* e = app.add_subcommand(
      "eval", "Mean absolute visibility error of predictions, per class");
  e->add_option("pred", eval.pred_path,
                "Predictions: interchange stream, or KITTI lines whose 16th "
                "field is the predicted visibility")
      ->required();
  e->add_option("gt", eval.gt_path, "Ground-truth KITTI labels")->required();
  e->add_option("--iou-threshold", eval.iou_threshold, "Matching threshold")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  e->add_option("--iou", eval.iou_kind, "IoU flavor for matching")
      ->check(CLI::IsMember({"bev", "3d"}))
      ->capture_default_str();
  e->add_flag("--random-baseline", eval.random_baseline,
              "Replace predicted visibilities with seeded uniforms");
  e->add_option("--output", eval.output, "Write to a file instead of stdout");
  add_common(e, eval.common, true);

  BenchCliOpts bench;
  CLI::App* b = app.add_subcommand(
      "bench", "Runtime scaling of visibility backends over box count");
  b->add_option("--n-list", bench.n_list, "Box counts, ascending")
      ->delimiter(',')
      ->capture_default_str();
  b->add_option("--backends", bench.backends, "Backends to time")
      ->delimiter(',')
      ->capture_default_str();
  b->add_option("--reps", bench.reps, "Repetitions per point (>= 5)")
      ->capture_default_str();
  b->add_option("--csv", bench.csv, "Write the CSV to a file instead of stdout");
  add_common(b, bench.common, true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& help) {
    return app.exit(help);
  } catch (const CLI::ParseError& parse) {
    app.exit(parse);
    return 1;
  }

  try {
    if (*c) return cmd_compute(compute);
    if (*o) return cmd_oracle(oracle);
    if (*e) return cmd_eval(eval);
    return cmd_bench(bench);
  } catch (const IoError& err) {
    std::cerr << "error: " << err.what() << "\n";
    return 2;
  } catch (const InsufficientHits& err) {
    std::cerr << "error: " << err.what() << "\n";
    return 3;
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << "\n";
    return 1;
  }
}
