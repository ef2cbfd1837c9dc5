// mebench: block-matching motion estimation benchmark.
//
//   mebench estimate --input seq.y4m --format y4m --algo hsbm --csv frames.csv
//   mebench compare  --input seq.y4m --format y4m --algo fsa --algo tss --algo ds --algo hsbm

#include <algorithm>
#include <cerrno>
#include <chrono>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "mebench/mebench.hpp"

namespace {

using namespace mebench;

struct RunConfig {
  std::string input;
  std::string format = "y4m";
  int width = 0;
  int height = 0;
  std::vector<std::string> algorithms;
  int window = 8;
  int block = 16;
  std::optional<std::uint64_t> seed;
  std::optional<double> d;
  std::optional<std::size_t> frame_limit;
  std::string csv_path;
  std::string mv_dump_path;
  std::string dump_surface;
  std::string surface_csv = "sad_surface.csv";
  int jobs = default_jobs();
  bool timing = false;
  bool literal_reinit = false;
};

struct SurfaceRequest {
  std::uint64_t frame = 0;
  int bx = 0;
  int by = 0;
};

std::string fmt6(double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", value);
  return buf;
}

std::uint64_t resolve_seed(const RunConfig& rc) {
  if (rc.seed) return *rc.seed;
  if (const char* env = std::getenv("MEBENCH_SEED"); env != nullptr && *env != '\0') {
    char* end = nullptr;
    errno = 0;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (errno != 0 || *end != '\0' || env[0] == '-') {
      throw ParameterError(std::string("MEBENCH_SEED is not an unsigned integer: '") + env + "'");
    }
    return v;
  }
  return 0;
}

std::vector<Frame> load_frames(const RunConfig& rc) {
  const io::SequenceFormat format = io::parse_format(rc.format);
  std::optional<FrameSize> size;
  if (format == io::SequenceFormat::yuv420) {
    if (rc.width <= 0 || rc.height <= 0) throw ParameterError("--width and --height are required for yuv420");
    size = FrameSize{rc.width, rc.height};
  }
  auto source = io::open_sequence(rc.input, format, size);
  std::vector<Frame> frames;
  while (!rc.frame_limit || frames.size() < *rc.frame_limit) {
    auto f = source->next();
    if (!f) break;
    frames.push_back(std::move(*f));
  }
  if (frames.size() < 2) {
    throw ParameterError("need at least 2 frames, got " + std::to_string(frames.size()));
  }
  return frames;
}

EstimatorConfig estimator_for(const RunConfig& rc, baselines::Kind kind) {
  EstimatorConfig ec;
  ec.algorithm = kind;
  ec.block = rc.block;
  ec.jobs = rc.jobs;
  ec.hsbm = hsbm::HsBmConfig::defaults(SearchWindow{rc.window});
  ec.hsbm.seed = resolve_seed(rc);
  ec.hsbm.literal_reinit = rc.literal_reinit;
  if (rc.d) ec.hsbm.d = *rc.d;
  ec.hsbm.validate();
  return ec;
}

std::optional<SurfaceRequest> parse_surface(const std::string& spec) {
  if (spec.empty()) return std::nullopt;
  SurfaceRequest r;
  char sep1 = 0;
  char sep2 = 0;
  std::istringstream in(spec);
  if (!(in >> r.frame >> sep1 >> r.bx >> sep2 >> r.by) || sep1 != ',' || sep2 != ',' ||
      !in.eof() || r.bx < 0 || r.by < 0) {
    throw ParameterError("--dump-surface expects \"frame,bx,by\", got '" + spec + "'");
  }
  return r;
}

void write_surface(const std::string& path, const Frame& current, const Frame& previous,
                   BlockPosition block, SearchWindow window) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path);
  out << "u,v,sad\n";
  for (const MotionVector mv : valid_candidates(block, window, previous.size())) {
    out << mv.u << ',' << mv.v << ',' << sad_unchecked(current, previous, block, mv) << '\n';
  }
}

struct SequenceRun {
  metrics::AlgorithmRun run;
  std::vector<double> wall_ms;
};

// Runs one algorithm over every consecutive frame pair. `on_frame` sees each
// result before it is discarded.
template <class OnFrame>
SequenceRun run_sequence(const std::vector<Frame>& frames, const EstimatorConfig& ec,
                         OnFrame&& on_frame) {
  SequenceRun out;
  out.run.name = std::string(baselines::to_string(ec.algorithm));
  for (std::size_t k = 1; k < frames.size(); ++k) {
    const auto t0 = std::chrono::steady_clock::now();
    const FrameResult result = estimate_frame(frames[k], frames[k - 1], ec, k);
    const auto t1 = std::chrono::steady_clock::now();
    out.wall_ms.push_back(std::chrono::duration<double, std::milli>(t1 - t0).count());
    out.run.frames.push_back(measure(frames[k], frames[k - 1], result, ec.block));
    on_frame(k, result);
  }
  return out;
}

int run_estimate(const RunConfig& rc) {
  if (rc.algorithms.size() > 1) {
    throw ParameterError("estimate runs exactly one --algo; use compare for several");
  }
  const auto kind = baselines::parse_kind(rc.algorithms.empty() ? "hsbm" : rc.algorithms.front());
  const EstimatorConfig ec = estimator_for(rc, kind);
  const std::vector<Frame> frames = load_frames(rc);
  const auto surface = parse_surface(rc.dump_surface);

  std::ofstream mv_dump;
  if (!rc.mv_dump_path.empty()) {
    mv_dump.open(rc.mv_dump_path, std::ios::binary);
    if (!mv_dump) throw IoError("cannot write " + rc.mv_dump_path);
    mv_dump << "# frame bx by u v sad evals\n";
  }
  bool surface_written = false;

  const SequenceRun seq = run_sequence(frames, ec, [&](std::size_t k, const FrameResult& r) {
    if (mv_dump.is_open()) {
      for (std::size_t i = 0; i < r.blocks.size(); ++i) {
        const int bx = static_cast<int>(i) % r.field.cols();
        const int by = static_cast<int>(i) / r.field.cols();
        const BlockResult& b = r.blocks[i];
        mv_dump << k << ' ' << bx << ' ' << by << ' ' << b.mv.u << ' ' << b.mv.v << ' ' << b.sad
                << ' ' << b.evaluations << '\n';
      }
    }
    if (surface && surface->frame == k) {
      if (surface->bx >= r.field.cols() || surface->by >= r.field.rows()) {
        throw ParameterError("--dump-surface block lies outside the frame");
      }
      write_surface(rc.surface_csv, frames[k], frames[k - 1],
                    {surface->bx * rc.block, surface->by * rc.block, rc.block}, ec.window());
      surface_written = true;
    }
  });
  if (surface && !surface_written) {
    throw ParameterError("--dump-surface frame " + std::to_string(surface->frame) +
                         " is not a predicted frame of this run");
  }

  if (!rc.csv_path.empty()) {
    std::ofstream csv(rc.csv_path, std::ios::binary);
    if (!csv) throw IoError("cannot write " + rc.csv_path);
    csv << "frame,psnr,mse,sad_evaluations,avg_evaluations_per_block";
    if (rc.timing) csv << ",wall_ms";
    csv << '\n';
    for (std::size_t i = 0; i < seq.run.frames.size(); ++i) {
      const auto& f = seq.run.frames[i];
      csv << i + 1 << ',' << fmt6(f.psnr) << ',' << fmt6(f.mse) << ',' << f.total_evaluations << ','
          << fmt6(f.avg_evaluations_per_block);
      if (rc.timing) csv << ',' << fmt6(seq.wall_ms[i]);
      csv << '\n';
    }
  }

  const auto report = metrics::aggregate({seq.run});
  const auto& s = report.algorithms.front();
  const double total_ms = std::accumulate(seq.wall_ms.begin(), seq.wall_ms.end(), 0.0);
  std::cout << "algorithm " << s.name << '\n'
            << "frames " << s.frames << '\n'
            << "mean_psnr " << fmt6(s.mean_psnr) << '\n'
            << "mean_mse " << fmt6(s.mean_mse) << '\n'
            << "mean_evaluations_per_block " << fmt6(s.mean_evaluations_per_block) << '\n'
            << "total_evaluations " << s.total_evaluations << '\n';
  std::cerr << "wall_ms " << fmt6(total_ms) << '\n';
  return 0;
}

int run_compare(const RunConfig& rc) {
  if (rc.algorithms.empty()) throw ParameterError("compare needs at least one --algo");
  std::vector<baselines::Kind> kinds;
  for (const auto& name : rc.algorithms) {
    const auto k = baselines::parse_kind(name);
    if (std::find(kinds.begin(), kinds.end(), k) != kinds.end()) {
      throw ParameterError("algorithm '" + name + "' given twice");
    }
    kinds.push_back(k);
  }
  if (std::find(kinds.begin(), kinds.end(), baselines::Kind::fsa) == kinds.end()) {
    throw ParameterError("compare requires --algo fsa as the D_PSNR reference");
  }
  const std::vector<Frame> frames = load_frames(rc);
  std::vector<metrics::AlgorithmRun> runs;
  for (const auto k : kinds) {
    runs.push_back(run_sequence(frames, estimator_for(rc, k), [](std::size_t, const FrameResult&) {}).run);
  }
  const auto report = metrics::aggregate(runs);

  // Rank 1 = fewest evaluations per block; ties keep the command-line order.
  std::vector<std::size_t> order(report.algorithms.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return report.algorithms[a].mean_evaluations_per_block <
           report.algorithms[b].mean_evaluations_per_block;
  });
  std::vector<int> rank(order.size());
  for (std::size_t r = 0; r < order.size(); ++r) rank[order[r]] = static_cast<int>(r) + 1;

  std::ostringstream csv;
  csv << "algorithm,mean_psnr,d_psnr,mean_evaluations_per_block,rank\n";
  for (std::size_t i = 0; i < report.algorithms.size(); ++i) {
    const auto& s = report.algorithms[i];
    csv << s.name << ',' << fmt6(s.mean_psnr) << ',' << fmt6(s.d_psnr.value_or(0.0)) << ','
        << fmt6(s.mean_evaluations_per_block) << ',' << rank[i] << '\n';
  }
  if (!rc.csv_path.empty()) {
    std::ofstream out(rc.csv_path, std::ios::binary);
    if (!out) throw IoError("cannot write " + rc.csv_path);
    out << csv.str();
  }

  char line[160];
  std::snprintf(line, sizeof line, "%-10s %12s %10s %14s %5s\n", "algorithm", "psnr_db", "d_psnr_%",
                "evals/block", "rank");
  std::cout << line;
  for (std::size_t i = 0; i < report.algorithms.size(); ++i) {
    const auto& s = report.algorithms[i];
    std::snprintf(line, sizeof line, "%-10s %12.4f %10.3f %14.2f %5d\n", s.name.c_str(), s.mean_psnr,
                  s.d_psnr.value_or(0.0), s.mean_evaluations_per_block, rank[i]);
    std::cout << line;
  }
  return 0;
}

void add_common(CLI::App* cmd, RunConfig& rc, bool estimate) {
  cmd->add_option("--input", rc.input, "Input file, or directory for pgm-dir")->required();
  cmd->add_option("--format", rc.format, "Input format")
      ->check(CLI::IsMember({"y4m", "yuv420", "pgm-dir"}));
  cmd->add_option("--width", rc.width, "Frame width (yuv420 only)")->check(CLI::PositiveNumber);
  cmd->add_option("--height", rc.height, "Frame height (yuv420 only)")->check(CLI::PositiveNumber);
  cmd->add_option("--algo", rc.algorithms, "Algorithm: fsa, tss, ds or hsbm (repeatable)")
      ->check(CLI::IsMember({"fsa", "tss", "ds", "hsbm"}));
  cmd->add_option("--window", rc.window, "Search window W")->check(CLI::IsMember({8, 16}));
  cmd->add_option("--block", rc.block, "Block edge N")->check(CLI::PositiveNumber);
  cmd->add_option("--seed", rc.seed, "HS-BM seed (default: $MEBENCH_SEED or 0)");
  cmd->add_option("--d", rc.d, "Approximation distance threshold; 0 disables estimation")
      ->check(CLI::NonNegativeNumber);
  cmd->add_option("--frames", rc.frame_limit, "Read at most this many frames")
      ->check(CLI::Range(std::size_t{2}, std::numeric_limits<std::size_t>::max()));
  cmd->add_option("--csv", rc.csv_path, "CSV output path");
  cmd->add_option("--jobs", rc.jobs, "Worker threads per frame")->check(CLI::PositiveNumber);
  cmd->add_flag("--literal-reinit", rc.literal_reinit,
                "HS-BM re-initialization as 1 + round(r * W)");
  if (estimate) {
    cmd->add_option("--mv-dump", rc.mv_dump_path, "Motion-vector dump path");
    cmd->add_option("--dump-surface", rc.dump_surface, "Dump the SAD surface of \"frame,bx,by\"");
    cmd->add_option("--surface-csv", rc.surface_csv, "Output path for --dump-surface");
    cmd->add_flag("--timing", rc.timing, "Append a wall_ms column to the CSV");
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Block-matching motion estimation benchmark"};
  app.require_subcommand(1);
  RunConfig estimate_cfg;
  RunConfig compare_cfg;
  auto* estimate = app.add_subcommand("estimate", "Run one algorithm over a sequence");
  auto* compare = app.add_subcommand("compare", "Compare algorithms against full search");
  add_common(estimate, estimate_cfg, true);
  add_common(compare, compare_cfg, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (estimate->parsed()) return run_estimate(estimate_cfg);
    return run_compare(compare_cfg);
  } catch (const std::exception& e) {
    std::cerr << "mebench: error: " << e.what() << '\n';
    return 1;
  }
}
