#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "mebench/error.hpp"
#include "mebench/frame.hpp"

namespace mebench::metrics {

// Reported PSNR when the two frames are identical.
inline constexpr double kPsnrCap = 100.0;

inline double mse(const Frame& a, const Frame& b) {
  if (a.size() != b.size()) throw GeometryError("mse: frame dimensions differ");
  const auto sa = a.samples();
  const auto sb = b.samples();
  unsigned long long acc = 0;
  for (std::size_t i = 0; i < sa.size(); ++i) {
    const long long diff = static_cast<long long>(sa[i]) - sb[i];
    acc += static_cast<unsigned long long>(diff * diff);
  }
  return static_cast<double>(acc) / static_cast<double>(sa.size());
}

inline double psnr_from_mse(double mse_value) noexcept {
  if (mse_value <= 0.0) return kPsnrCap;
  return std::min(kPsnrCap, 10.0 * std::log10(255.0 * 255.0 / mse_value));
}

inline double psnr(const Frame& a, const Frame& b) { return psnr_from_mse(mse(a, b)); }

// Signed percentage; negative when the algorithm falls short of the reference.
inline double d_psnr(double psnr_alg, double psnr_fsa) {
  if (!(psnr_fsa > 0.0)) throw ParameterError("d_psnr: reference PSNR must be positive");
  return -((psnr_fsa - psnr_alg) / psnr_fsa) * 100.0;
}

struct FrameMetrics {
  double psnr = 0.0;
  double mse = 0.0;
  double avg_evaluations_per_block = 0.0;
  long long total_evaluations = 0;
};

struct AlgorithmRun {
  std::string name;
  std::vector<FrameMetrics> frames;
};

struct AlgorithmSummary {
  std::string name;
  double mean_psnr = 0.0;
  double mean_mse = 0.0;
  double mean_evaluations_per_block = 0.0;
  long long total_evaluations = 0;
  std::size_t frames = 0;
  std::optional<double> d_psnr;  // set when a reference is present
};

struct SequenceReport {
  std::vector<AlgorithmSummary> algorithms;
  std::optional<std::string> reference;
};

// Arithmetic means over predicted frames of per-frame PSNR (in dB) and
// per-block evaluation counts. D_PSNR comes from the sequence-mean PSNRs of
// each run and of the run named `reference`, when that run is present.
inline SequenceReport aggregate(const std::vector<AlgorithmRun>& runs,
                                const std::string& reference = "fsa") {
  if (runs.empty()) throw ParameterError("aggregate: no algorithm runs");
  SequenceReport report;
  for (const AlgorithmRun& run : runs) {
    if (run.frames.empty()) throw ParameterError("aggregate: run '" + run.name + "' has no frames");
    AlgorithmSummary s;
    s.name = run.name;
    s.frames = run.frames.size();
    for (const FrameMetrics& f : run.frames) {
      s.mean_psnr += f.psnr;
      s.mean_mse += f.mse;
      s.mean_evaluations_per_block += f.avg_evaluations_per_block;
      s.total_evaluations += f.total_evaluations;
    }
    const auto n = static_cast<double>(run.frames.size());
    s.mean_psnr /= n;
    s.mean_mse /= n;
    s.mean_evaluations_per_block /= n;
    report.algorithms.push_back(std::move(s));
  }
  for (const AlgorithmSummary& s : report.algorithms) {
    if (s.name == reference) report.reference = reference;
  }
  if (report.reference) {
    double ref_psnr = 0.0;
    for (const AlgorithmSummary& s : report.algorithms) {
      if (s.name == reference) ref_psnr = s.mean_psnr;
    }
    for (AlgorithmSummary& s : report.algorithms) {
      s.d_psnr = s.name == reference ? 0.0 : d_psnr(s.mean_psnr, ref_psnr);
    }
  }
  return report;
}

}  // namespace mebench::metrics
