#pragma once

#include <array>
#include <cmath>
#include <concepts>
#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <type_traits>
#include <vector>

#include "mebench/error.hpp"
#include "mebench/random.hpp"

// Harmony Search over bounded integer lattices (minimization).
namespace mebench::hs {

template <std::size_t D>
using Point = std::array<int, D>;

template <std::size_t D>
struct Bounds {
  Point<D> lower{};
  Point<D> upper{};

  void validate() const {
    for (std::size_t j = 0; j < D; ++j) {
      if (lower[j] > upper[j]) {
        throw ParameterError("bounds: lower[" + std::to_string(j) + "] exceeds upper");
      }
    }
  }

  bool contains(const Point<D>& x) const noexcept {
    for (std::size_t j = 0; j < D; ++j) {
      if (x[j] < lower[j] || x[j] > upper[j]) return false;
    }
    return true;
  }

  int clamp(std::size_t j, long value) const noexcept {
    if (value < lower[j]) return lower[j];
    if (value > upper[j]) return upper[j];
    return static_cast<int>(value);
  }
};

struct Params {
  int hms = 5;
  double hmcr = 0.7;
  double par = 0.3;
  double bw = 8.0;
  int ni = 25;

  void validate() const {
    if (hms < 1) throw ParameterError("hms must be >= 1");
    if (ni < 1) throw ParameterError("ni must be >= 1");
    if (!(hmcr >= 0.0 && hmcr <= 1.0)) throw ParameterError("hmcr must lie in [0, 1]");
    if (!(par >= 0.0 && par <= 1.0)) throw ParameterError("par must lie in [0, 1]");
    if (!(bw > 0.0)) throw ParameterError("bw must be positive");
  }
};

enum class Provenance { unassigned, evaluated, estimated };

// A fitness value together with how it was obtained.
struct Assessment {
  double value = std::numeric_limits<double>::infinity();
  Provenance provenance = Provenance::evaluated;
};

template <std::size_t D>
struct Harmony {
  Point<D> x{};
  double fitness = std::numeric_limits<double>::infinity();
  Provenance provenance = Provenance::unassigned;
};

template <std::size_t D>
class HarmonyMemory {
 public:
  HarmonyMemory() = default;
  explicit HarmonyMemory(std::vector<Harmony<D>> entries) : entries_(std::move(entries)) {}

  std::size_t size() const noexcept { return entries_.size(); }
  const Harmony<D>& operator[](std::size_t i) const { return entries_[i]; }
  std::span<const Harmony<D>> entries() const noexcept { return entries_; }

  void assign(std::size_t i, Assessment a) {
    entries_[i].fitness = a.value;
    entries_[i].provenance = a.provenance;
  }

  void replace(std::size_t i, Harmony<D> entry) { entries_[i] = entry; }

  // Highest fitness; ties go to the lowest index.
  std::size_t worst_index() const noexcept {
    std::size_t w = 0;
    for (std::size_t i = 1; i < entries_.size(); ++i) {
      if (entries_[i].fitness > entries_[w].fitness) w = i;
    }
    return w;
  }

  std::size_t best_index() const noexcept {
    std::size_t b = 0;
    for (std::size_t i = 1; i < entries_.size(); ++i) {
      if (entries_[i].fitness < entries_[b].fitness) b = i;
    }
    return b;
  }

 private:
  std::vector<Harmony<D>> entries_;
};

// Seeds are taken verbatim; otherwise each coordinate is drawn uniformly
// from the lattice [l(j), u(j)]. Fitness stays unassigned.
template <std::size_t D, UnitRandom R>
HarmonyMemory<D> initialize_memory(const Bounds<D>& bounds, const Params& params,
                                   std::type_identity_t<std::optional<std::span<const Point<D>>>> seeds,
                                   R& rng) {
  bounds.validate();
  params.validate();
  std::vector<Harmony<D>> entries(static_cast<std::size_t>(params.hms));
  if (seeds) {
    if (seeds->size() != entries.size()) {
      throw ParameterError("seed count " + std::to_string(seeds->size()) +
                           " does not match hms " + std::to_string(params.hms));
    }
    for (std::size_t i = 0; i < entries.size(); ++i) {
      if (!bounds.contains((*seeds)[i])) {
        throw ParameterError("seed " + std::to_string(i) + " lies outside the bounds");
      }
      entries[i].x = (*seeds)[i];
    }
  } else {
    for (auto& h : entries) {
      for (std::size_t j = 0; j < D; ++j) h.x[j] = draw_int(rng, bounds.lower[j], bounds.upper[j]);
    }
  }
  return HarmonyMemory<D>(std::move(entries));
}

// How a coordinate is regenerated when memory consideration is skipped.
enum class Reinit {
  uniform,             // uniform on [l(j), u(j)]
  symmetric,           // round(r * extent), r uniform in [-1, 1)
  symmetric_plus_one,  // 1 + round(r * extent), the literal motion-search form
};

struct ImproviseOptions {
  Reinit reinit = Reinit::uniform;
  int extent = 0;  // used by the symmetric rules
};

// Builds one new harmony. Draw order per dimension, all from rng.unit():
//   r1; if r1 < hmcr: member index, r2; if r2 < par: r3, sign (< 0.5 is +)
//   otherwise: one draw for the re-initialization.
// Pitch adjustment moves by round(+-r3 * bw), half away from zero, and every
// coordinate is truncated to the bounds.
template <std::size_t D, UnitRandom R>
Point<D> improvise(const HarmonyMemory<D>& memory, const Bounds<D>& bounds, const Params& params,
                   R& rng, const ImproviseOptions& options = {}) {
  Point<D> out{};
  for (std::size_t j = 0; j < D; ++j) {
    long value = 0;
    if (rng.unit() < params.hmcr) {
      value = memory[draw_index(rng, memory.size())].x[j];
      if (rng.unit() < params.par) {
        const double r3 = rng.unit();
        const double sign = rng.unit() < 0.5 ? 1.0 : -1.0;
        value += std::lround(sign * r3 * params.bw);
      }
    } else {
      switch (options.reinit) {
        case Reinit::uniform:
          value = draw_int(rng, bounds.lower[j], bounds.upper[j]);
          break;
        case Reinit::symmetric:
          value = std::lround((2.0 * rng.unit() - 1.0) * options.extent);
          break;
        case Reinit::symmetric_plus_one:
          value = 1 + std::lround((2.0 * rng.unit() - 1.0) * options.extent);
          break;
      }
    }
    out[j] = bounds.clamp(j, value);
  }
  return out;
}

// Replaces the worst entry iff the candidate is strictly better.
template <std::size_t D>
bool update_memory(HarmonyMemory<D>& memory, const Point<D>& candidate, double fitness,
                   Provenance provenance) {
  const std::size_t w = memory.worst_index();
  if (!(fitness < memory[w].fitness)) return false;
  memory.replace(w, {candidate, fitness, provenance});
  return true;
}

template <std::size_t D>
struct Result {
  Point<D> best{};
  double best_fitness = std::numeric_limits<double>::infinity();
  Provenance provenance = Provenance::unassigned;
  // Best-so-far after the initial pass, then after every improvisation.
  std::vector<double> trace;
  HarmonyMemory<D> memory;
};

namespace detail {

template <class F, std::size_t D>
Assessment assess(F& fitness, const Point<D>& x) {
  using Ret = std::invoke_result_t<F&, const Point<D>&>;
  if constexpr (std::is_same_v<std::remove_cvref_t<Ret>, Assessment>) {
    return fitness(x);
  } else {
    return {static_cast<double>(fitness(x)), Provenance::evaluated};
  }
}

}  // namespace detail

// Runs the initial evaluation pass followed by ni improvise/update cycles.
// The oracle returns either a number (treated as evaluated) or an Assessment.
template <std::size_t D, class F, UnitRandom R>
Result<D> optimize(F&& fitness, const Bounds<D>& bounds, const Params& params,
                   std::type_identity_t<std::optional<std::span<const Point<D>>>> seeds, R& rng,
                   const ImproviseOptions& options = {}) {
  Result<D> result;
  result.memory = initialize_memory(bounds, params, seeds, rng);
  result.trace.reserve(static_cast<std::size_t>(params.ni) + 1);

  for (std::size_t i = 0; i < result.memory.size(); ++i) {
    const Assessment a = detail::assess(fitness, result.memory[i].x);
    result.memory.assign(i, a);
    if (i == 0 || a.value < result.best_fitness) {
      result.best = result.memory[i].x;
      result.best_fitness = a.value;
      result.provenance = a.provenance;
    }
  }
  result.trace.push_back(result.best_fitness);

  for (int it = 0; it < params.ni; ++it) {
    const Point<D> candidate = improvise(result.memory, bounds, params, rng, options);
    const Assessment a = detail::assess(fitness, candidate);
    update_memory(result.memory, candidate, a.value, a.provenance);
    if (a.value < result.best_fitness) {
      result.best = candidate;
      result.best_fitness = a.value;
      result.provenance = a.provenance;
    }
    result.trace.push_back(result.best_fitness);
  }
  return result;
}

}  // namespace mebench::hs
