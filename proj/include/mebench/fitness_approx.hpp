#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdlib>
#include <limits>
#include <span>
#include <vector>

#include "mebench/error.hpp"
#include "mebench/harmony_search.hpp"

// Local fitness approximation: an archive of exactly evaluated positions and
// a three-rule policy deciding whether a new position is evaluated or gets
// the fitness of its nearest archived neighbour.
namespace mebench::approx {

template <std::size_t D>
using Point = hs::Point<D>;

enum class Metric { euclidean, chebyshev, manhattan };

template <std::size_t D>
double distance(const Point<D>& a, const Point<D>& b, Metric metric = Metric::euclidean) {
  long long acc = 0;
  for (std::size_t j = 0; j < D; ++j) {
    const long long diff = std::llabs(static_cast<long long>(a[j]) - b[j]);
    switch (metric) {
      case Metric::euclidean: acc += diff * diff; break;
      case Metric::chebyshev: acc = std::max(acc, diff); break;
      case Metric::manhattan: acc += diff; break;
    }
  }
  return metric == Metric::euclidean ? std::sqrt(static_cast<double>(acc))
                                     : static_cast<double>(acc);
}

template <std::size_t D>
struct Record {
  Point<D> position{};
  double fitness = 0.0;
};

template <std::size_t D>
struct Neighbor {
  std::size_t index = 0;
  const Record<D>* record = nullptr;
  double distance = 0.0;
};

// Exactly evaluated (position, fitness) records of one optimization run, in
// insertion order. Positions are unique.
template <std::size_t D>
class HistoryArchive {
 public:
  std::size_t size() const noexcept { return records_.size(); }
  bool empty() const noexcept { return records_.empty(); }
  std::span<const Record<D>> records() const noexcept { return records_; }

  // Minimum fitness over all records; +inf while empty.
  double best_fitness() const noexcept { return best_; }

  void insert(const Point<D>& position, double fitness) {
    records_.push_back({position, fitness});
    if (fitness < best_) best_ = fitness;
  }

  // Closest record; ties resolve to the earliest insertion.
  Neighbor<D> nearest(const Point<D>& position, Metric metric = Metric::euclidean) const {
    if (records_.empty()) throw ParameterError("nearest: archive is empty");
    Neighbor<D> best{0, &records_[0], distance(records_[0].position, position, metric)};
    for (std::size_t i = 1; i < records_.size(); ++i) {
      const double dist = distance(records_[i].position, position, metric);
      if (dist < best.distance) best = {i, &records_[i], dist};
    }
    return best;
  }

 private:
  std::vector<Record<D>> records_;
  double best_ = std::numeric_limits<double>::infinity();
};

enum class Rule { exploitation, exploration, nni, cache_hit };

inline const char* to_string(Rule r) noexcept {
  switch (r) {
    case Rule::exploitation: return "exploitation";
    case Rule::exploration: return "exploration";
    case Rule::nni: return "nni";
    case Rule::cache_hit: return "cache-hit";
  }
  return "?";
}

struct FitnessDecision {
  Rule rule = Rule::exploration;
  double value = 0.0;
  bool evaluated = false;
};

// Classifies position against the archive and either evaluates it with the
// exact oracle (inserting the result) or reuses an archived value.
//   empty archive              -> exploration, evaluate
//   nearest at distance 0      -> cache hit, stored value
//   distance < d, nearest best -> exploitation, evaluate
//   distance >= d              -> exploration, evaluate
//   distance < d, otherwise    -> nni, nearest record's value
// d = 0 never estimates.
template <std::size_t D, class Oracle>
FitnessDecision decide_and_fit(const Point<D>& position, HistoryArchive<D>& archive, double d,
                               Oracle&& exact, Metric metric = Metric::euclidean) {
  if (!(d >= 0.0)) throw ParameterError("distance threshold must be non-negative");
  auto evaluate = [&](Rule rule) {
    const double value = static_cast<double>(exact(position));
    archive.insert(position, value);
    return FitnessDecision{rule, value, true};
  };
  if (archive.empty()) return evaluate(Rule::exploration);

  const Neighbor<D> near = archive.nearest(position, metric);
  if (near.distance == 0.0) return {Rule::cache_hit, near.record->fitness, false};
  if (near.distance >= d) return evaluate(Rule::exploration);
  if (near.record->fitness == archive.best_fitness()) return evaluate(Rule::exploitation);
  return {Rule::nni, near.record->fitness, false};
}

inline std::size_t evaluation_count(const auto& archive) noexcept { return archive.size(); }

}  // namespace mebench::approx
