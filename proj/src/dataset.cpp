#include "dualtree/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace dualtree {

double distance(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size())
    throw std::invalid_argument("distance: dimension mismatch (" +
                                std::to_string(a.size()) + " vs " +
                                std::to_string(b.size()) + ")");
  double sq = 0.0;
  for (size_t i = 0; i < a.size(); ++i) {
    const double diff = a[i] - b[i];
    sq += diff * diff;
  }
  return std::sqrt(sq);
}

Dataset::Dataset(std::vector<double> coords, int dim, DuplicatePolicy policy)
    : policy_(policy) {
  if (dim <= 0) throw std::invalid_argument("Dataset: dim must be positive");
  if (coords.size() % static_cast<size_t>(dim) != 0)
    throw std::invalid_argument(
        "Dataset: coordinate count is not a multiple of dim");
  const int n = static_cast<int>(coords.size() / static_cast<size_t>(dim));
  for (double v : coords)
    if (!std::isfinite(v))
      throw std::invalid_argument("Dataset: non-finite coordinate");

  // Detect exact coordinate duplicates via a lexicographic sort of ids.
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  auto row = [&](int id) {
    return std::span<const double>(coords.data() +
                                       static_cast<size_t>(id) * dim,
                                   static_cast<size_t>(dim));
  };
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    return std::lexicographical_compare(row(a).begin(), row(a).end(),
                                        row(b).begin(), row(b).end());
  });
  std::vector<std::int64_t> multiplicity(n, 1);
  std::vector<bool> drop(n, false);
  for (int i = 1; i < n; ++i) {
    const int prev = order[i - 1], cur = order[i];
    if (std::equal(row(prev).begin(), row(prev).end(), row(cur).begin())) {
      if (policy == DuplicatePolicy::reject)
        throw std::invalid_argument(
            "Dataset: duplicate points " + std::to_string(std::min(prev, cur)) +
            " and " + std::to_string(std::max(prev, cur)) +
            " under the reject policy");
      // Collapse onto the earlier id so surviving ids keep input order.
      int keep = std::min(prev, cur), gone = std::max(prev, cur);
      multiplicity[keep] += multiplicity[gone];
      multiplicity[gone] = 0;
      drop[gone] = true;
      order[i] = keep;
    }
  }

  if (policy == DuplicatePolicy::weighted &&
      std::any_of(drop.begin(), drop.end(), [](bool b) { return b; })) {
    std::vector<double> packed;
    packed.reserve(coords.size());
    for (int id = 0; id < n; ++id) {
      if (drop[id]) continue;
      packed.insert(packed.end(), row(id).begin(), row(id).end());
      weights_.push_back(multiplicity[id]);
    }
    coords_ = std::move(packed);
  } else {
    coords_ = std::move(coords);
    weights_.assign(n, 1);
  }
  dim_ = dim;
  total_weight_ = std::accumulate(weights_.begin(), weights_.end(),
                                  std::int64_t{0});
}

int ball_count(const Dataset& s, std::span<const double> center,
               double radius) {
  if (radius < 0.0) throw std::invalid_argument("ball_count: negative radius");
  int count = 0;
  for (int i = 0; i < s.size(); ++i)
    if (distance(center, s.point(i)) <= radius) ++count;
  return count;
}

DatasetExtremes dataset_extremes(const Dataset& s) {
  if (s.size() < 2)
    throw std::invalid_argument("dataset_extremes: need at least 2 points");
  DatasetExtremes ex;
  ex.eta = 0.0;
  ex.delta = std::numeric_limits<double>::infinity();
  for (int i = 0; i < s.size(); ++i) {
    for (int j = i + 1; j < s.size(); ++j) {
      const double d = s.dist(i, j);
      ex.eta = std::max(ex.eta, d);
      if (d > 0.0) ex.delta = std::min(ex.delta, d);
    }
  }
  if (!std::isfinite(ex.delta))
    throw std::invalid_argument(
        "dataset_extremes: all points identical, delta undefined");
  return ex;
}

ExpansionReport expansion_constant(
    const Dataset& s, std::optional<std::span<const double>> extra) {
  const int base_n = s.size();
  const int n = base_n + (extra ? 1 : 0);
  if (n < 2)
    throw std::invalid_argument("expansion_constant: need at least 2 points");
  auto point_at = [&](int i) -> std::span<const double> {
    return i < base_n ? s.point(i) : *extra;
  };

  ExpansionReport rep;
  rep.c = 2.0;
  std::vector<double> dists(n);
  for (int p = 0; p < n; ++p) {
    for (int j = 0; j < n; ++j) dists[j] = distance(point_at(p), point_at(j));
    std::sort(dists.begin(), dists.end());
    auto count_within = [&](double r) {
      return static_cast<double>(
          std::upper_bound(dists.begin(), dists.end(), r) - dists.begin());
    };
    for (int j = 0; j < n; ++j) {
      const double d = dists[j];
      if (d <= 0.0) continue;
      for (double radius : {d, d * 0.5}) {
        const double inner = count_within(radius);
        const double ratio = count_within(2.0 * radius) / inner;
        if (ratio > rep.c) {
          rep.c = ratio;
          rep.witness_point = p < base_n ? p : -1;
          rep.witness_radius = radius;
        }
      }
    }
  }
  return rep;
}

}  // namespace dualtree
