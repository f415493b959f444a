#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace dualtree {

// How coordinate-identical points are handled at dataset construction.
// "reject" refuses them (a separated cover tree cannot hold exact
// duplicates); "weighted" collapses them into one point with integer
// multiplicity, which kernel-density descendant counts consume.
enum class DuplicatePolicy { reject, weighted };

enum class MetricKind { euclidean };

/// Euclidean distance between two points of equal dimension.
double distance(std::span<const double> a, std::span<const double> b);

// Immutable N x d point collection with stable ids 0..N-1 and per-point
// integer multiplicity (all 1 unless built under the weighted policy).
class Dataset {
 public:
  Dataset() = default;

  // Takes row-major coordinates, N*dim values. Validates finiteness and
  // applies the duplicate policy.
  Dataset(std::vector<double> coords, int dim,
          DuplicatePolicy policy = DuplicatePolicy::reject);

  int dim() const { return dim_; }
  int size() const { return static_cast<int>(weights_.size()); }
  DuplicatePolicy policy() const { return policy_; }

  std::span<const double> point(int id) const {
    return {coords_.data() + static_cast<size_t>(id) * dim_,
            static_cast<size_t>(dim_)};
  }
  std::int64_t weight(int id) const { return weights_[id]; }
  std::int64_t total_weight() const { return total_weight_; }

  double dist(int a, int b) const { return distance(point(a), point(b)); }

  const std::vector<double>& coords() const { return coords_; }

 private:
  std::vector<double> coords_;
  std::vector<std::int64_t> weights_;
  std::int64_t total_weight_ = 0;
  int dim_ = 0;
  DuplicatePolicy policy_ = DuplicatePolicy::reject;
};

struct DatasetExtremes {
  double eta = 0.0;    // largest pairwise distance
  double delta = 0.0;  // smallest nonzero pairwise distance
  double aspect_ratio() const { return eta / delta; }
};

struct ExpansionReport {
  double c = 2.0;
  int witness_point = -1;
  double witness_radius = 0.0;
};

/// Number of dataset points inside the closed ball around `center`.
int ball_count(const Dataset& s, std::span<const double> center,
               double radius);

/// Exact eta/delta by exhaustive pairwise scan. Requires N >= 2 and at
/// least one nonzero pairwise distance.
DatasetExtremes dataset_extremes(const Dataset& s);

// Exact expansion constant: the smallest c >= 2 with
// |B(p, 2r)| <= c * |B(p, r)| for all p in S and all r > 0. Candidate
// radii per center are every pairwise distance and every half distance;
// ball counts change only at the former, doubled-ball counts only at the
// latter, so the supremum is attained on that grid. When `extra` is given
// the constant is computed over S u {extra}.
ExpansionReport expansion_constant(
    const Dataset& s, std::optional<std::span<const double>> extra = {});

}  // namespace dualtree
