#pragma once

#include <algorithm>

#include "dualtree/cover_tree.hpp"

namespace dualtree {

// Bounds on the distance between any descendant pair of two nodes, from
// the point-to-point distance and the furthest-descendant radii. Leaves
// contribute lambda = 0, so two leaves bound exactly.

inline double node_dmin(double point_dist, const CoverNode& nq,
                        const CoverNode& nr) {
  return std::max(0.0, point_dist - nq.lambda - nr.lambda);
}

inline double node_dmax(double point_dist, const CoverNode& nq,
                        const CoverNode& nr) {
  return point_dist + nq.lambda + nr.lambda;
}

inline double node_dmin(const CoverNode& nq, const CoverNode& nr,
                        const Dataset& queries, const Dataset& refs) {
  return node_dmin(distance(queries.point(nq.point_id), refs.point(nr.point_id)),
                   nq, nr);
}

inline double node_dmax(const CoverNode& nq, const CoverNode& nr,
                        const Dataset& queries, const Dataset& refs) {
  return node_dmax(distance(queries.point(nq.point_id), refs.point(nr.point_id)),
                   nq, nr);
}

}  // namespace dualtree
