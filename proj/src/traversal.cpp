#include "dualtree/traversal.hpp"

#include <cmath>

namespace dualtree {

AuditResult separation_audit(const ReferenceSetView& r, const Dataset& data) {
  if (r.nodes.size() < 2 || r.s_r_max.is_leaf()) return {};
  const double need =
      std::ldexp(1.0, r.s_r_max.value()) * (1.0 - 1e-9);
  for (size_t i = 0; i < r.nodes.size(); ++i) {
    for (size_t j = i + 1; j < r.nodes.size(); ++j) {
      const int a = r.nodes[i]->point_id, b = r.nodes[j]->point_id;
      const double d = data.dist(a, b);
      if (!(d > need))
        return {false, "reference points " + std::to_string(a) + " and " +
                           std::to_string(b) + " at distance " +
                           std::to_string(d) + " violate 2^s_r_max = " +
                           std::to_string(std::ldexp(1.0, r.s_r_max.value()))};
    }
  }
  return {};
}

}  // namespace dualtree
