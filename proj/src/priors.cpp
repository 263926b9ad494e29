#include "wishrisk/priors.hpp"

#include <stdexcept>

namespace wishrisk {

HyperT canonical_hyperparams(const Partition& p, PriorKind kind) {
  const int d = p.cone.d;
  const int r = p.cone.r;
  HyperT out;
  out.t.reserve(static_cast<std::size_t>(p.h()));
  for (int i = 1; i <= p.h(); ++i) {
    const auto ri = static_cast<double>(p.r_of(i));
    const auto ki = static_cast<double>(p.k_of(i));
    double ti = 0.0;
    switch (kind) {
      case PriorKind::kJeffreys:
        ti = -((r - 1) * d / 2.0 + 1.0);
        break;
      case PriorKind::kReference:
        ti = -((ri - 1.0) * d / 2.0 + 1.0);
        break;
      case PriorKind::kRightInvariant:
        ti = -((2.0 * ri - ki - 1.0) * d / 2.0 + 1.0);
        break;
      default:
        throw std::invalid_argument("canonical_hyperparams: unknown kind");
    }
    out.t.push_back(ti);
  }
  return out;
}

}  // namespace wishrisk
