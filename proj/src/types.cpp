#include "wishrisk/types.hpp"

#include <numeric>

namespace wishrisk {

ConeSpec make_cone_spec(int d, int r) {
  ConeSpec cone;
  cone.d = d;
  cone.r = r;
  cone.n = r + r * (r - 1) * d / 2;
  validate_cone_spec(cone);
  return cone;
}

void validate_cone_spec(const ConeSpec& cone) {
  if (cone.d != 1 && cone.d != 2) {
    throw std::invalid_argument("cone: d must be 1 (real) or 2 (complex), got " +
                                std::to_string(cone.d));
  }
  if (cone.r < 1) {
    throw std::invalid_argument("cone: rank r must be >= 1, got " +
                                std::to_string(cone.r));
  }
  const int n = cone.r + cone.r * (cone.r - 1) * cone.d / 2;
  if (cone.n != n) {
    throw std::invalid_argument("cone: n must equal r + r(r-1)d/2 = " +
                                std::to_string(n) + ", got " +
                                std::to_string(cone.n));
  }
}

Partition make_partition(const ConeSpec& cone, std::vector<int> blocks) {
  validate_cone_spec(cone);
  if (blocks.empty()) {
    throw std::invalid_argument("partition: at least one block is required");
  }
  for (int k : blocks) {
    if (k < 1) {
      throw std::invalid_argument("partition: block sizes must be >= 1");
    }
  }
  const int total = std::accumulate(blocks.begin(), blocks.end(), 0);
  if (total != cone.r) {
    throw std::invalid_argument("partition: block sizes sum to " +
                                std::to_string(total) + ", expected rank " +
                                std::to_string(cone.r));
  }
  Partition p;
  p.cone = cone;
  p.blocks = std::move(blocks);
  return p;
}

}  // namespace wishrisk
