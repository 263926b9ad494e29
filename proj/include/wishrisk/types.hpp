// Core value types shared across the library: cone descriptors, ordered
// partitions with their cumulative bookkeeping, hyperparameter vectors, and
// the error type distinguishing numerical breakdown from domain misuse.
#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace wishrisk {

// Thrown when an operation fails numerically on structurally valid input,
// e.g. a Cholesky factorization of a matrix that was required to be positive
// definite. Callers that validate inputs up front never see this.
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

// A symmetric cone of rank r: real symmetric PD matrices for d = 1, complex
// Hermitian PD matrices for d = 2. n is the real dimension r + r(r-1)d/2.
struct ConeSpec {
  int d = 1;
  int r = 1;
  int n = 1;
};

ConeSpec make_cone_spec(int d, int r);

// Validates the d/r/n invariants; throws std::invalid_argument on violation.
void validate_cone_spec(const ConeSpec& cone);

// An ordered partition k^(1..h) of the rank of a cone, with the cumulative
// quantities used throughout: r_(i) = k^(1)+...+k^(i), n_(i) the dimension of
// the rank-r_(i) subcone, and m^(i) the dimension of the rank-k^(i) cone.
// Block indices i are 1-based in every accessor, matching the notation
// r_(0) = n_(0) = 0 for the empty prefix.
struct Partition {
  ConeSpec cone;
  std::vector<int> blocks;

  int h() const { return static_cast<int>(blocks.size()); }

  int k_of(int i) const { return blocks.at(static_cast<size_t>(i) - 1); }

  int r_of(int i) const {
    int r = 0;
    for (int j = 1; j <= i; ++j) r += k_of(j);
    return r;
  }

  long n_of(int i) const {
    const long ri = r_of(i);
    return ri + ri * (ri - 1) * cone.d / 2;
  }

  long m_of(int i) const {
    const long ki = k_of(i);
    return ki + ki * (ki - 1) * cone.d / 2;
  }

  // n_(i)/r_(i) evaluated as (r_(i)-1) d/2 + 1, which is exact in floating
  // point and well defined for i = 0 (value 1, never used alone there).
  double nr_ratio(int i) const { return (r_of(i) - 1) * cone.d / 2.0 + 1.0; }
};

Partition make_partition(const ConeSpec& cone, std::vector<int> blocks);

// Per-block exponents t^(1..h) of the prior family.
struct HyperT {
  std::vector<double> t;
};

// Two-sided enclosure [lower, upper] of a scalar value.
struct Bracket {
  double lower = 0.0;
  double upper = 0.0;

  bool contains(double v) const { return lower <= v && v <= upper; }
  double width() const { return upper - lower; }
};

}  // namespace wishrisk
