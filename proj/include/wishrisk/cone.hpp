// Dense symmetric-cone linear algebra: log-determinants, Schur complements,
// and the block-triangular reparameterization used by the prior family.
//
// Matrices are plain Eigen dense types templated on the scalar: double for
// the real symmetric cone (d = 1), std::complex<double> for the complex
// Hermitian cone (d = 2).  Positive definiteness is decided by an unpivoted
// Cholesky factorization throughout.
#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <sstream>
#include <stdexcept>
#include <utility>
#include <vector>

#include "wishrisk/types.hpp"

namespace wishrisk {

template <typename Scalar>
using DenseMatrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

using RealMatrix = DenseMatrix<double>;
using ComplexMatrix = DenseMatrix<std::complex<double>>;

/// Largest absolute deviation of x from its own conjugate transpose.
template <typename Derived>
double hermitian_violation(const Eigen::MatrixBase<Derived>& x) {
  if (x.rows() != x.cols()) {
    throw std::invalid_argument("hermitian_violation: matrix must be square");
  }
  return (x - x.adjoint()).cwiseAbs().maxCoeff();
}

/// Throws std::invalid_argument unless x is Hermitian to relative
/// tolerance 1e-12 (measured against the largest entry magnitude).
template <typename Derived>
void check_hermitian(const Eigen::MatrixBase<Derived>& x) {
  const double scale = std::max(1.0, x.cwiseAbs().maxCoeff());
  if (hermitian_violation(x) > 1e-12 * scale) {
    throw std::invalid_argument("matrix is not Hermitian to tolerance");
  }
}

/// log|x| for positive definite x via Cholesky.  Throws NumericalError if
/// the factorization breaks down (x not positive definite).
template <typename Derived>
double log_det(const Eigen::MatrixBase<Derived>& x) {
  using Scalar = typename Derived::Scalar;
  if (x.rows() != x.cols()) {
    throw std::invalid_argument("log_det: matrix must be square");
  }
  Eigen::LLT<DenseMatrix<Scalar>> llt(x.derived());
  if (llt.info() != Eigen::Success) {
    throw NumericalError("log_det: matrix is not positive definite");
  }
  double acc = 0.0;
  const auto& l = llt.matrixLLT();
  for (Eigen::Index i = 0; i < l.rows(); ++i) {
    acc += std::log(std::real(l(i, i)));
  }
  return 2.0 * acc;
}

/// True when x is Hermitian (to tolerance) and its Cholesky factorization
/// succeeds.
template <typename Derived>
bool is_pd(const Eigen::MatrixBase<Derived>& x) {
  using Scalar = typename Derived::Scalar;
  if (x.rows() != x.cols()) return false;
  const double scale = std::max(1.0, x.cwiseAbs().maxCoeff());
  if (hermitian_violation(x) > 1e-12 * scale) return false;
  Eigen::LLT<DenseMatrix<Scalar>> llt(x.derived());
  return llt.info() == Eigen::Success;
}

/// Trace inner product Re tr(xy).  Real-valued for Hermitian arguments.
template <typename DerivedA, typename DerivedB>
double real_inner(const Eigen::MatrixBase<DerivedA>& x,
                  const Eigen::MatrixBase<DerivedB>& y) {
  if (x.rows() != y.cols() || x.cols() != y.rows()) {
    throw std::invalid_argument("real_inner: incompatible dimensions");
  }
  return std::real((x * y).trace());
}

/// Schur complement of the trailing block: with x split at `split` rows into
/// [[a, b], [b*, c]], returns a - b c^{-1} b*.  The result is symmetrized to
/// keep repeated peeling exactly Hermitian.  Throws NumericalError when the
/// trailing block is not positive definite.
template <typename Derived>
DenseMatrix<typename Derived::Scalar> schur_complement(
    const Eigen::MatrixBase<Derived>& x, Eigen::Index split) {
  using Scalar = typename Derived::Scalar;
  if (x.rows() != x.cols()) {
    throw std::invalid_argument("schur_complement: matrix must be square");
  }
  if (split < 1 || split >= x.rows()) {
    std::ostringstream msg;
    msg << "schur_complement: split " << split << " out of range for a "
        << x.rows() << "x" << x.rows() << " matrix";
    throw std::invalid_argument(msg.str());
  }
  const Eigen::Index m = x.rows() - split;
  const DenseMatrix<Scalar> a = x.topLeftCorner(split, split);
  const DenseMatrix<Scalar> b = x.topRightCorner(split, m);
  const DenseMatrix<Scalar> c = x.bottomRightCorner(m, m);
  Eigen::LLT<DenseMatrix<Scalar>> llt(c);
  if (llt.info() != Eigen::Success) {
    throw NumericalError(
        "schur_complement: trailing block is not positive definite");
  }
  DenseMatrix<Scalar> s = a - b * llt.solve(b.adjoint());
  return ((s + s.adjoint()) / Scalar(2)).eval();
}

/// Positive definite cone element: a square Hermitian matrix with a
/// successful Cholesky factorization.  Construction validates both
/// properties and throws NumericalError otherwise, so downstream code can
/// rely on the invariant.
template <typename Scalar>
class ConeElement {
 public:
  explicit ConeElement(DenseMatrix<Scalar> m) : mat_(std::move(m)) {
    if (mat_.rows() != mat_.cols()) {
      throw NumericalError("cone element must be square");
    }
    const double scale = std::max(1.0, mat_.cwiseAbs().maxCoeff());
    if (hermitian_violation(mat_) > 1e-12 * scale) {
      throw NumericalError("cone element is not Hermitian to tolerance");
    }
    Eigen::LLT<DenseMatrix<Scalar>> llt(mat_);
    if (llt.info() != Eigen::Success) {
      throw NumericalError("cone element is not positive definite");
    }
  }

  const DenseMatrix<Scalar>& mat() const { return mat_; }
  Eigen::Index rank() const { return mat_.rows(); }

 private:
  DenseMatrix<Scalar> mat_;
};

/// Block-triangular coordinates of a positive definite matrix relative to a
/// partition: the fully reduced leading block zeta1 together with, for each
/// later block i = 2..h, the off-diagonal strip xi_half[i-2] and the
/// trailing diagonal block xi_0[i-2] of the i-th partial Schur reduction.
template <typename Scalar>
struct PhiParam {
  DenseMatrix<Scalar> zeta1;
  std::vector<DenseMatrix<Scalar>> xi_half;
  std::vector<DenseMatrix<Scalar>> xi_0;

  /// Diagonal coordinate block for 1-based block index i; block 1 is zeta1.
  const DenseMatrix<Scalar>& xi0_block(int i) const {
    if (i == 1) return zeta1;
    return xi_0.at(static_cast<std::size_t>(i) - 2);
  }
};

/// Decomposes positive definite xi into block-triangular coordinates by
/// peeling trailing blocks: at stage i the current leading r_(i) x r_(i)
/// matrix splits at r_(i-1), the trailing k_i x k_i block and the strip
/// above it are recorded, and the leading part is replaced by its Schur
/// complement.  log|xi| equals the sum of log|xi0_block(i)|.
template <typename Scalar>
PhiParam<Scalar> xi_to_phi(const DenseMatrix<Scalar>& xi, const Partition& p) {
  if (xi.rows() != p.cone.r || xi.cols() != p.cone.r) {
    throw std::invalid_argument("xi_to_phi: matrix rank does not match cone");
  }
  check_hermitian(xi);
  PhiParam<Scalar> phi;
  const int h = p.h();
  phi.xi_half.resize(static_cast<std::size_t>(h > 1 ? h - 1 : 0));
  phi.xi_0.resize(phi.xi_half.size());
  DenseMatrix<Scalar> zeta = xi;
  for (int i = h; i >= 2; --i) {
    const Eigen::Index split = p.r_of(i - 1);
    const Eigen::Index k = p.k_of(i);
    phi.xi_half[static_cast<std::size_t>(i) - 2] =
        zeta.topRightCorner(split, k);
    phi.xi_0[static_cast<std::size_t>(i) - 2] =
        ((zeta.bottomRightCorner(k, k) +
          zeta.bottomRightCorner(k, k).adjoint()) /
         Scalar(2))
            .eval();
    zeta = schur_complement(zeta, split);
  }
  phi.zeta1 = std::move(zeta);
  return phi;
}

/// Inverse of xi_to_phi: rebuilds the positive definite matrix from its
/// block-triangular coordinates.
template <typename Scalar>
DenseMatrix<Scalar> phi_to_xi(const PhiParam<Scalar>& phi, const Partition& p) {
  const int h = p.h();
  if (phi.zeta1.rows() != p.k_of(1) ||
      phi.xi_half.size() != static_cast<std::size_t>(h - 1) ||
      phi.xi_0.size() != static_cast<std::size_t>(h - 1)) {
    throw std::invalid_argument(
        "phi_to_xi: coordinate blocks do not match partition");
  }
  DenseMatrix<Scalar> zeta = phi.zeta1;
  for (int i = 2; i <= h; ++i) {
    const Eigen::Index split = p.r_of(i - 1);
    const Eigen::Index k = p.k_of(i);
    const auto& half = phi.xi_half[static_cast<std::size_t>(i) - 2];
    const auto& diag = phi.xi_0[static_cast<std::size_t>(i) - 2];
    if (half.rows() != split || half.cols() != k || diag.rows() != k ||
        diag.cols() != k) {
      throw std::invalid_argument(
          "phi_to_xi: coordinate block dimensions do not match partition");
    }
    Eigen::LLT<DenseMatrix<Scalar>> llt(diag);
    if (llt.info() != Eigen::Success) {
      throw NumericalError(
          "phi_to_xi: diagonal coordinate block is not positive definite");
    }
    DenseMatrix<Scalar> tl = zeta + half * llt.solve(half.adjoint());
    tl = ((tl + tl.adjoint()) / Scalar(2)).eval();
    DenseMatrix<Scalar> next(split + k, split + k);
    next.topLeftCorner(split, split) = tl;
    next.topRightCorner(split, k) = half;
    next.bottomLeftCorner(k, split) = half.adjoint();
    next.bottomRightCorner(k, k) = diag;
    zeta = std::move(next);
  }
  return zeta;
}

}  // namespace wishrisk
