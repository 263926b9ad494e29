// Conjugate prior family on the block-triangular coordinates of a symmetric
// cone: canonical hyperparameter choices, unnormalized log densities,
// per-block normalization constants, posterior updates, and the multiplier
// describing how the densities transform under block-triangular group
// actions.
#pragma once

#include <cmath>
#include <sstream>
#include <stdexcept>
#include <utility>
#include <vector>

#include "wishrisk/cone.hpp"
#include "wishrisk/specfun.hpp"
#include "wishrisk/types.hpp"

namespace wishrisk {

enum class PriorKind { kJeffreys, kReference, kRightInvariant };

/// Canonical exponent vectors: Jeffreys uses the same exponent
/// -((r-1)d/2 + 1) in every block, the reference choice replaces the global
/// rank by the cumulative rank r_(i), and the right-invariant choice uses
/// -((2 r_(i) - k_i - 1)d/2 + 1).  The first components of the reference and
/// right-invariant vectors always coincide.
HyperT canonical_hyperparams(const Partition& p, PriorKind kind);

/// Per-block scale hyperparameters: block i carries a Hermitian positive
/// semi-definite matrix of rank r_(i) (eigenvalues above -1e-10).
template <typename Scalar>
struct HyperS {
  std::vector<DenseMatrix<Scalar>> s;

  static HyperS zero(const Partition& p) {
    HyperS out;
    out.s.reserve(static_cast<std::size_t>(p.h()));
    for (int i = 1; i <= p.h(); ++i) {
      out.s.push_back(
          DenseMatrix<Scalar>::Zero(p.r_of(i), p.r_of(i)));
    }
    return out;
  }

  const DenseMatrix<Scalar>& block(int i) const {
    return s.at(static_cast<std::size_t>(i) - 1);
  }
  DenseMatrix<Scalar>& block(int i) {
    return s.at(static_cast<std::size_t>(i) - 1);
  }
};

/// Validates dimensions, Hermitian structure, and positive
/// semi-definiteness of every scale block.
template <typename Scalar>
void check_hyper_s(const Partition& p, const HyperS<Scalar>& s) {
  if (s.s.size() != static_cast<std::size_t>(p.h())) {
    throw std::invalid_argument(
        "scale hyperparameter must have one block per partition block");
  }
  for (int i = 1; i <= p.h(); ++i) {
    const auto& si = s.block(i);
    if (si.rows() != p.r_of(i) || si.cols() != p.r_of(i)) {
      std::ostringstream msg;
      msg << "scale block " << i << " must have rank " << p.r_of(i);
      throw std::invalid_argument(msg.str());
    }
    check_hermitian(si);
    Eigen::SelfAdjointEigenSolver<DenseMatrix<Scalar>> es(
        si, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success || es.eigenvalues().minCoeff() < -1e-10) {
      std::ostringstream msg;
      msg << "scale block " << i << " must be positive semi-definite";
      throw std::invalid_argument(msg.str());
    }
  }
}

/// Unnormalized log density of the prior with hyperparameters (s, t) in
/// block-triangular coordinates.  Block 1 contributes
/// t_1 log|zeta1| - <zeta1|s^(1)>; block i >= 2 contributes
/// t_i log|xi0| minus the pairing of (xi_half xi0^{-1} xi_half*, xi_half,
/// xi0) with the corresponding split of s^(i), where the off-diagonal strip
/// is paired with weight 2 Re tr so that the blockwise sum reproduces the
/// full trace inner product.
template <typename Scalar>
double log_prior_density(const Partition& p, const HyperS<Scalar>& s,
                         const HyperT& t, const PhiParam<Scalar>& phi) {
  if (t.t.size() != static_cast<std::size_t>(p.h())) {
    throw std::invalid_argument(
        "exponent hyperparameter must have one entry per block");
  }
  check_hyper_s(p, s);
  double acc = t.t[0] * log_det(phi.zeta1) - real_inner(phi.zeta1, s.block(1));
  for (int i = 2; i <= p.h(); ++i) {
    const Eigen::Index split = p.r_of(i - 1);
    const Eigen::Index k = p.k_of(i);
    const auto& half = phi.xi_half[static_cast<std::size_t>(i) - 2];
    const auto& diag = phi.xi_0[static_cast<std::size_t>(i) - 2];
    const auto& si = s.block(i);
    const DenseMatrix<Scalar> s1 = si.topLeftCorner(split, split);
    const DenseMatrix<Scalar> sh = si.topRightCorner(split, k);
    const DenseMatrix<Scalar> s0 = si.bottomRightCorner(k, k);

    Eigen::LLT<DenseMatrix<Scalar>> llt(diag);
    if (llt.info() != Eigen::Success) {
      throw NumericalError(
          "log_prior_density: diagonal coordinate block is not positive "
          "definite");
    }
    const DenseMatrix<Scalar> q = half * llt.solve(half.adjoint());
    acc += t.t[static_cast<std::size_t>(i) - 1] * log_det(diag);
    acc -= real_inner(q, s1);
    acc -= 2.0 * std::real((half * sh.adjoint()).trace());
    acc -= real_inner(diag, s0);
  }
  return acc;
}

/// Log normalization constant of block i of the prior, finite exactly when
/// s_i is positive definite and t_i > -((r_(i) - k_i)/2) d - 1.  For i >= 2
/// it is (r_(i-1) k_i d/2) log pi + log Gamma_{k_i}(t_i + n_(i)/r_(i))
/// + (t_i + n_(i-1)/r_(i-1)) log|s_1| - (t_i + n_(i)/r_(i)) log|s_i| with
/// s_1 the leading r_(i-1) principal block of s_i; for i = 1 only the
/// Gamma and log|s_1| terms survive.
template <typename Derived>
double log_normalization(const Partition& p, int i,
                         const Eigen::MatrixBase<Derived>& s_in, double t_i) {
  using Scalar = typename Derived::Scalar;
  if (i < 1 || i > p.h()) {
    throw std::invalid_argument("log_normalization: block index out of range");
  }
  const DenseMatrix<Scalar> s_i = s_in;
  const int d = p.cone.d;
  const int k = static_cast<int>(p.k_of(i));
  const Eigen::Index ri = p.r_of(i);
  if (s_i.rows() != ri || s_i.cols() != ri) {
    std::ostringstream msg;
    msg << "log_normalization: scale block must have rank " << ri;
    throw std::invalid_argument(msg.str());
  }
  const double bound = -((ri - k) / 2.0) * d - 1.0;
  if (!(t_i > bound)) {
    std::ostringstream msg;
    msg << "log_normalization: t must exceed -((r_i - k_i)/2) d - 1 = "
        << bound;
    throw std::domain_error(msg.str());
  }
  const double arg = t_i + p.nr_ratio(i);
  double acc = log_mvgamma(make_cone_spec(d, k), arg) - arg * log_det(s_i);
  if (i >= 2) {
    const Eigen::Index prev = p.r_of(i - 1);
    const DenseMatrix<Scalar> s1 = s_i.topLeftCorner(prev, prev);
    acc += (static_cast<double>(prev) * k * d / 2.0) * std::log(std::acos(-1.0));
    acc += (t_i + p.nr_ratio(i - 1)) * log_det(s1);
  }
  return acc;
}

/// Conjugate posterior update for an observation x with shape mu: each scale
/// block gains the matching principal submatrix of x and each exponent gains
/// mu.  The pair (prior, update rule) satisfies Bayes' rule: the updated
/// log density minus the prior log density minus the sampling log density
/// of x is constant over the coordinate space.
template <typename Scalar>
std::pair<HyperS<Scalar>, HyperT> posterior_update(const Partition& p,
                                                   const HyperS<Scalar>& s,
                                                   const HyperT& t,
                                                   const ConeElement<Scalar>& x,
                                                   double mu) {
  check_mu_domain(p.cone, mu, "mu");
  if (x.rank() != p.cone.r) {
    throw std::invalid_argument(
        "posterior_update: observation rank does not match cone");
  }
  if (t.t.size() != static_cast<std::size_t>(p.h())) {
    throw std::invalid_argument(
        "exponent hyperparameter must have one entry per block");
  }
  check_hyper_s(p, s);
  HyperS<Scalar> s_post = s;
  HyperT t_post = t;
  for (int i = 1; i <= p.h(); ++i) {
    const Eigen::Index ri = p.r_of(i);
    s_post.block(i) += x.mat().topLeftCorner(ri, ri);
    t_post.t[static_cast<std::size_t>(i) - 1] += mu;
  }
  return {std::move(s_post), std::move(t_post)};
}

/// Congruence action xi -> g xi g* of an invertible matrix on the cone.
template <typename Scalar>
ConeElement<Scalar> group_action(const DenseMatrix<Scalar>& g,
                                 const ConeElement<Scalar>& xi) {
  if (g.rows() != g.cols() || g.rows() != xi.rank()) {
    throw std::invalid_argument("group_action: dimension mismatch");
  }
  Eigen::FullPivLU<DenseMatrix<Scalar>> lu(g);
  if (!lu.isInvertible()) {
    throw std::invalid_argument("group_action: g is singular");
  }
  DenseMatrix<Scalar> y = g * xi.mat() * g.adjoint();
  y = ((y + y.adjoint()) / Scalar(2)).eval();
  return ConeElement<Scalar>(std::move(y));
}

/// log of chi_multiplier below; kept separate so invariance checks can stay
/// in log space.
template <typename Scalar>
double log_chi_multiplier(const Partition& p, const HyperT& t,
                          const DenseMatrix<Scalar>& g) {
  if (g.rows() != g.cols() || g.rows() != p.cone.r) {
    throw std::invalid_argument("chi_multiplier: dimension mismatch");
  }
  if (t.t.size() != static_cast<std::size_t>(p.h())) {
    throw std::invalid_argument(
        "exponent hyperparameter must have one entry per block");
  }
  // the action is only defined for block-upper-triangular g
  for (int i = 1; i < p.h(); ++i) {
    const Eigen::Index split = p.r_of(i);
    if (g.bottomLeftCorner(p.cone.r - split, split).cwiseAbs().maxCoeff() >
        0.0) {
      throw std::invalid_argument(
          "chi_multiplier: g must be block-upper-triangular for the "
          "partition");
    }
  }
  const double global_ratio = (p.cone.r - 1) * p.cone.d / 2.0 + 1.0;
  double acc = 0.0;
  for (int i = 1; i <= p.h(); ++i) {
    const Eigen::Index off = p.r_of(i - 1);
    const Eigen::Index k = p.k_of(i);
    const DenseMatrix<Scalar> gi = g.block(off, off, k, k);
    Eigen::FullPivLU<DenseMatrix<Scalar>> lu(gi);
    if (!lu.isInvertible()) {
      throw std::invalid_argument(
          "chi_multiplier: diagonal block of g is singular");
    }
    const double log_abs_det = std::log(std::abs(lu.determinant()));
    acc += 2.0 * (t.t[static_cast<std::size_t>(i) - 1] + global_ratio) *
           log_abs_det;
  }
  return acc;
}

/// Multiplier chi_t(g) = prod_i |det g^(i)|^{2(t_i + n/r)} over the diagonal
/// blocks of a block-upper-triangular g; describes the relative invariance
/// of the s = 0 prior family under the congruence action.
template <typename Scalar>
double chi_multiplier(const Partition& p, const HyperT& t,
                      const DenseMatrix<Scalar>& g) {
  return std::exp(log_chi_multiplier(p, t, g));
}

}  // namespace wishrisk
