// Exact Kullback-Leibler prediction risks for the conjugate prior family,
// their first and second derivatives in the block exponents, normalized
// risks and risk differences, large-shape asymptotic expansions, and the
// Laplace-Beltrami eigenvalue / eigenfunction pair attached to each
// exponent vector.
//
// Every risk here is a function of the partition, the block exponents, and
// the two shape parameters alone.  No parameter point appears in any
// signature: the risk of the predictive distribution is constant over the
// parameter space, and the API enforces that by construction.
#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "wishrisk/cone.hpp"
#include "wishrisk/priors.hpp"
#include "wishrisk/specfun.hpp"
#include "wishrisk/types.hpp"

namespace wishrisk {

/// Exact risk of a predictive distribution with block exponents t, split
/// into per-block contributions, together with the derived summaries.
///   parts      per-block risks; total is their sum.
///   nr         normalized risk (mu/nu) * total.
///   nrd        normalized risk difference (mu^2/nu) * (total - total at
///              the flat exponent vector); exactly zero when t is that
///              vector.
///   grad       d total / d t^(i), one entry per block.
///   hess_diag  d^2 total / d (t^(i))^2; positive everywhere on the valid
///              domain, so the total is strictly convex in each exponent.
struct RiskReport {
  std::vector<double> parts;
  double total = 0.0;
  double nr = 0.0;
  double nrd = 0.0;
  std::vector<double> grad;
  std::vector<double> hess_diag;
};

/// Risk contribution of block i (1-based) at exponent t_i with observation
/// shape mu and prediction shape nu.  Requires mu and nu above the global
/// existence threshold (r-1)d/2 and
///   t_i > -mu - ((r_(i) - k^(i))/2) d - 1,
/// the properness boundary of the updated prior; throws std::domain_error
/// otherwise.  Computed from cancellation-free log-gamma and digamma
/// differences so the value keeps full precision even when mu is large and
/// the per-block risk is O(nu/mu).
double part_risk_exact(const Partition& p, int i, double t_i, double mu,
                       double nu);

/// Full risk report at exponent vector t: per-block risks, total,
/// normalized risk and risk difference, gradient, and diagonal Hessian.
/// Preconditions are those of part_risk_exact for every block; t must have
/// exactly one exponent per block.
RiskReport exact_risk(const Partition& p, const HyperT& t, double mu,
                      double nu);

/// Laplace-Beltrami eigenvalue of the eigenfunction attached to t:
///   sum_i [ (1/4) k^(i) (t^(i) - t_R^(i))^2
///           - (d^2/16) k^(i) (r - 2 r_(i) + k^(i))^2 ],
/// minimized over t exactly at the right-invariant exponents.
double lb_eigenvalue(const Partition& p, const HyperT& t);

/// Large-mu expansion of part_risk_exact through the mu^{-2} terms: the
/// expansion of the block risk at the right-invariant exponent plus the
/// quadratic correction (nu/mu^2) (1/2) k^(i) (t_i - t_R^(i))^2.  Purely
/// polynomial in the inputs; imposes no domain restrictions beyond a valid
/// block index.
double asympt_part_risk(const Partition& p, int i, double t_i, double mu,
                        double nu);

/// Eigenfunction value at block coordinates phi:
///   prod_i |xi^(i)_0|^{(1/2)(t^(i) + (r-1)d/2 + 1)},
/// evaluated in log space.  Identically 1 at the flat exponent vector.
/// Throws NumericalError when a diagonal block is not positive definite.
template <typename Scalar>
double k_eigenfunction(const Partition& p, const HyperT& t,
                       const PhiParam<Scalar>& phi) {
  const int h = p.h();
  if (static_cast<int>(t.t.size()) != h) {
    throw std::invalid_argument(
        "k_eigenfunction: expected " + std::to_string(h) + " exponents, got " +
        std::to_string(t.t.size()));
  }
  const double flat = (p.cone.r - 1) * p.cone.d / 2.0 + 1.0;
  double log_value = 0.0;
  for (int i = 1; i <= h; ++i) {
    const auto& block = phi.xi0_block(i);
    if (block.rows() != p.k_of(i)) {
      throw std::invalid_argument(
          "k_eigenfunction: diagonal block " + std::to_string(i) + " is " +
          std::to_string(block.rows()) + "x" + std::to_string(block.cols()) +
          ", expected rank " + std::to_string(p.k_of(i)));
    }
    log_value += 0.5 * (t.t[static_cast<size_t>(i) - 1] + flat) *
                 log_det(block);
  }
  return std::exp(log_value);
}

}  // namespace wishrisk
