// Multivariate gamma, digamma, and polygamma functions on symmetric cones,
// certified two-sided scalar brackets, asymptotic expansions, and
// cancellation-free log-gamma / digamma differences.
#pragma once

#include "wishrisk/types.hpp"

namespace wishrisk {

// Throws std::domain_error with a message naming `op` unless
// mu > (r-1)d/2, the existence threshold shared by every shape-like
// parameter in the library.
void check_mu_domain(const ConeSpec& cone, double mu, const char* op);

// log Gamma_r(mu) via the product decomposition
//   (d r(r-1)/4) log pi + sum_{j=1}^{r} lgamma(mu - (j-1) d/2).
// Requires mu > (r-1)d/2; throws std::domain_error otherwise.
double log_mvgamma(const ConeSpec& cone, double mu);

// psi_r^{(order)}(mu) = sum_{j=1}^{r} psi^{(order)}(mu - (j-1) d/2).
// order 0 is the multivariate digamma. Orders 0..2 are supported (nothing in
// the library needs higher derivatives); order > 2 throws
// std::invalid_argument, mu outside the domain throws std::domain_error.
double mvpolygamma(const ConeSpec& cone, int order, double mu);

// Two-sided enclosure of log Gamma(z) (resp. psi(z)) built from consecutive
// partial sums of the Bernoulli series: the remainder after N terms carries
// the sign of the first omitted term and is bounded by it, so the partial
// sums with N and N+1 terms straddle the true value. Evaluation is performed
// at an internally shifted argument (where the series terms decrease) and
// exactly un-shifted; endpoints carry an outward floating-point guard. The
// guarantee is containment of the true value for every z > 0, terms >= 1.
Bracket log_gamma_bracket(double z, int terms);
Bracket digamma_bracket(double z, int terms);

// Asymptotic expansion of log Gamma_r(mu + x) through the mu^{-2} term, all
// coefficients polynomial in (d, r, x). Accuracy is the caller's concern:
// the remainder is O(mu^{-3}) for fixed (d, r, x).
double asympt_log_mvgamma(const ConeSpec& cone, double mu, double x);

// Same for psi_r(mu + x); the expansion is the x-derivative of the one above.
double asympt_mvdigamma(const ConeSpec& cone, double mu, double x);

// lgamma(x + delta) - lgamma(x) without forming the two large values. Exact
// downward shift to the asymptotic regime plus a Stirling-difference series
// in log1p/expm1 form; absolute error stays near machine epsilon even when
// the two log-gamma values are ~1e6 and their difference is O(1).
// Requires x > 0 and x + delta > 0.
double log_gamma_diff(double x, double delta);

// psi(x + delta) - psi(x), same construction and domain.
double digamma_diff(double x, double delta);

// Multivariate versions: sum of the scalar differences over the cone shifts,
//   sum_{j=1}^{r} f(a - (j-1) d/2, delta).
double mv_log_gamma_diff(const ConeSpec& cone, double a, double delta);
double mv_digamma_diff(const ConeSpec& cone, double a, double delta);

}  // namespace wishrisk
