// Exact prediction risks, derivatives, normalized summaries, eigenvalues,
// and their large-shape expansions.  All block risks are evaluated through
// the cancellation-free log-gamma and digamma differences in specfun, so
// precision does not degrade as the observation shape grows.

#include "wishrisk/risk.hpp"

namespace wishrisk {

namespace {

void check_block_index(const Partition& p, int i, const char* op) {
  if (i < 1 || i > p.h()) {
    throw std::invalid_argument(std::string(op) + ": block index " +
                                std::to_string(i) + " outside 1.." +
                                std::to_string(p.h()));
  }
}

// Properness boundary of the updated prior in block i: the exponent must
// exceed -mu - ((r_(i) - k^(i))/2) d - 1.
void check_exponent(const Partition& p, int i, double t_i, double mu,
                    const char* op) {
  const double bound =
      -mu - (p.r_of(i) - p.k_of(i)) * p.cone.d / 2.0 - 1.0;
  if (!(t_i > bound)) {
    throw std::domain_error(std::string(op) + ": exponent for block " +
                            std::to_string(i) + " must exceed " +
                            std::to_string(bound) + ", got " +
                            std::to_string(t_i));
  }
}

// B^(i) = t_i + mu + n_(i)/r_(i), the rank-k^(i) log-gamma argument of the
// block risk.  Shared so the risk, its derivatives, and the second
// difference all evaluate it with identical floating-point arithmetic.
double gamma_arg(const Partition& p, int i, double t_i, double mu) {
  return t_i + mu + p.nr_ratio(i);
}

}  // namespace

double part_risk_exact(const Partition& p, int i, double t_i, double mu,
                       double nu) {
  check_block_index(p, i, "part_risk_exact");
  check_mu_domain(p.cone, mu, "part_risk_exact (observation shape)");
  check_mu_domain(p.cone, nu, "part_risk_exact (prediction shape)");
  check_exponent(p, i, t_i, mu, "part_risk_exact");

  const int d = p.cone.d;
  const int k = p.k_of(i);
  const int ri = p.r_of(i);
  const ConeSpec cone_k = make_cone_spec(d, k);
  const ConeSpec cone_i = make_cone_spec(d, ri);

  // Difference form of the block risk: with B = t_i + mu + n_(i)/r_(i) and
  // B' its rank-(i-1) counterpart,
  //   - nu k - [logGamma_k(B + nu) - logGamma_k(B)]
  //   + (B  + nu) [psi_{r_(i)}(mu + nu)   - psi_{r_(i)}(mu)]
  //   - (B' + nu) [psi_{r_(i-1)}(mu + nu) - psi_{r_(i-1)}(mu)]
  //   + nu psi_{k}(mu - (r_(i) - k) d/2).
  // The B' bracket is structurally absent for i = 1, where the trailing
  // psi_k term reduces to nu psi_{r_(1)}(mu) and completes the expansion.
  const double big = gamma_arg(p, i, t_i, mu);
  double value = -nu * k - mv_log_gamma_diff(cone_k, big, nu) +
                 (big + nu) * mv_digamma_diff(cone_i, mu, nu) +
                 nu * mvpolygamma(cone_k, 0, mu - (ri - k) * d / 2.0);
  if (i >= 2) {
    const ConeSpec cone_prev = make_cone_spec(d, p.r_of(i - 1));
    const double prev = gamma_arg(p, i - 1, t_i, mu);
    value -= (prev + nu) * mv_digamma_diff(cone_prev, mu, nu);
  }
  return value;
}

RiskReport exact_risk(const Partition& p, const HyperT& t, double mu,
                      double nu) {
  const int h = p.h();
  if (static_cast<int>(t.t.size()) != h) {
    throw std::invalid_argument("exact_risk: expected " + std::to_string(h) +
                                " exponents, got " +
                                std::to_string(t.t.size()));
  }

  const HyperT flat = canonical_hyperparams(p, PriorKind::kJeffreys);
  RiskReport report;
  report.parts.resize(static_cast<size_t>(h));
  report.grad.resize(static_cast<size_t>(h));
  report.hess_diag.resize(static_cast<size_t>(h));

  // Accumulates total - (total at the flat exponents) block by block in
  // difference form, so the normalized risk difference is exactly zero at
  // the flat vector instead of a rounded difference of two totals.
  double second_diff = 0.0;

  for (int i = 1; i <= h; ++i) {
    const size_t idx = static_cast<size_t>(i) - 1;
    const double t_i = t.t[idx];
    report.parts[idx] = part_risk_exact(p, i, t_i, mu, nu);
    report.total += report.parts[idx];

    const int d = p.cone.d;
    const int k = p.k_of(i);
    const int ri = p.r_of(i);
    const ConeSpec cone_k = make_cone_spec(d, k);
    const double big = gamma_arg(p, i, t_i, mu);
    const double shifted = mu - (ri - k) * d / 2.0;

    // d/dt of the block risk:
    //   -psi_k(B + nu) + psi_k(B) + psi_k(shifted + nu) - psi_k(shifted)
    // with shifted = mu - (r_(i) - k) d/2.  At the right-invariant exponent
    // B coincides with shifted and the four terms cancel in pairs.
    report.grad[idx] = -mvpolygamma(cone_k, 0, big + nu) +
                       mvpolygamma(cone_k, 0, big) +
                       mvpolygamma(cone_k, 0, shifted + nu) -
                       mvpolygamma(cone_k, 0, shifted);

    // d^2/dt^2: psi'_k(B) - psi'_k(B + nu), positive because psi'_k is
    // strictly decreasing.
    report.hess_diag[idx] =
        mvpolygamma(cone_k, 1, big) - mvpolygamma(cone_k, 1, big + nu);

    // Block contribution to total - (total at flat exponents).  The
    // constant and lone-psi terms cancel between the two risks, leaving
    // two log-gamma differences plus a digamma-difference term scaled by
    // the exponent offset.
    const double flat_big = gamma_arg(p, i, flat.t[idx], mu);
    second_diff += mv_log_gamma_diff(cone_k, flat_big, nu) -
                   mv_log_gamma_diff(cone_k, big, nu) +
                   (t_i - flat.t[idx]) * mv_digamma_diff(cone_k, shifted, nu);
  }

  report.nr = mu / nu * report.total;
  report.nrd = mu * mu / nu * second_diff;
  return report;
}

double lb_eigenvalue(const Partition& p, const HyperT& t) {
  const int h = p.h();
  if (static_cast<int>(t.t.size()) != h) {
    throw std::invalid_argument(
        "lb_eigenvalue: expected " + std::to_string(h) + " exponents, got " +
        std::to_string(t.t.size()));
  }
  const HyperT invariant = canonical_hyperparams(p, PriorKind::kRightInvariant);
  const double d = p.cone.d;
  const int r = p.cone.r;
  double value = 0.0;
  for (int i = 1; i <= h; ++i) {
    const size_t idx = static_cast<size_t>(i) - 1;
    const double k = p.k_of(i);
    const double offset = t.t[idx] - invariant.t[idx];
    const double depth = r - 2 * p.r_of(i) + p.k_of(i);
    value += 0.25 * k * offset * offset - d * d / 16.0 * k * depth * depth;
  }
  return value;
}

double asympt_part_risk(const Partition& p, int i, double t_i, double mu,
                        double nu) {
  check_block_index(p, i, "asympt_part_risk");
  const double d = p.cone.d;
  const double k = p.k_of(i);
  const double ri = p.r_of(i);

  // Expansion of the block risk through the mu^{-2} terms: the value at the
  // right-invariant exponent plus the quadratic correction
  // (nu/mu^2)(1/2) k (t_i - t_R)^2.  c1 is the nu/mu coefficient, equal to
  // (n_(i) - n_(i-1))/2; c2 is the nu/mu^2 coefficient at the minimizer.
  const double c1 = 0.5 * k + d / 4.0 * k * (2.0 * ri - k - 1.0);
  const double c2 = k / 6.0 + d / 4.0 * k * (2.0 * ri - k - 1.0) +
                    d * d / 24.0 * k *
                        (3.0 * ri * ri - 6.0 * ri - 3.0 * k * (ri - 1.0) +
                         2.0 * k * k + 1.0);
  const HyperT invariant = canonical_hyperparams(p, PriorKind::kRightInvariant);
  const double offset = t_i - invariant.t[static_cast<size_t>(i) - 1];
  return nu / mu * c1 - nu * nu / (mu * mu) * (0.5 * c1) +
         nu / (mu * mu) * (c2 + 0.5 * k * offset * offset);
}

}  // namespace wishrisk
