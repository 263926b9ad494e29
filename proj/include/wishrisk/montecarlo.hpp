// Seeded sampling on symmetric cones and Monte Carlo estimation of the
// prediction risk: per-sample counter-derived random streams, a
// Bartlett-style cone sampler, exact sampling log-densities, the
// closed-form Bayesian predictive log-density, and the risk estimator that
// cross-validates the exact risk formulas.
#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include "wishrisk/cone.hpp"
#include "wishrisk/priors.hpp"
#include "wishrisk/specfun.hpp"
#include "wishrisk/types.hpp"

namespace wishrisk {

/// Sample-size plan of a Monte Carlo risk estimate: n_outer observation
/// draws, each scoring n_inner prediction draws.  Estimates are a pure
/// function of (seed, n_outer, n_inner); worker count never changes them.
struct McConfig {
  std::uint64_t seed = 0;
  std::int64_t n_outer = 1;
  std::int64_t n_inner = 1;
};

/// Estimate with its standard error (from the outer-level empirical
/// variance; 0 when n_outer == 1) and the total number of prediction draws.
struct McEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::int64_t n_total = 0;
};

/// Deterministic random stream derived from (seed, sample index) by
/// avalanche mixing, so any sample's stream can be reconstructed without
/// generating its predecessors and parallel scheduling cannot reorder
/// draws.  Successive outputs walk a Weyl sequence through the same mixer.
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t sample_index);

  /// Uniform draw in the half-open interval (0, 1]; never returns 0, so
  /// logarithms of draws are always finite.
  double uniform();

  /// Standard normal draw (Box-Muller, second value cached).
  double normal();

  /// Gamma draw with the given shape and unit scale.  Shapes below 1 are
  /// boosted through the power-of-uniform identity; shapes >= 1 use
  /// squeeze-accepted rejection from a scaled squared-normal proposal.
  /// Throws std::invalid_argument unless shape > 0.
  double gamma(double shape);

 private:
  std::uint64_t next_raw();

  std::uint64_t state_ = 0;
  double cached_normal_ = 0.0;
  bool have_cached_normal_ = false;
};

/// Worker count for parallel estimation: `requested` if positive, else the
/// WISHRISK_THREADS environment variable if set to a positive integer, else
/// the hardware concurrency (at least 1).
int resolve_thread_count(int requested);

namespace detail {

template <typename Scalar>
void check_scalar_kind(const ConeSpec& cone, const char* op) {
  constexpr bool is_complex = std::is_same_v<Scalar, std::complex<double>>;
  if ((cone.d == 2) != is_complex) {
    throw std::invalid_argument(
        std::string(op) +
        ": scalar type does not match the cone (real matrices for d = 1, "
        "complex for d = 2)");
  }
}

template <typename Scalar>
Scalar off_diagonal_entry(int d, RngStream& rng) {
  // Per real component the variance is 1/2.
  constexpr double kRootHalf = 0.70710678118654752440;
  if constexpr (std::is_same_v<Scalar, double>) {
    (void)d;
    return kRootHalf * rng.normal();
  } else {
    return Scalar(kRootHalf * rng.normal(), kRootHalf * rng.normal());
  }
}

}  // namespace detail

/// Draws X with log-density (mu - n/r) log|x| - log Gamma_r(mu)
/// + mu log|xi| - <xi|x>.  Bartlett construction: lower-triangular T with
/// T_ii^2 ~ Gamma(mu - (i-1) d/2, unit scale) and off-diagonal entries of
/// per-real-component variance 1/2 gives TT* with identity natural
/// parameter; X = C (TT*) C* maps it to xi through any C with C* xi C = I,
/// here C = U^{-1} from the Cholesky factorization xi = U* U.
template <typename Scalar>
ConeElement<Scalar> sample_wishart(const ConeSpec& cone, double mu,
                                   const ConeElement<Scalar>& xi,
                                   RngStream& rng) {
  detail::check_scalar_kind<Scalar>(cone, "sample_wishart");
  validate_cone_spec(cone);
  if (xi.rank() != cone.r) {
    throw std::invalid_argument("sample_wishart: natural parameter has rank " +
                                std::to_string(xi.rank()) + ", cone has rank " +
                                std::to_string(cone.r));
  }
  check_mu_domain(cone, mu, "sample_wishart");

  const int r = cone.r;
  DenseMatrix<Scalar> tri = DenseMatrix<Scalar>::Zero(r, r);
  for (int i = 0; i < r; ++i) {
    tri(i, i) = Scalar(std::sqrt(rng.gamma(mu - i * cone.d / 2.0)));
    for (int j = 0; j < i; ++j) {
      tri(i, j) = detail::off_diagonal_entry<Scalar>(cone.d, rng);
    }
  }

  Eigen::LLT<DenseMatrix<Scalar>> llt(xi.mat());
  if (llt.info() != Eigen::Success) {
    throw NumericalError(
        "sample_wishart: natural parameter lost positive definiteness");
  }
  // With xi = U* U (U upper triangular), C = U^{-1} satisfies C* xi C = I,
  // so X = (U^{-1} T)(U^{-1} T)*.
  const DenseMatrix<Scalar> mapped =
      llt.matrixU().template solve<Eigen::OnTheLeft>(tri);
  DenseMatrix<Scalar> x = mapped * mapped.adjoint();
  x = ((x + x.adjoint()) / 2.0).eval();
  return ConeElement<Scalar>(x);
}

/// Log-density of the sampling law at x:
///   (mu - n/r) log|x| - log Gamma_r(mu) + mu log|xi| - <xi|x>.
template <typename Scalar>
double log_wishart_density(const ConeSpec& cone, double mu,
                           const ConeElement<Scalar>& xi,
                           const ConeElement<Scalar>& x) {
  detail::check_scalar_kind<Scalar>(cone, "log_wishart_density");
  validate_cone_spec(cone);
  if (xi.rank() != cone.r || x.rank() != cone.r) {
    throw std::invalid_argument(
        "log_wishart_density: argument rank does not match the cone");
  }
  check_mu_domain(cone, mu, "log_wishart_density");
  const double ratio = (cone.r - 1) * cone.d / 2.0 + 1.0;
  return (mu - ratio) * log_det(x.mat()) - log_mvgamma(cone, mu) +
         mu * log_det(xi.mat()) - real_inner(xi.mat(), x.mat());
}

/// Closed-form log-density of the Bayesian predictive distribution at y
/// after observing x: the sampling-density front factor of y plus, per
/// block, the difference of posterior normalization constants between the
/// (x, y)-updated and x-updated hyperparameters.  Throws domain errors when
/// a shape is out of range or an updated exponent is improper.
template <typename Scalar>
double log_predictive_density(const Partition& p, const HyperS<Scalar>& s,
                              const HyperT& t, double mu, double nu,
                              const ConeElement<Scalar>& x,
                              const ConeElement<Scalar>& y) {
  detail::check_scalar_kind<Scalar>(p.cone, "log_predictive_density");
  check_mu_domain(p.cone, nu, "log_predictive_density (prediction shape)");
  const auto [s_x, t_x] = posterior_update(p, s, t, x, mu);
  const auto [s_xy, t_xy] = posterior_update(p, s_x, t_x, y, nu);

  double acc = (nu - p.nr_ratio(p.h())) * log_det(y.mat()) -
               log_mvgamma(p.cone, nu);
  for (int i = 1; i <= p.h(); ++i) {
    acc += log_normalization(p, i, s_xy.block(i), t_xy.t[i - 1]) -
           log_normalization(p, i, s_x.block(i), t_x.t[i - 1]);
  }
  return acc;
}

namespace detail {

/// Compensated (Kahan) accumulator for long deterministic reductions.
class CompensatedSum {
 public:
  void add(double value) {
    const double adjusted = value - compensation_;
    const double next = sum_ + adjusted;
    compensation_ = (next - sum_) - adjusted;
    sum_ = next;
  }
  double value() const { return sum_; }

 private:
  double sum_ = 0.0;
  double compensation_ = 0.0;
};

void run_indexed_chunks(std::int64_t count, int threads,
                        const std::function<void(std::int64_t, std::int64_t)>&
                            chunk_body);

}  // namespace detail

/// Monte Carlo estimate of the prediction risk
///   E_X E_Y [ log p(Y | nu, xi) - log delta(Y | X) ]
/// with X drawn at shape mu and Y at shape nu, both at natural parameter
/// xi.  Outer sample i uses the stream derived from (cfg.seed, i) for its
/// observation and all of its prediction draws, and the reduction over
/// outer samples is sequential compensated summation, so the estimate is
/// bit-identical for any worker count.  `threads` is resolved by
/// resolve_thread_count.
template <typename Scalar>
McEstimate mc_risk(const Partition& p, const HyperS<Scalar>& s,
                   const HyperT& t, double mu, double nu,
                   const ConeElement<Scalar>& xi, const McConfig& cfg,
                   int threads = 0) {
  detail::check_scalar_kind<Scalar>(p.cone, "mc_risk");
  if (cfg.n_outer < 1 || cfg.n_inner < 1) {
    throw std::invalid_argument("mc_risk: sample counts must be at least 1");
  }
  check_mu_domain(p.cone, mu, "mc_risk (observation shape)");
  check_mu_domain(p.cone, nu, "mc_risk (prediction shape)");
  check_hyper_s(p, s);
  if (t.t.size() != static_cast<std::size_t>(p.h())) {
    throw std::invalid_argument("mc_risk: expected " + std::to_string(p.h()) +
                                " exponents, got " +
                                std::to_string(t.t.size()));
  }
  // Posterior propriety per block, checked up front so failures carry a
  // clear message instead of surfacing from a worker thread.
  for (int i = 1; i <= p.h(); ++i) {
    const double bound =
        -mu - (p.r_of(i) - p.k_of(i)) * p.cone.d / 2.0 - 1.0;
    if (!(t.t[static_cast<std::size_t>(i) - 1] > bound)) {
      throw std::domain_error(
          "mc_risk: exponent for block " + std::to_string(i) +
          " must exceed " + std::to_string(bound) + " for a proper posterior");
    }
  }

  std::vector<double> scores(static_cast<std::size_t>(cfg.n_outer));
  detail::run_indexed_chunks(
      cfg.n_outer, threads, [&](std::int64_t lo, std::int64_t hi) {
        for (std::int64_t idx = lo; idx < hi; ++idx) {
          RngStream stream(cfg.seed, static_cast<std::uint64_t>(idx));
          const ConeElement<Scalar> x =
              sample_wishart(p.cone, mu, xi, stream);
          double inner = 0.0;
          for (std::int64_t j = 0; j < cfg.n_inner; ++j) {
            const ConeElement<Scalar> y =
                sample_wishart(p.cone, nu, xi, stream);
            inner += log_wishart_density(p.cone, nu, xi, y) -
                     log_predictive_density(p, s, t, mu, nu, x, y);
          }
          scores[static_cast<std::size_t>(idx)] =
              inner / static_cast<double>(cfg.n_inner);
        }
      });

  detail::CompensatedSum total;
  for (double score : scores) total.add(score);
  const double mean = total.value() / static_cast<double>(cfg.n_outer);

  McEstimate estimate;
  estimate.mean = mean;
  estimate.n_total = cfg.n_outer * cfg.n_inner;
  if (cfg.n_outer > 1) {
    detail::CompensatedSum squares;
    for (double score : scores) squares.add((score - mean) * (score - mean));
    const double variance =
        squares.value() / static_cast<double>(cfg.n_outer - 1);
    estimate.std_error =
        std::sqrt(variance / static_cast<double>(cfg.n_outer));
  }
  return estimate;
}

}  // namespace wishrisk
