// Dominance-region scans over the exponent plane of a two-block partition.
// Grid evaluation is data-parallel over rows of the grid; every worker
// writes disjoint rows, so the output is deterministic regardless of the
// worker count.

#include "wishrisk/regions.hpp"

#include <charconv>
#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>

#include "wishrisk/montecarlo.hpp"
#include "wishrisk/priors.hpp"
#include "wishrisk/risk.hpp"
#include "wishrisk/specfun.hpp"

namespace wishrisk {

namespace {

void check_split(const ConeSpec& cone, int k, const char* op) {
  validate_cone_spec(cone);
  if (cone.r < 2) {
    throw std::invalid_argument(std::string(op) +
                                ": rank must be at least 2 to split");
  }
  if (k <= 0 || k >= cone.r) {
    throw std::invalid_argument(std::string(op) + ": split " +
                                std::to_string(k) +
                                " must lie strictly between 0 and " +
                                std::to_string(cone.r));
  }
}

Partition two_block(const ConeSpec& cone, int k) {
  return make_partition(cone, {k, cone.r - k});
}

void check_two_exponents(const HyperT& t, const char* op) {
  if (t.t.size() != 2) {
    throw std::invalid_argument(std::string(op) +
                                ": expected 2 exponents, got " +
                                std::to_string(t.t.size()));
  }
}

// Properness boundary of block i, written exactly as the risk-domain check
// so that a point accepted here is accepted there.
double exponent_bound(const Partition& p, int i, double mu) {
  return -mu - (p.r_of(i) - p.k_of(i)) * p.cone.d / 2.0 - 1.0;
}

// Formats a coordinate or value for the CSV schema: "nan" outside the
// valid window, otherwise the shortest decimal that round-trips.
std::string csv_number(double v) {
  if (std::isnan(v)) return "nan";
  char buf[40];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

}  // namespace

void validate_grid_spec(const GridSpec& grid) {
  if (!(grid.t1_max > grid.t1_min) || !(grid.t2_max > grid.t2_min)) {
    throw std::invalid_argument(
        "validate_grid_spec: axis maxima must exceed the minima");
  }
  if (grid.resolution < 2) {
    throw std::invalid_argument(
        "validate_grid_spec: resolution must be at least 2, got " +
        std::to_string(grid.resolution));
  }
}

RegionGrid scan_nrd(const ConeSpec& cone, int k, double mu, double nu,
                    const GridSpec& grid, int threads) {
  check_split(cone, k, "scan_nrd");
  validate_grid_spec(grid);
  check_mu_domain(cone, mu, "scan_nrd (observation shape)");
  check_mu_domain(cone, nu, "scan_nrd (prediction shape)");

  const Partition p = two_block(cone, k);
  const double bound1 = exponent_bound(p, 1, mu);
  const double bound2 = exponent_bound(p, 2, mu);
  const int res = grid.resolution;
  const double nan = std::numeric_limits<double>::quiet_NaN();

  RegionGrid out;
  out.grid = grid;
  out.nrd_values = RealMatrix::Constant(res, res, nan);
  out.membership = BoolGrid::Constant(res, res, false);

  detail::run_indexed_chunks(res, threads, [&](std::int64_t lo,
                                               std::int64_t hi) {
    for (std::int64_t i = lo; i < hi; ++i) {
      const double t1 = grid.t1_value(static_cast<int>(i));
      if (!(t1 > bound1)) continue;
      for (int j = 0; j < res; ++j) {
        const double t2 = grid.t2_value(j);
        if (!(t2 > bound2)) continue;
        const HyperT t{{t1, t2}};
        const double nrd = exact_risk(p, t, mu, nu).nrd;
        out.nrd_values(i, j) = nrd;
        out.membership(i, j) = nrd < 0.0;
      }
    }
  });
  return out;
}

double oval_signed(const ConeSpec& cone, int k, const HyperT& t) {
  check_split(cone, k, "oval_signed");
  check_two_exponents(t, "oval_signed");
  const Partition p = two_block(cone, k);
  const HyperT tr = canonical_hyperparams(p, PriorKind::kRightInvariant);
  const double d1 = t.t[0] - tr.t[0];
  const double d2 = t.t[1] - tr.t[1];
  const int d = cone.d;
  const int r = cone.r;
  return 0.5 * k * d1 * d1 + 0.5 * (r - k) * d2 * d2 -
         d * d / 8.0 * r * k * (r - k);
}

bool rect_membership(const ConeSpec& cone, int k, const HyperT& t) {
  check_split(cone, k, "rect_membership");
  check_two_exponents(t, "rect_membership");
  const Partition p = two_block(cone, k);
  const HyperT tj = canonical_hyperparams(p, PriorKind::kJeffreys);
  const HyperT tr = canonical_hyperparams(p, PriorKind::kRightInvariant);
  return t.t[0] > tj.t[0] && t.t[1] > tr.t[1] && t.t[1] < tj.t[1];
}

RegionGrid v_estimate(const ConeSpec& cone, int k, double nu,
                      const std::vector<double>& mu_list,
                      const GridSpec& grid, int threads) {
  check_split(cone, k, "v_estimate");
  validate_grid_spec(grid);
  if (mu_list.empty()) {
    throw std::invalid_argument(
        "v_estimate: the observation-shape list must be non-empty");
  }
  for (double mu : mu_list) {
    check_mu_domain(cone, mu, "v_estimate (observation shape)");
  }
  check_mu_domain(cone, nu, "v_estimate (prediction shape)");

  const int res = grid.resolution;
  const double nan = std::numeric_limits<double>::quiet_NaN();
  RegionGrid out;
  out.grid = grid;
  out.nrd_values = RealMatrix::Constant(res, res, nan);
  out.membership = BoolGrid::Constant(res, res, false);

  bool first = true;
  for (double mu : mu_list) {
    const RegionGrid scan = scan_nrd(cone, k, mu, nu, grid, threads);
    for (int i = 0; i < res; ++i) {
      for (int j = 0; j < res; ++j) {
        const double v = scan.nrd_values(i, j);
        if (first) {
          out.nrd_values(i, j) = v;
        } else if (std::isnan(v) || std::isnan(out.nrd_values(i, j))) {
          out.nrd_values(i, j) = nan;
        } else if (v > out.nrd_values(i, j)) {
          out.nrd_values(i, j) = v;
        }
      }
    }
    first = false;
  }
  for (int i = 0; i < res; ++i) {
    for (int j = 0; j < res; ++j) {
      const double v = out.nrd_values(i, j);
      out.membership(i, j) = !std::isnan(v) && v < 0.0;
    }
  }
  return out;
}

void write_region_csv(std::ostream& out, const RegionGrid& region,
                      const std::vector<std::string>& comments) {
  for (const std::string& line : comments) {
    out << "# " << line << "\n";
  }
  out << "t1,t2,nrd,member\n";
  const int res = region.grid.resolution;
  for (int i = 0; i < res; ++i) {
    const std::string t1 = csv_number(region.grid.t1_value(i));
    for (int j = 0; j < res; ++j) {
      out << t1 << ',' << csv_number(region.grid.t2_value(j)) << ','
          << csv_number(region.nrd_values(i, j)) << ','
          << (region.membership(i, j) ? '1' : '0') << '\n';
    }
  }
}

}  // namespace wishrisk
