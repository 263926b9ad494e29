// Dominance regions for two-block partitions: normalized-risk-difference
// grids over the exponent plane, the limiting oval that the regions shrink
// to as the observation shape grows, the small-shape rectangle, and a
// finite-intersection estimate of the set of exponents that dominate the
// flat choice uniformly over the observation shape.
#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "wishrisk/cone.hpp"
#include "wishrisk/types.hpp"

namespace wishrisk {

/// Rectangular evaluation window in the (t^(1), t^(2)) plane with the same
/// number of points per axis.  Both axes must be nondegenerate (max > min)
/// and the resolution must be at least 2.
struct GridSpec {
  double t1_min = 0.0;
  double t1_max = 0.0;
  double t2_min = 0.0;
  double t2_max = 0.0;
  int resolution = 0;

  /// Axis value at index i (0-based); the endpoints are hit exactly.
  double t1_value(int i) const {
    const double frac = static_cast<double>(i) / (resolution - 1);
    return t1_min * (1.0 - frac) + t1_max * frac;
  }
  double t2_value(int i) const {
    const double frac = static_cast<double>(i) / (resolution - 1);
    return t2_min * (1.0 - frac) + t2_max * frac;
  }
};

/// Throws std::invalid_argument unless both axes are nondegenerate and the
/// resolution is at least 2.
void validate_grid_spec(const GridSpec& grid);

using BoolGrid = Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic>;

/// Scan result: nrd_values(i, j) is the normalized risk difference at
/// (t1_value(i), t2_value(j)), NaN at points where the posterior is not
/// proper (outside the valid exponent window for the scan's observation
/// shape, boundary excluded); membership(i, j) is true exactly when the
/// value is finite and negative.
struct RegionGrid {
  GridSpec grid;
  RealMatrix nrd_values;
  BoolGrid membership;
};

/// Evaluates the normalized risk difference against the flat exponent
/// vector on the grid, for the two-block partition (k, r - k) of the given
/// cone.  Requires r >= 2, 0 < k < r, and both shapes above the existence
/// threshold.  threads <= 0 picks the environment or hardware default.
RegionGrid scan_nrd(const ConeSpec& cone, int k, double mu, double nu,
                    const GridSpec& grid, int threads = 0);

/// Signed quadratic form whose zero level set is the limiting boundary of
/// the dominance regions as the observation shape grows:
///   (k/2)(t^(1) - t_R^(1))^2 + ((r-k)/2)(t^(2) - t_R^(2))^2
///     - (d^2/8) r k (r - k),
/// negative exactly inside the limit oval.  Equals twice the quadratic
/// eigenvalue lower bound of the two-block partition.
double oval_signed(const ConeSpec& cone, int k, const HyperT& t);

/// Open rectangle that the dominance regions approach at the small-shape
/// end of the domain: t^(1) > t_J^(1) and t_R^(2) < t^(2) < t_J^(2), all
/// inequalities strict.
bool rect_membership(const ConeSpec& cone, int k, const HyperT& t);

/// Finite-sample estimate of the region dominating the flat exponent
/// vector for every observation shape: the pointwise conjunction of
/// scan_nrd membership over mu_list.  A point outside the valid exponent
/// window of any listed shape gets NaN and is never a member; elsewhere
/// nrd_values holds the pointwise maximum over the list (the binding
/// constraint), whose negativity is exactly the conjunction.
RegionGrid v_estimate(const ConeSpec& cone, int k, double nu,
                      const std::vector<double>& mu_list,
                      const GridSpec& grid, int threads = 0);

/// Writes the grid as CSV with header t1,t2,nrd,member, one row per grid
/// point, t1 as the outer loop; NaN renders as "nan" and membership as
/// 0/1.  Each entry of comments is prepended as a "# ..." metadata line.
void write_region_csv(std::ostream& out, const RegionGrid& region,
                      const std::vector<std::string>& comments = {});

}  // namespace wishrisk
