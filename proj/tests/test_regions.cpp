#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>
#include <vector>

#include "wishrisk/priors.hpp"
#include "wishrisk/regions.hpp"
#include "wishrisk/risk.hpp"
#include "wishrisk/types.hpp"

using namespace wishrisk;

namespace {

// True when every row (and every column) of the membership grid is a
// contiguous run of true values, the grid shadow of convexity.
bool memberships_are_intervals(const BoolGrid& m) {
  const auto line_ok = [](auto&& at, int len) {
    int first = -1;
    int last = -1;
    for (int j = 0; j < len; ++j) {
      if (at(j)) {
        if (first < 0) first = j;
        last = j;
      }
    }
    for (int j = first; first >= 0 && j <= last; ++j) {
      if (!at(j)) return false;
    }
    return true;
  };
  for (int i = 0; i < m.rows(); ++i) {
    if (!line_ok([&](int j) { return m(i, j); },
                 static_cast<int>(m.cols()))) {
      return false;
    }
  }
  for (int j = 0; j < m.cols(); ++j) {
    if (!line_ok([&](int i) { return m(i, j); },
                 static_cast<int>(m.rows()))) {
      return false;
    }
  }
  return true;
}

}  // namespace

TEST_CASE("the flat exponent vector sits exactly on the oval boundary") {
  for (int d : {1, 2}) {
    for (int r = 2; r <= 5; ++r) {
      for (int k = 1; k < r; ++k) {
        CAPTURE(d);
        CAPTURE(r);
        CAPTURE(k);
        const ConeSpec cone = make_cone_spec(d, r);
        const Partition p = make_partition(cone, {k, r - k});
        const HyperT tj = canonical_hyperparams(p, PriorKind::kJeffreys);
        CHECK(oval_signed(cone, k, tj) == 0.0);
      }
    }
  }
}

TEST_CASE("oval values at the canonical exponent vectors") {
  const ConeSpec cone = make_cone_spec(1, 2);
  const Partition p = make_partition(cone, {1, 1});
  const HyperT tc = canonical_hyperparams(p, PriorKind::kReference);
  CHECK(oval_signed(cone, 1, tc) == -0.125);
  const HyperT tr = canonical_hyperparams(p, PriorKind::kRightInvariant);
  CHECK(oval_signed(cone, 1, tr) == -0.25);
}

TEST_CASE("the oval form is minimized at the right-invariant vector and "
          "equals twice the eigenvalue bound") {
  std::mt19937_64 rng(811);
  std::uniform_real_distribution<double> wiggle(-2.0, 2.0);
  for (int d : {1, 2}) {
    for (int r : {2, 3, 4}) {
      for (int k = 1; k < r; ++k) {
        CAPTURE(d);
        CAPTURE(r);
        CAPTURE(k);
        const ConeSpec cone = make_cone_spec(d, r);
        const Partition p = make_partition(cone, {k, r - k});
        const HyperT tr =
            canonical_hyperparams(p, PriorKind::kRightInvariant);
        const double at_min = oval_signed(cone, 1 * k, tr);
        CHECK(at_min == -d * d / 8.0 * r * k * (r - k));
        for (int rep = 0; rep < 10; ++rep) {
          HyperT t = tr;
          t.t[0] += wiggle(rng);
          t.t[1] += wiggle(rng);
          const double away = oval_signed(cone, k, t);
          CHECK(away >= at_min);
          const double twice_lb = 2.0 * lb_eigenvalue(p, t);
          CHECK(away ==
                doctest::Approx(twice_lb).epsilon(1e-13).scale(1.0));
        }
      }
    }
  }
}

TEST_CASE("rectangle membership uses strict bounds on both axes") {
  const ConeSpec cone = make_cone_spec(1, 2);
  CHECK(rect_membership(cone, 1, HyperT{{-1.2, -1.8}}));
  // The reference vector touches the upper boundary of the second axis.
  CHECK_FALSE(rect_membership(cone, 1, HyperT{{-1.0, -1.5}}));
  CHECK_FALSE(rect_membership(cone, 1, HyperT{{-2.0, -1.8}}));
  // Lower boundary of the second axis is the right-invariant value.
  CHECK_FALSE(rect_membership(cone, 1, HyperT{{-1.2, -2.0}}));
  CHECK(rect_membership(cone, 1, HyperT{{-1.2, -1.99}}));
}

TEST_CASE("large-shape scan marks the whole open box between the "
          "canonical vectors as dominating") {
  const ConeSpec cone = make_cone_spec(1, 2);
  const GridSpec grid{-1.49, -1.01, -1.99, -1.51, 9};
  const RegionGrid scan = scan_nrd(cone, 1, 100.0, 1.0, grid);
  for (int i = 0; i < grid.resolution; ++i) {
    for (int j = 0; j < grid.resolution; ++j) {
      CAPTURE(i);
      CAPTURE(j);
      CHECK(scan.membership(i, j));
      CHECK(scan.nrd_values(i, j) < 0.0);
    }
  }
}

TEST_CASE("small-shape scan flips sign across the flat second exponent") {
  const ConeSpec cone = make_cone_spec(1, 2);
  // The t2 axis straddles the flat value -1.5 without sampling it: on the
  // boundary line itself the second block contributes nothing and the sign
  // is the first block's, which is not what this claim is about.
  const GridSpec grid{-1.4, -1.0, -1.63, -1.39, 5};
  const RegionGrid scan = scan_nrd(cone, 1, 0.501, 1.0, grid);
  for (int i = 0; i < grid.resolution; ++i) {
    for (int j = 0; j < grid.resolution; ++j) {
      CAPTURE(i);
      CAPTURE(j);
      const double t2 = grid.t2_value(j);
      REQUIRE_FALSE(std::isnan(scan.nrd_values(i, j)));
      if (t2 > -1.5) {
        CHECK_FALSE(scan.membership(i, j));
      } else {
        CHECK(scan.membership(i, j));
      }
    }
  }
}

TEST_CASE("scan reports zero at the flat vector and excludes the window "
          "boundary") {
  const ConeSpec cone = make_cone_spec(1, 2);
  // t1 values {-1.5, -1, -0.5}; t2 values {-2.5, -2, -1.5}.  With mu = 1
  // the second-axis window opens at -2.5, so that column is invalid even
  // though -2.5 is the nominal edge; the flat vector (-1.5, -1.5) lands on
  // a valid grid point.
  const GridSpec grid{-1.5, -0.5, -2.5, -1.5, 3};
  const RegionGrid scan = scan_nrd(cone, 1, 1.0, 1.0, grid);
  CHECK(scan.nrd_values(0, 2) == 0.0);
  CHECK_FALSE(scan.membership(0, 2));
  for (int i = 0; i < 3; ++i) {
    CAPTURE(i);
    CHECK(std::isnan(scan.nrd_values(i, 0)));
    CHECK_FALSE(scan.membership(i, 0));
  }
  // Membership always certifies a strictly negative finite value.
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      if (scan.membership(i, j)) {
        CHECK(scan.nrd_values(i, j) < 0.0);
      }
    }
  }
}

TEST_CASE("membership sets are row and column intervals") {
  {
    const ConeSpec cone = make_cone_spec(1, 2);
    const GridSpec grid{-3.0, 0.0, -3.5, -0.2, 41};
    const RegionGrid scan = scan_nrd(cone, 1, 2.0, 1.0, grid);
    CHECK(memberships_are_intervals(scan.membership));
  }
  {
    const ConeSpec cone = make_cone_spec(2, 2);
    const GridSpec grid{-3.8, 0.0, -4.8, -0.5, 31};
    const RegionGrid scan = scan_nrd(cone, 1, 3.0, 1.5, grid);
    CHECK(memberships_are_intervals(scan.membership));
  }
}

TEST_CASE("scan values approach twice the eigenvalue bound as the "
          "observation shape grows") {
  const ConeSpec cone = make_cone_spec(1, 2);
  const GridSpec grid{-1.7, -0.3, -2.7, -1.3, 9};
  double prev_sup = std::numeric_limits<double>::infinity();
  for (double mu : {10.0, 100.0, 1000.0, 10000.0}) {
    CAPTURE(mu);
    const RegionGrid scan = scan_nrd(cone, 1, mu, 1.0, grid);
    double sup = 0.0;
    for (int i = 0; i < grid.resolution; ++i) {
      for (int j = 0; j < grid.resolution; ++j) {
        REQUIRE_FALSE(std::isnan(scan.nrd_values(i, j)));
        const HyperT t{{grid.t1_value(i), grid.t2_value(j)}};
        const double gap =
            std::abs(scan.nrd_values(i, j) - oval_signed(cone, 1, t));
        sup = std::max(sup, gap);
      }
    }
    CHECK(sup < prev_sup);
    prev_sup = sup;
  }
  CHECK(prev_sup < 5e-2);
}

TEST_CASE("a singleton shape list reproduces the plain scan") {
  const ConeSpec cone = make_cone_spec(1, 2);
  const GridSpec grid{-2.2, -0.4, -2.9, -0.9, 11};
  const RegionGrid scan = scan_nrd(cone, 1, 1.3, 1.0, grid);
  const RegionGrid vee = v_estimate(cone, 1, 1.0, {1.3}, grid);
  for (int i = 0; i < grid.resolution; ++i) {
    for (int j = 0; j < grid.resolution; ++j) {
      CAPTURE(i);
      CAPTURE(j);
      CHECK(vee.membership(i, j) == scan.membership(i, j));
      if (std::isnan(scan.nrd_values(i, j))) {
        CHECK(std::isnan(vee.nrd_values(i, j)));
      } else {
        CHECK(vee.nrd_values(i, j) == scan.nrd_values(i, j));
      }
    }
  }
}

TEST_CASE("the uniform-dominance estimate stays inside both limit shapes") {
  const ConeSpec cone = make_cone_spec(1, 2);
  // Axis values avoid the limit-shape boundaries exactly: t1 skips -1.5
  // and t2 skips both -1.5 and -2, so no grid point sits on a measure-zero
  // boundary where a finite shape list cannot decide membership.
  const GridSpec grid{-2.37, -0.64, -2.61, -0.57, 13};
  const std::vector<double> mu_list{0.501, 0.75, 1.0, 10.0, 100.0};
  const RegionGrid vee = v_estimate(cone, 1, 1.0, mu_list, grid);
  int members = 0;
  for (int i = 0; i < grid.resolution; ++i) {
    for (int j = 0; j < grid.resolution; ++j) {
      if (!vee.membership(i, j)) continue;
      ++members;
      const HyperT t{{grid.t1_value(i), grid.t2_value(j)}};
      CAPTURE(t.t[0]);
      CAPTURE(t.t[1]);
      CHECK(rect_membership(cone, 1, t));
      CHECK(oval_signed(cone, 1, t) < 0.0);
    }
  }
  // The estimate is a real region, not the empty set.
  CHECK(members > 0);
}

TEST_CASE("adding a large shape to the list excludes points outside the "
          "oval") {
  const ConeSpec cone = make_cone_spec(1, 2);
  // One-point probe at (0, -1.7): inside the small-shape strip (which is
  // unbounded in t1) but well outside the oval (signed value 0.295).
  const GridSpec grid{0.0, 0.1, -1.7, -1.6, 2};
  const HyperT probe{{0.0, -1.7}};
  CHECK(rect_membership(cone, 1, probe));
  CHECK(oval_signed(cone, 1, probe) == doctest::Approx(0.295));

  const RegionGrid small = v_estimate(cone, 1, 1.0, {0.501}, grid);
  CHECK(small.membership(0, 0));
  const RegionGrid both = v_estimate(cone, 1, 1.0, {0.501, 100.0}, grid);
  CHECK_FALSE(both.membership(0, 0));
}

TEST_CASE("scans are identical across worker counts") {
  const ConeSpec cone = make_cone_spec(1, 2);
  const GridSpec grid{-2.0, -0.5, -2.5, -1.0, 7};
  const RegionGrid one = scan_nrd(cone, 1, 1.7, 1.0, grid, 1);
  const RegionGrid three = scan_nrd(cone, 1, 1.7, 1.0, grid, 3);
  for (int i = 0; i < grid.resolution; ++i) {
    for (int j = 0; j < grid.resolution; ++j) {
      if (std::isnan(one.nrd_values(i, j))) {
        CHECK(std::isnan(three.nrd_values(i, j)));
      } else {
        CHECK(one.nrd_values(i, j) == three.nrd_values(i, j));
      }
      CHECK(one.membership(i, j) == three.membership(i, j));
    }
  }
}

TEST_CASE("CSV output follows the schema and is byte-stable") {
  const ConeSpec cone = make_cone_spec(1, 2);
  // mu = 1 makes the t2 = -2.5 column invalid, exercising nan rendering.
  const GridSpec grid{-1.5, -0.5, -2.5, -1.5, 2};
  const RegionGrid scan = scan_nrd(cone, 1, 1.0, 1.0, grid);

  std::ostringstream first;
  write_region_csv(first, scan, {"mu_list=1"});
  std::ostringstream second;
  write_region_csv(second, scan, {"mu_list=1"});
  CHECK(first.str() == second.str());

  std::istringstream lines(first.str());
  std::string line;
  REQUIRE(std::getline(lines, line));
  CHECK(line == "# mu_list=1");
  REQUIRE(std::getline(lines, line));
  CHECK(line == "t1,t2,nrd,member");
  std::vector<std::string> rows;
  while (std::getline(lines, line)) rows.push_back(line);
  REQUIRE(rows.size() == 4);
  // Outer loop over t1: the first two rows share the first coordinate.
  CHECK(rows[0].substr(0, rows[0].find(',')) ==
        rows[1].substr(0, rows[1].find(',')));
  CHECK(rows[0] == "-1.5,-2.5,nan,0");
  // The flat vector row carries an exact zero and no membership.
  CHECK(rows[1] == "-1.5,-1.5,0,0");
  for (const std::string& row : rows) {
    CHECK(row.find_first_of(',') != std::string::npos);
    const char last = row.back();
    CHECK((last == '0' || last == '1'));
  }
}

TEST_CASE("region inputs are validated") {
  const ConeSpec cone = make_cone_spec(1, 2);
  const GridSpec good{-2.0, -1.0, -2.0, -1.0, 3};
  CHECK_THROWS_AS(validate_grid_spec(GridSpec{-1.0, -1.0, -2.0, -1.0, 3}),
                  std::invalid_argument);
  CHECK_THROWS_AS(validate_grid_spec(GridSpec{-2.0, -1.0, -2.0, -1.0, 1}),
                  std::invalid_argument);
  CHECK_THROWS_AS(scan_nrd(cone, 0, 1.0, 1.0, good), std::invalid_argument);
  CHECK_THROWS_AS(scan_nrd(cone, 2, 1.0, 1.0, good), std::invalid_argument);
  CHECK_THROWS_AS(scan_nrd(make_cone_spec(1, 1), 1, 1.0, 1.0, good),
                  std::invalid_argument);
  CHECK_THROWS_AS(scan_nrd(cone, 1, 0.5, 1.0, good), std::domain_error);
  CHECK_THROWS_AS(scan_nrd(cone, 1, 1.0, 0.5, good), std::domain_error);
  CHECK_THROWS_AS(v_estimate(cone, 1, 1.0, {}, good), std::invalid_argument);
  CHECK_THROWS_AS(v_estimate(cone, 1, 1.0, {1.0, 0.5}, good),
                  std::domain_error);
  CHECK_THROWS_AS(oval_signed(cone, 1, HyperT{{-1.0}}),
                  std::invalid_argument);
  CHECK_THROWS_AS(rect_membership(cone, 1, HyperT{{-1.0, -2.0, -3.0}}),
                  std::invalid_argument);
}
