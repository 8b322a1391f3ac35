#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "bilicover/cover.hpp"
#include "bilicover/rng.hpp"
#include "support/row_sampling.hpp"

using namespace bilicover;
using bilicover::testsupport::sample_row_feasible;

namespace {
BilinearRow make_row(std::vector<double> coeffs, double rhs, int index = 0) {
  BilinearRow row;
  row.row_index = index;
  row.rhs = rhs;
  for (std::size_t k = 0; k < coeffs.size(); ++k) {
    row.var_index.push_back(static_cast<int>(k));
    row.coeff.push_back(coeffs[k]);
  }
  return row;
}

std::vector<PartitionLabel> all_I(int k) {
  return std::vector<PartitionLabel>(k, PartitionLabel::I);
}
}  // namespace

TEST_CASE("uniform cover of (1,1,1) against d=2") {
  auto v = validate_partition(make_row({1, 1, 1}, 2.0), all_I(3));
  REQUIRE(v.valid);
  CHECK(v.partition.delta == doctest::Approx(1.0));
  CHECK(v.partition.d_lambda == doctest::Approx(2.0));
  for (int p = 0; p < 3; ++p) CHECK(v.partition.residual[p] == doctest::Approx(0.0));
  CHECK(v.partition.i0_pos == -1);  // I^> empty
  CHECK(v.partition.l_plus == doctest::Approx(1.0));
  CHECK(v.partition.l_minus == doctest::Approx(1.0));
}

TEST_CASE("cover of (2,2) against d=3 has an i0") {
  auto v = validate_partition(make_row({2, 2}, 3.0), all_I(2));
  REQUIRE(v.valid);
  CHECK(v.partition.delta == doctest::Approx(1.0));
  CHECK(v.partition.residual[0] == doctest::Approx(1.0));
  CHECK(v.partition.residual[1] == doctest::Approx(1.0));
  CHECK(v.partition.i0_pos == 0);  // smallest index among the minimizers
  CHECK(v.partition.l_plus == doctest::Approx(std::sqrt(2.0) + 1.0));
  CHECK(v.partition.l_minus == doctest::Approx(1.0));
}

TEST_CASE("invalid labelings report the repair branch") {
  // sum(a) = 2 < 2.5: not a cover
  auto v1 = validate_partition(make_row({1, 1}, 2.5), all_I(2));
  CHECK_FALSE(v1.valid);
  CHECK(v1.reason == InvalidReason::NotACover);

  // subset {3} already covers 2: not minimal
  auto v2 = validate_partition(make_row({3, 1}, 2.0), all_I(2));
  CHECK_FALSE(v2.valid);
  CHECK(v2.reason == InvalidReason::NotMinimal);

  // all J1 labels push d_lambda negative
  auto v3 = validate_partition(make_row({1, 1}, 1.5),
                               {PartitionLabel::J1, PartitionLabel::J1});
  CHECK_FALSE(v3.valid);
  CHECK(v3.reason == InvalidReason::RhsNotPositive);

  // all J0 on a nonnegative row with d > 0 is a failed cover
  auto v4 = validate_partition(make_row({1, 1}, 1.0),
                               {PartitionLabel::J0, PartitionLabel::J0});
  CHECK_FALSE(v4.valid);
  CHECK(v4.reason == InvalidReason::NotACover);

  // hand labeling with a negative coefficient inside I
  auto v5 = validate_partition(make_row({-1, 2}, 0.5),
                               {PartitionLabel::I, PartitionLabel::I});
  CHECK_FALSE(v5.valid);
  CHECK(v5.reason == InvalidReason::NonPositiveCoeffInI);

  CHECK_THROWS_AS(validate_partition(make_row({1, 1}, 1.0), all_I(3)),
                  std::invalid_argument);
}

TEST_CASE("seed coefficients match the closed forms") {
  // d_i = 0 gives exactly 1
  auto flat = validate_partition(make_row({1, 1, 1}, 2.0), all_I(3));
  REQUIRE(flat.valid);
  CHECK(seed_coefficient(flat.partition, 0) == doctest::Approx(1.0));

  // one row with residuals 3 and 1: coefficients 2/(2-sqrt(3)), sqrt(2)/(sqrt(2)-1)
  auto v = validate_partition(make_row({4, 2}, 5.0), all_I(2));
  REQUIRE(v.valid);
  CHECK(v.partition.delta == doctest::Approx(1.0));
  CHECK(seed_coefficient(v.partition, 0) == doctest::Approx(2.0 / (2.0 - std::sqrt(3.0))));
  CHECK(seed_coefficient(v.partition, 0) == doctest::Approx(7.46410161514));
  CHECK(seed_coefficient(v.partition, 1) == doctest::Approx(2.0 + std::sqrt(2.0)));
  CHECK(seed_coefficient(v.partition, 1) == doctest::Approx(3.41421356237));
}

TEST_CASE("seed inequality evaluation on the (2,2) cover") {
  auto v = validate_partition(make_row({2, 2}, 3.0), all_I(2));
  REQUIRE(v.valid);
  PointXY ones{{1, 1}, {1, 1}};
  CHECK(eval_seed_lhs(v.partition, ones) == doctest::Approx(0.0));

  double b = std::sqrt(0.75);  // x_i y_i = 0.75 sits on the row boundary
  PointXY boundary{{b, b}, {b, b}};
  double expected = 2.0 * (2.0 + std::sqrt(2.0)) * (std::sqrt(0.75) - 1.0);
  CHECK(eval_seed_lhs(v.partition, boundary) == doctest::Approx(expected));
  CHECK(eval_seed_lhs(v.partition, boundary) > -1.0);  // satisfied

  PointXY zero{{0, 0}, {0, 0}};
  CHECK(eval_seed_lhs(v.partition, zero) ==
        doctest::Approx(-2.0 * (2.0 + std::sqrt(2.0))));
  CHECK(eval_seed_lhs(v.partition, zero) < -1.0);  // infeasible point, violated
}

TEST_CASE("mt cut worked examples and error paths") {
  PointXY ones1{{1}, {1}};
  CHECK(mt_cut_lhs(make_row({1}, 1.0), ones1) == doctest::Approx(0.0));

  PointXY corner{{1, 0}, {1, 0}};
  CHECK(mt_cut_lhs(make_row({4, 1}, 4.0), corner) == doctest::Approx(0.0));

  PointXY half{{0.5, 0.5}, {0.5, 0.5}};
  CHECK(mt_cut_lhs(make_row({1, 1}, 2.0), half) ==
        doctest::Approx(1.0 - std::sqrt(2.0)));
  CHECK(mt_cut_lhs(make_row({1, 1}, 2.0), half) < 0.0);  // infeasible point

  CHECK_THROWS_AS(mt_cut_lhs(make_row({1, -1}, 0.5), half), std::domain_error);
  CHECK_THROWS_AS(mt_cut_lhs(make_row({1, 1}, -0.5), half), std::invalid_argument);
}

TEST_CASE("derived quantities of random valid partitions") {
  Rng rng(404);
  for (int trial = 0; trial < 200; ++trial) {
    int k = 2 + static_cast<int>(rng.uniform_index(4));
    std::vector<double> a(k);
    double sum = 0, amin = 1e30;
    for (double& v : a) {
      v = rng.uniform(0.3, 1.5);
      sum += v;
      amin = std::min(amin, v);
    }
    double d = sum - rng.uniform(0.05, 0.95) * amin;  // minimal by construction
    auto v = validate_partition(make_row(a, d), all_I(k));
    REQUIRE(v.valid);
    CHECK(v.partition.delta > 0.0);
    CHECK(v.partition.d_lambda > 0.0);
    bool any_above = false;
    for (int p = 0; p < k; ++p) {
      CHECK(v.partition.residual[p] >= 0.0);
      CHECK(v.partition.residual[p] < a[p]);
      if (a[p] > v.partition.delta + 1e-12) any_above = true;
    }
    CHECK((v.partition.i0_pos >= 0) == any_above);
    CHECK(v.partition.l_plus >= v.partition.l_minus);
    CHECK(v.partition.l_minus > 0.0);
  }
}

TEST_CASE("row scaling preserves validity and the seed inequality") {
  Rng rng(405);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> a = {rng.uniform(0.5, 2), rng.uniform(0.5, 2),
                             rng.uniform(0.5, 2)};
    double amin = std::min({a[0], a[1], a[2]});
    double d = a[0] + a[1] + a[2] - rng.uniform(0.1, 0.9) * amin;
    double t = rng.uniform(0.1, 9.0);
    std::vector<double> scaled = {t * a[0], t * a[1], t * a[2]};

    auto v = validate_partition(make_row(a, d), all_I(3));
    auto vs = validate_partition(make_row(scaled, t * d), all_I(3));
    REQUIRE(v.valid);
    REQUIRE(vs.valid);

    PointXY pt{{rng.uniform01(), rng.uniform01(), rng.uniform01()},
               {rng.uniform01(), rng.uniform01(), rng.uniform01()}};
    CHECK(eval_seed_lhs(v.partition, pt) ==
          doctest::Approx(eval_seed_lhs(vs.partition, pt)).epsilon(1e-9));
  }
}

TEST_CASE("seed inequality is valid on sampled cover-row points") {
  Rng rng(406);
  for (int rows = 0; rows < 10; ++rows) {
    int k = 2 + static_cast<int>(rng.uniform_index(3));
    std::vector<double> a(k);
    double sum = 0, amin = 1e30;
    for (double& v : a) {
      v = rng.uniform(0.4, 1.4);
      sum += v;
      amin = std::min(amin, v);
    }
    double d = sum - rng.uniform(0.1, 0.9) * amin;
    BilinearRow row = make_row(a, d);
    auto v = validate_partition(row, all_I(k));
    REQUIRE(v.valid);

    auto pts = sample_row_feasible(row, k, 1000, rng);
    REQUIRE(pts.size() >= 100);
    for (const PointXY& pt : pts)
      CHECK(eval_seed_lhs(v.partition, pt) >= -1.0 - 1e-9);
  }
}

TEST_CASE("mt cut is valid on sampled feasible points of nonnegative rows") {
  Rng rng(407);
  for (int rows = 0; rows < 10; ++rows) {
    int k = 1 + static_cast<int>(rng.uniform_index(4));
    std::vector<double> a(k);
    double sum = 0;
    for (double& v : a) {
      v = rng.uniform(0.2, 1.2);
      sum += v;
    }
    double d = rng.uniform(0.05, 0.95) * sum;
    BilinearRow row = make_row(a, d);
    auto pts = sample_row_feasible(row, k, 1000, rng);
    REQUIRE(pts.size() >= 50);
    for (const PointXY& pt : pts) CHECK(mt_cut_lhs(row, pt) >= -1e-9);
  }
}

TEST_CASE("partition hashes separate rows and labelings") {
  std::vector<PartitionLabel> l1 = {PartitionLabel::I, PartitionLabel::J0};
  std::vector<PartitionLabel> l2 = {PartitionLabel::I, PartitionLabel::J1};
  CHECK(partition_hash(0, l1) == partition_hash(0, l1));
  CHECK(partition_hash(0, l1) != partition_hash(0, l2));
  CHECK(partition_hash(0, l1) != partition_hash(1, l1));
}
