#include <gtest/gtest.h>

#include "benchmarks.hpp"
#include "msdelay/stability.hpp"

using namespace msdelay;

namespace {

DelayRange range_with_max(std::optional<int> tau) {
  DelayRange r;
  r.tau_max_feasible = tau;
  r.tau_min_feasible = tau;
  return r;
}

}  // namespace

TEST(MaxDelay, Example1NearBoundary) {
  const DelayRange r = max_delay(bench::ex1(), LmiSpec::hierarchy(1, 1), 52, 62);
  ASSERT_EQ(r.points.size(), 11u);
  ASSERT_TRUE(r.tau_max_feasible);
  EXPECT_EQ(*r.tau_max_feasible, 57);
  EXPECT_EQ(*r.tau_min_feasible, 52);
  EXPECT_FALSE(r.has_left_edge());
  for (const DelayPoint& p : r.points) EXPECT_EQ(p.result.feasible, p.tau <= 57) << p.tau;
}

TEST(MaxDelay, InadmissibleDelaysAreSkipped) {
  // nu1 = 3 needs tau >= 4.
  const DelayRange r = max_delay(bench::ex1(), LmiSpec::hierarchy(1, 3), 1, 6);
  ASSERT_EQ(r.points.size(), 6u);
  for (const DelayPoint& p : r.points) {
    EXPECT_EQ(p.admissible, p.tau >= 4) << p.tau;
    if (!p.admissible) {
      EXPECT_FALSE(p.result.feasible);
    }
  }
  EXPECT_EQ(*r.tau_min_feasible, 4);
}

TEST(MaxDelay, Example2LeftEdge) {
  const DelayRange r = max_delay(bench::ex2(), LmiSpec::hierarchy(1, 1), 9, 14);
  ASSERT_TRUE(r.tau_min_feasible);
  EXPECT_EQ(*r.tau_min_feasible, 12);
  EXPECT_TRUE(r.has_left_edge());
}

TEST(MaxDelay, ParallelMatchesSerial) {
  const LmiSpec spec = LmiSpec::hierarchy(2, 2);
  const DelayRange a = max_delay(bench::ex1(), spec, 50, 60, {}, 1);
  const DelayRange b = max_delay(bench::ex1(), spec, 50, 60, {}, 4);
  EXPECT_EQ(a.tau_max_feasible, b.tau_max_feasible);
  ASSERT_EQ(a.points.size(), b.points.size());
  for (std::size_t i = 0; i < a.points.size(); ++i) {
    EXPECT_EQ(a.points[i].tau, b.points[i].tau);
    EXPECT_EQ(a.points[i].result.margin, b.points[i].result.margin);
  }
}

TEST(MaxDelay, RejectsBadRange) {
  EXPECT_THROW(max_delay(bench::ex1(), LmiSpec::hierarchy(1, 1), 5, 4), std::invalid_argument);
  EXPECT_THROW(max_delay(bench::ex1(), LmiSpec::hierarchy(1, 1), 0, 4), std::invalid_argument);
}

TEST(Lifting, CompanionMatrix) {
  const SystemModel s = bench::ex1(2);
  const Eigen::MatrixXd c = companion_matrix(s);
  ASSERT_EQ(c.rows(), 6);
  EXPECT_EQ(c.block(0, 0, 2, 2), s.A);
  EXPECT_EQ(c.block(0, 4, 2, 2), s.Ad);
  EXPECT_EQ(c.block(2, 0, 4, 4), Eigen::MatrixXd::Identity(4, 4));
  EXPECT_EQ(c.block(2, 4, 4, 2), Eigen::MatrixXd::Zero(4, 2));

  const Eigen::MatrixXd c0 = companion_matrix(bench::ex1(0));
  EXPECT_EQ(c0, s.A + s.Ad);
}

TEST(Lifting, Example1Interval) {
  const LiftingScan scan = lifting_scan(bench::ex1(), 0, 70);
  ASSERT_TRUE(scan.interval);
  EXPECT_EQ(scan.interval->first, 0);
  EXPECT_EQ(scan.interval->second, 58);
  EXPECT_TRUE(scan.contiguous);
  EXPECT_EQ(scan.radius.size(), 71u);
  EXPECT_LT(scan.radius[58], 1.0);
  EXPECT_GT(scan.radius[59], 1.0);
}

TEST(Lifting, Example2Interval) {
  const LiftingScan scan = lifting_scan(bench::ex2(), 0, 180, 2);
  ASSERT_TRUE(scan.interval);
  EXPECT_EQ(scan.interval->first, 12);
  EXPECT_EQ(scan.interval->second, 169);
}

TEST(Lifting, DecisionVariableCounts) {
  EXPECT_EQ(nodv_lifting(2, 58), 7021);
  EXPECT_EQ(nodv_lifting(2, 169), 57970);
  EXPECT_EQ(nodv_lifting(3, 56), 14706);
}

TEST(Soundness, CertifiedDelaysAreLiftingStable) {
  for (int l = 1; l <= 2; ++l) {
    const DelayRange r = max_delay(bench::ex2(), LmiSpec::hierarchy(l, 2), 1, 30);
    for (const DelayPoint& p : r.points) {
      if (p.result.feasible) {
        EXPECT_TRUE(lifting_oracle(bench::ex2(p.tau))) << p.tau;
      }
    }
  }
  const DelayRange r3 = max_delay(bench::ex3(), LmiSpec::hierarchy(1, 2), 45, 55);
  for (const DelayPoint& p : r3.points) {
    if (p.result.feasible) {
      EXPECT_TRUE(lifting_oracle(bench::ex3(p.tau))) << p.tau;
    }
  }
}

TEST(Hierarchy, ViolationsOnSyntheticTable) {
  HierarchyTable t;
  t.lmax = 2;
  t.numax = 2;
  t.cells[{1, 0}] = range_with_max(42);
  t.cells[{1, 1}] = range_with_max(57);
  t.cells[{1, 2}] = range_with_max(58);
  t.cells[{2, 1}] = range_with_max(57);
  t.cells[{2, 2}] = range_with_max(58);
  EXPECT_TRUE(t.violations().empty());

  t.cells[{1, 2}] = range_with_max(56);  // row drop 57 -> 56
  auto v = t.violations();
  ASSERT_FALSE(v.empty());
  EXPECT_EQ(v.front().relation, "row");
  EXPECT_EQ(v.front().weaker, std::make_pair(1, 1));
  EXPECT_EQ(v.front().stronger, std::make_pair(1, 2));

  t.cells[{1, 2}] = range_with_max(58);
  t.cells[{2, 2}] = range_with_max(std::nullopt);  // column drop 58 -> none
  v = t.violations();
  ASSERT_EQ(v.size(), 2u);
  bool column = false;
  for (const auto& x : v) column = column || x.relation == "column";
  EXPECT_TRUE(column);
}

TEST(Hierarchy, Example1SmallTable) {
  const HierarchyTable t = hierarchy_table(bench::ex1(), 2, 2, 40, 60);
  EXPECT_EQ(t.tau_max(1, 0), 42);
  EXPECT_EQ(t.tau_max(1, 1), 57);
  EXPECT_EQ(t.tau_max(2, 1), 57);
  EXPECT_EQ(t.tau_max(1, 2), 58);
  EXPECT_EQ(t.tau_max(2, 2), 58);
  EXPECT_THROW(t.tau_max(2, 0), std::out_of_range);  // l - 1 > nu1 has no cell
  EXPECT_TRUE(t.violations().empty());
}
