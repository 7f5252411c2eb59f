#include <gtest/gtest.h>

#include "nc2/pipeline.hpp"
#include "nc2/regions.hpp"
#include "support/corpus.hpp"

using namespace nc2;

namespace {

Polygon poly(std::initializer_list<std::pair<int, int>> pts) {
  Polygon p;
  for (auto [a, b] : pts) p.vertices.push_back(RatePoint(IntPoint{a, b}));
  return p;
}

RatePoint rp(int a, int b) { return RatePoint(IntPoint{a, b}); }

std::vector<Instance> corpus_instances(std::size_t n) {
  std::vector<Instance> out;
  for (const Network& net : fixtures::corpus(n)) out.push_back(build_instance(net));
  return out;
}

}  // namespace

TEST(Geometry, HullDropsCollinearAndInteriorPoints) {
  const Polygon h = convex_hull({rp(2, 0), rp(1, 1), rp(0, 2), rp(1, 0)});
  EXPECT_EQ(h, poly({{0, 0}, {2, 0}, {0, 2}}));
}

TEST(Geometry, HullIsDownLeftClosed) {
  EXPECT_EQ(convex_hull({rp(2, 1)}), poly({{0, 0}, {2, 0}, {2, 1}, {0, 1}}));
  EXPECT_EQ(convex_hull({}), poly({{0, 0}}));
  EXPECT_EQ(convex_hull({rp(3, 0)}), poly({{0, 0}, {3, 0}}));
}

TEST(Geometry, ContainsHandlesDegenerateShapes) {
  const Polygon seg = poly({{0, 0}, {2, 0}});
  EXPECT_TRUE(contains(seg, {Rational(1, 2), Rational(0)}));
  EXPECT_FALSE(contains(seg, rp(3, 0)));
  EXPECT_FALSE(contains(seg, {Rational(1), Rational(1, 3)}));
  EXPECT_TRUE(contains(poly({{0, 0}}), rp(0, 0)));
  EXPECT_FALSE(contains(Polygon{}, rp(0, 0)));
  const Polygon tri = poly({{0, 0}, {2, 0}, {0, 2}});
  EXPECT_TRUE(contains(tri, rp(1, 1)));
  EXPECT_FALSE(contains(tri, {Rational(1), Rational(3, 2)}));
}

TEST(Geometry, ConstraintPolygonHasExactVertices) {
  const Polygon p = box_with_sum(Rational(3), Rational(2), Rational(4));
  EXPECT_EQ(p, poly({{0, 0}, {3, 0}, {3, 1}, {2, 2}, {0, 2}}));
  EXPECT_EQ(box_with_sum(Rational(-1), Rational(2), std::nullopt), poly({{0, 0}, {0, 2}}));
}

TEST(Geometry, MirrorSwapsCoordinates) {
  EXPECT_EQ(mirror(poly({{0, 0}, {3, 0}, {3, 1}, {0, 1}})), poly({{0, 0}, {1, 0}, {1, 3}, {0, 3}}));
}

TEST(Ef09, WorkedExample) {
  const CutVector cv = CutVector::from_values({4, 1, 0, 0, 4, 1, 4, 1, 5});
  ASSERT_TRUE(cv.consistent());
  EXPECT_EQ(ef09_region(cv), poly({{0, 0}, {4, 0}, {2, 1}, {0, 1}}));
  EXPECT_EQ(ef09_region(cv.swapped()), mirror(ef09_region(cv)));
}

TEST(Region, ButterflyIsUnitSquare) {
  const CutVector cv = CutVector::from_values({1, 1, 2, 2, 2, 2, 2, 2, 3});
  const RegionReport rep = achievable_region(cv);
  EXPECT_EQ(rep.regime, Regime::High);
  EXPECT_EQ(rep.hull, poly({{0, 0}, {1, 0}, {1, 1}, {0, 1}}));
  EXPECT_EQ(rep.flags, (std::vector<std::string>{"region2_inapplicable", "region3_inapplicable", "extension_inapplicable"}));
  const ComparisonReport c = compare_with_ef09(rep);
  EXPECT_EQ(c.only_ours, (std::vector<RatePoint>{rp(1, 1), rp(0, 1)}));
  EXPECT_TRUE(c.only_ef09.empty());
}

TEST(Region, RelayIsTwoByTwoSquare) {
  const CutVector cv = CutVector::from_values({2, 2, 1, 1, 3, 3, 2, 2, 4});
  const RegionReport rep = achievable_region(cv);
  EXPECT_EQ(rep.regime, Regime::Low);
  EXPECT_EQ(rep.hull, poly({{0, 0}, {2, 0}, {2, 2}, {0, 2}}));
  for (const auto& v : rep.vertices) EXPECT_TRUE(v.plan.has_value()) << to_string(v.point);
  EXPECT_TRUE(rep.flags.empty());
}

TEST(Region, RejectsInconsistentInput) {
  EXPECT_THROW(achievable_region(CutVector::from_values({3, 1, 0, 0, 2, 1, 3, 1, 3})), PreconditionError);
  const CutVector cv = CutVector::from_values({3, 3, 1, 3, 4, 3, 3, 3, 5});
  EXPECT_THROW(achievable_region(cv, RankTerms{2, 3}), LemmaViolation);
}

TEST(Region, HullWithinCutSetBounds) {
  for (const Instance& inst : corpus_instances(60)) {
    const RegionReport& rep = inst.report;
    const CutVector& cv = inst.cuts;
    for (const auto& v : rep.hull.vertices) {
      EXPECT_LE(v.r1, cv.k11);
      EXPECT_LE(v.r2, cv.k22);
      EXPECT_LE(v.r1 + v.r2, cv.k1212);
    }
    EXPECT_TRUE(subset(*rep.find("base"), rep.hull));
    for (const auto& r : rep.regions)
      if (!r.comparison_only) {
        EXPECT_TRUE(subset(r.polygon, rep.hull)) << r.name;
      }
  }
}

TEST(Region, HullVerticesComeFromSubRegions) {
  for (const Instance& inst : corpus_instances(60)) {
    for (const auto& v : inst.report.hull.vertices) {
      bool found = false;
      for (const auto& r : inst.report.regions)
        if (!r.comparison_only)
          found = found || std::find(r.polygon.vertices.begin(), r.polygon.vertices.end(), v) != r.polygon.vertices.end();
      EXPECT_TRUE(found) << to_string(v);
    }
  }
}

TEST(Region, EveryHullVertexIsConstructible) {
  for (const Instance& inst : corpus_instances(60)) {
    for (const auto& v : inst.report.vertices) {
      EXPECT_TRUE(v.point.integral());
      EXPECT_TRUE(v.plan.has_value()) << to_string(v.point);
    }
  }
}

TEST(Region, LowRegimeGuardsAreAutomatic) {
  for (const Network& net : fixtures::corpus(80, 3)) {
    const CutVector cv = cut_vector(net);
    if (classify(cv) != Regime::Low) continue;
    EXPECT_LE(cv.k12, cv.k11);
    EXPECT_LE(cv.k21, cv.k22);
  }
}

TEST(Region, SessionSwapMirrorsRegion) {
  for (const Instance& inst : corpus_instances(60)) {
    const RegionReport sw = achievable_region(inst.cuts.swapped(), inst.achieved.swapped());
    EXPECT_EQ(sw.hull, mirror(inst.report.hull));
    EXPECT_EQ(sw.regime, inst.report.regime);
  }
}

// At k12 + k21 = min(k121, k122) both construction families apply and agree.
TEST(Region, TieGivesSameHullEitherWay) {
  int ties = 0;
  for (const Instance& inst : corpus_instances(200)) {
    const CutVector& cv = inst.cuts;
    if (cv.k12 + cv.k21 != std::min(cv.k121, cv.k122)) continue;
    ++ties;
    const RegionReport low = achievable_region(cv, inst.achieved, Regime::Low);
    const RegionReport high = achievable_region(cv, inst.achieved, Regime::High);
    EXPECT_EQ(low.hull, high.hull);
    const IntPoint corner{cv.k121 - cv.k21, cv.k122 - cv.k12};
    EXPECT_TRUE(contains(*low.find("region3prime"), corner) || contains(*low.find("region2prime"), corner));
  }
  EXPECT_GT(ties, 3);
}

TEST(Region, BoundOnlyReportNeedsNoGraph) {
  const CutVector cv = CutVector::from_values({3, 3, 1, 3, 4, 3, 3, 3, 5});
  const RegionReport rep = achievable_region(cv);
  EXPECT_FALSE(rep.achieved.has_value());
  EXPECT_EQ(rep.terms(), rep.bound);
  EXPECT_NE(rep.find("region2"), nullptr);
  EXPECT_NE(rep.find("region3"), nullptr);
}
