#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include "nc2/verify.hpp"
#include "support/corpus.hpp"

using namespace nc2;

namespace {

Network fixture(const std::string& name) {
  std::ifstream f(fixtures::fixture_path(name));
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_network(ss.str());
}

RatePoint rp(int a, int b) { return RatePoint(IntPoint{a, b}); }

}  // namespace

TEST(Simulate, MatrixFormMatchesPropagation) {
  Rng rng(4);
  for (const Network& net : fixtures::corpus(30)) {
    const Instance inst = build_instance(net);
    const IntPoint q1 = boundary_points(inst.cuts).q1;
    const EncoderPair enc = base_encoders(inst.tm(), inst.cuts, q1.r1, q1.r2, 0);
    const Field& f = inst.field();
    for (int t = 0; t < 4; ++t) {
      std::vector<Element> x1(static_cast<std::size_t>(inst.cuts.k11)), x2(static_cast<std::size_t>(inst.cuts.k22));
      for (auto& x : x1) x = f.random(rng);
      for (auto& x : x2) x = f.random(rng);
      const SimulationResult r = simulate(inst.code.code, enc, x1, x2);
      EXPECT_EQ(r.z1.size(), static_cast<std::size_t>(inst.cuts.k121));
      EXPECT_EQ(r.z2.size(), static_cast<std::size_t>(inst.cuts.k122));
    }
  }
}

TEST(Decode, BothModesOnRelay) {
  const Instance inst = build_instance(fixture("relay.txt"));
  const TransferMatrices& tm = inst.tm();
  const Field& f = inst.field();
  const EncoderPair base = base_encoders(tm, inst.cuts, 1, 1, 0);
  Rng rng(1);
  const Matrix u1 = Matrix::random(f, 1, 3, rng), u2 = Matrix::random(f, 1, 3, rng);
  const Matrix z = tm.h11 * base.m1 * u1 + tm.h12 * base.m2 * u2;
  const Decoded both = decode_terminal(z, tm.h11 * base.m1, tm.h12 * base.m2, DecodeMode::Both);
  EXPECT_EQ(both.own, u1);
  ASSERT_TRUE(both.other.has_value());
  EXPECT_EQ(*both.other, u2);

  const EncoderPair r1 = region1_encoders(tm, inst.cuts, 0);
  const Matrix w1 = Matrix::random(f, 2, 3, rng), w2 = Matrix::random(f, 2, 3, rng);
  const Matrix z1 = tm.h11 * r1.m1 * w1 + tm.h12 * r1.m2 * w2;
  const Decoded own = decode_terminal(z1, tm.h11 * r1.m1, tm.h12 * r1.m2, DecodeMode::OwnOnly);
  EXPECT_EQ(own.own, w1);
  EXPECT_FALSE(own.other.has_value());
  EXPECT_THROW(decode_terminal(z1, tm.h11 * r1.m1, tm.h12 * r1.m2, DecodeMode::Both), SolveError);
}

TEST(Verify, ButterflyCornerPasses) {
  const Instance inst = build_instance(fixture("butterfly.txt"));
  const VerificationReport r = verify_rate_point(inst, rp(1, 1));
  EXPECT_TRUE(r.pass());
  EXPECT_EQ(r.method, "exhaustive");
  EXPECT_EQ(r.trials, 257u * 257u);
  ASSERT_EQ(r.schedule.size(), 1u);
  EXPECT_EQ(r.schedule[0].construction, Construction::Base);
  EXPECT_FALSE(r.schedule[0].t1.unintended_undecodable);
}

TEST(Verify, RelayRegion1CornerHidesInterference) {
  const Instance inst = build_instance(fixture("relay.txt"));
  VerifyOptions opt;
  opt.trials = 50;
  const VerificationReport r = verify_rate_point(inst, rp(2, 2), opt);
  EXPECT_TRUE(r.pass());
  EXPECT_EQ(r.method, "random");
  EXPECT_EQ(r.trials, 50u);
  ASSERT_EQ(r.schedule.size(), 1u);
  const BlockInfo& b = r.schedule[0];
  EXPECT_EQ(b.construction, Construction::Region1);
  EXPECT_EQ(b.t1.mode, DecodeMode::OwnOnly);
  EXPECT_TRUE(b.t1.unintended_undecodable);
  EXPECT_TRUE(b.t2.unintended_undecodable);
}

TEST(Verify, ExhaustiveOverSmallField) {
  const VerificationReport r = exhaustive_verify(fixture("butterfly.txt"), {1, 1}, 5);
  EXPECT_TRUE(r.pass());
  EXPECT_EQ(r.q, 5u);
  EXPECT_EQ(r.trials, 25u);
  EXPECT_EQ(r.method, "exhaustive-x");
}

TEST(Verify, ExhaustiveCapEnforced) {
  EXPECT_THROW(exhaustive_verify(fixture("relay.txt"), {2, 2}, 257), SearchSpaceError);
}

TEST(Verify, RankDeficientEncodersRejected) {
  const Instance inst = build_instance(fixture("butterfly.txt"));
  EncoderPair enc = base_encoders(inst.tm(), inst.cuts, 1, 1, 0);
  enc.m1 = Matrix(inst.field(), enc.m1.rows(), 1);
  EXPECT_THROW(verify_encoders(inst.code.code, inst.tm(), inst.cuts, enc, DecodeMode::Both, DecodeMode::Both),
               SolveError);
}

TEST(Verify, TimeshareMidpoint) {
  const Instance inst = build_instance(fixture("butterfly.txt"));
  const VerificationReport r = verify_rate_point(inst, {Rational(1, 2), Rational(1)});
  EXPECT_TRUE(r.pass());
  EXPECT_EQ(r.method, "timeshare");
  ASSERT_EQ(r.schedule.size(), 2u);
  EXPECT_EQ(r.point, (RatePoint{Rational(1, 2), Rational(1)}));
}

TEST(Verify, TimeshareWeights) {
  const Instance inst = build_instance(fixture("relay.txt"));
  const VerificationReport r = verify_timeshare(inst, {2, 0}, {0, 2}, 1, 4);
  EXPECT_TRUE(r.pass());
  EXPECT_EQ(r.point, (RatePoint{Rational(1, 2), Rational(3, 2)}));
  EXPECT_EQ(r.schedule.size(), 4u);
  EXPECT_EQ(r.schedule[0].rates, (IntPoint{2, 0}));
  EXPECT_EQ(r.schedule[3].rates, (IntPoint{0, 2}));
  EXPECT_THROW(verify_timeshare(inst, {2, 0}, {0, 2}, 5, 4), PreconditionError);
}

TEST(Verify, PointsOutsideTheRegionRejected) {
  const Instance inst = build_instance(fixture("butterfly.txt"));
  EXPECT_THROW(verify_rate_point(inst, rp(2, 0)), PreconditionError);
  VerifyOptions opt;
  opt.max_denominator = 2;
  EXPECT_THROW(verify_rate_point(inst, {Rational(1, 3), Rational(1)}, opt), PreconditionError);
}

TEST(Verify, SeedDeterminesReport) {
  const Instance inst = build_instance(fixture("relay.txt"));
  VerifyOptions opt;
  opt.seed = 12;
  opt.trials = 20;
  const VerificationReport a = verify_rate_point(inst, rp(2, 2), opt);
  const VerificationReport b = verify_rate_point(inst, rp(2, 2), opt);
  EXPECT_EQ(a.trials, b.trials);
  EXPECT_EQ(a.schedule[0].encoders.m1, b.schedule[0].encoders.m1);
  EXPECT_EQ(a.schedule[0].encoders.v2, b.schedule[0].encoders.v2);
}

TEST(Verify, SwappedSessionsMirrorOutcome) {
  for (const Network& net : fixtures::corpus(15)) {
    const Instance a = build_instance(net);
    const Instance b = build_instance(swap_sessions(net));
    for (const auto& v : a.report.vertices) {
      VerifyOptions opt;
      opt.trials = 10;
      opt.exhaustive_cap = 1000;
      const VerificationReport ra = verify_rate_point(a, v.point, opt);
      const VerificationReport rb = verify_rate_point(b, v.point.swapped(), opt);
      EXPECT_EQ(ra.pass(), rb.pass());
      EXPECT_EQ(ra.schedule[0].t1.mode, rb.schedule[0].t2.mode);
      EXPECT_EQ(ra.schedule[0].t1.unintended_undecodable, rb.schedule[0].t2.unintended_undecodable);
    }
  }
}

TEST(Oracle, PathSearchOnFixtures) {
  EXPECT_EQ(oracle_cut_vector(fixture("butterfly.txt")), CutVector::from_values({1, 1, 2, 2, 2, 2, 2, 2, 3}));
  EXPECT_EQ(oracle_cut_vector(fixture("relay.txt")), CutVector::from_values({2, 2, 1, 1, 3, 3, 2, 2, 4}));
}

TEST(Oracle, RefusesLargeGraphs) {
  std::string text = "source1 a\nsource2 b\nsink1 c\nsink2 d\nedge a c 21\n";
  EXPECT_THROW(oracle_mincut(parse_network(text), Pair::One, Pair::One), SearchSpaceError);
}
