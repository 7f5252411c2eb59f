#pragma once

// End-to-end achievability checks: push message symbols through the coded
// network, decode at both terminals and compare against what was sent.
// Also hosts the brute-force oracles used to certify other modules.

#include <algorithm>
#include <bit>
#include <chrono>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "nc2/codegen.hpp"
#include "nc2/encoders.hpp"
#include "nc2/error.hpp"
#include "nc2/gfmat.hpp"
#include "nc2/netgraph.hpp"
#include "nc2/pipeline.hpp"
#include "nc2/regions.hpp"
#include "nc2/rng.hpp"

namespace nc2 {

struct SimulationResult {
  std::vector<Element> z1, z2;
};

// Received symbols for a fixed code and encoder pair, computed both from the
// transfer-matrix form and by forward propagation over the edges; the two
// must agree exactly. Holds a reference to `code`.
class Simulator {
 public:
  Simulator(const CodedNetwork& code, const TransferMatrices& tm, const EncoderPair& enc)
      : code_(&code),
        mv1_(enc.m1 * enc.v1),
        mv2_(enc.m2 * enc.v2),
        g1_(hcat(tm.h11 * mv1_, tm.h12 * mv2_)),
        g2_(hcat(tm.h21 * mv1_, tm.h22 * mv2_)),
        in1_(code.net.in_edges(code.net.t1)),
        in2_(code.net.in_edges(code.net.t2)) {}

  SimulationResult run(std::span<const Element> x1, std::span<const Element> x2) const {
    if (x1.size() != mv1_.cols() || x2.size() != mv2_.cols()) throw PreconditionError("simulate: message length mismatch");
    std::vector<Element> x(x1.begin(), x1.end());
    x.insert(x.end(), x2.begin(), x2.end());
    SimulationResult r{mat_vec(g1_, x), mat_vec(g2_, x)};

    const auto y = propagate(*code_, mat_vec(mv1_, x1), mat_vec(mv2_, x2));
    auto matches = [&](const std::vector<Element>& z, const std::vector<std::size_t>& in) {
      for (std::size_t i = 0; i < in.size(); ++i)
        if (z[i] != y[in[i]]) return false;
      return true;
    };
    if (!matches(r.z1, in1_) || !matches(r.z2, in2_))
      throw LemmaViolation("simulate: matrix form and edge propagation disagree");
    return r;
  }

 private:
  const CodedNetwork* code_;
  Matrix mv1_, mv2_;
  Matrix g1_, g2_;  // [H_i1 M1 V1  H_i2 M2 V2]
  std::vector<std::size_t> in1_, in2_;
};

inline SimulationResult simulate(const CodedNetwork& code, const EncoderPair& enc, std::span<const Element> x1,
                                 std::span<const Element> x2) {
  return Simulator(code, transfer_matrices(code), enc).run(x1, x2);
}

// Precomputed linear decoder for one terminal. Output is the own stream,
// followed by the other stream in Both mode.
class TerminalDecoder {
 public:
  TerminalDecoder(const Matrix& own, const Matrix& other, DecodeMode mode)
      : mode_(mode), map_(build(own, other, mode)) {}

  DecodeMode mode() const noexcept { return mode_; }
  std::vector<Element> operator()(std::span<const Element> z) const { return mat_vec(map_, z); }

 private:
  static Matrix build(const Matrix& own, const Matrix& other, DecodeMode mode) {
    if (mode == DecodeMode::OwnOnly) return partial_decoder(other, own);
    const Matrix joint = hcat(own, other);
    if (!full_column_rank(joint))
      throw SolveError(SolveError::Reason::RankDeficient, "joint transfer matrix lacks full column rank");
    return left_inverse(joint);
  }

  DecodeMode mode_;
  Matrix map_;
};

struct Decoded {
  Matrix own;
  std::optional<Matrix> other;
};

// Recovers the terminal's own stream (and the interfering one in Both mode)
// from received symbols Z = own·U_own + other·U_other.
inline Decoded decode_terminal(const Matrix& z, const Matrix& own, const Matrix& other, DecodeMode mode) {
  if (mode == DecodeMode::OwnOnly) return {solve_partial(z, other, own), std::nullopt};
  const Matrix joint = hcat(own, other);
  if (!full_column_rank(joint))
    throw SolveError(SolveError::Reason::RankDeficient, "joint transfer matrix lacks full column rank");
  auto x = solve_full_column_rank(joint, z);
  if (!x) throw SolveError(SolveError::Reason::Inconsistent, "Z is not in span([own other])");
  std::vector<std::size_t> top(own.cols()), rest(other.cols());
  for (std::size_t i = 0; i < top.size(); ++i) top[i] = i;
  for (std::size_t i = 0; i < rest.size(); ++i) rest[i] = own.cols() + i;
  return {x->select_rows(top), x->select_rows(rest)};
}

struct TerminalOutcome {
  DecodeMode mode = DecodeMode::Both;
  std::size_t joint_rank = 0;
  // The other stream cannot be recovered: [own other] is rank deficient.
  bool unintended_undecodable = false;
};

struct BlockInfo {
  IntPoint rates;
  Construction construction = Construction::Base;
  TerminalOutcome t1, t2;
  EncoderPair encoders;
};

struct Witness {
  std::size_t trial = 0;
  std::size_t block = 0;
  std::vector<Element> x1, x2;
  std::string reason;
  EncoderPair encoders;
};

struct VerificationReport {
  RatePoint point;
  std::string method;  // "exhaustive", "exhaustive-x", "random" or "timeshare"
  std::size_t trials = 0;
  std::size_t failures = 0;
  std::uint32_t q = 0;
  std::uint64_t seed = 0;
  std::vector<BlockInfo> schedule;
  double elapsed_ms = 0;
  std::optional<Witness> witness;

  bool pass() const { return failures == 0; }
};

struct VerifyOptions {
  std::size_t trials = 100;
  std::uint64_t seed = 0;
  std::uint64_t exhaustive_cap = 1'000'000;
  int max_denominator = 8;
};

namespace detail {

// q^n, or nullopt past `cap`.
inline std::optional<std::uint64_t> bounded_power(std::uint64_t q, std::size_t n, std::uint64_t cap) {
  std::uint64_t v = 1;
  for (std::size_t i = 0; i < n; ++i) {
    if (v > cap / q) return std::nullopt;
    v *= q;
  }
  return v;
}

// Calls fn on every vector of GF(q)^n in odometer order.
inline void for_each_vector(std::uint32_t q, std::size_t n, const std::function<void(const std::vector<Element>&)>& fn) {
  std::vector<Element> v(n, 0);
  while (true) {
    fn(v);
    std::size_t i = 0;
    while (i < n && ++v[i] == q) v[i++] = 0;
    if (i == n) return;
  }
}

inline std::vector<Element> random_vector(const Field& f, std::size_t n, Rng& rng) {
  std::vector<Element> v(n);
  for (auto& x : v) x = f.random(rng);
  return v;
}

// One encoder pair wired to a simulator and both terminal decoders.
class BlockChecker {
 public:
  BlockChecker(const CodedNetwork& code, const TransferMatrices& tm, const EncoderPair& enc, DecodeMode m1,
               DecodeMode m2)
      : enc_(enc),
        sim_(code, tm, enc),
        d1_(tm.h11 * enc.m1, tm.h12 * enc.m2, m1),
        d2_(tm.h22 * enc.m2, tm.h21 * enc.m1, m2) {
    const std::size_t total = enc.m1.cols() + enc.m2.cols();
    auto outcome = [&](const Matrix& own, const Matrix& other, DecodeMode m) {
      const std::size_t jr = rank(hcat(own, other));
      return TerminalOutcome{m, jr, jr < total};
    };
    t1_ = outcome(tm.h11 * enc.m1, tm.h12 * enc.m2, m1);
    t2_ = outcome(tm.h22 * enc.m2, tm.h21 * enc.m1, m2);
  }

  const TerminalOutcome& t1() const noexcept { return t1_; }
  const TerminalOutcome& t2() const noexcept { return t2_; }
  const EncoderPair& encoders() const noexcept { return enc_; }

  // Empty on success, otherwise what went wrong.
  std::optional<std::string> check(std::span<const Element> x1, std::span<const Element> x2) const {
    const auto u1 = mat_vec(enc_.v1, x1);
    const auto u2 = mat_vec(enc_.v2, x2);
    const auto z = sim_.run(x1, x2);
    const auto got1 = d1_(z.z1);
    const auto got2 = d2_(z.z2);
    auto eq = [](std::span<const Element> a, std::size_t off, const std::vector<Element>& b) {
      return std::equal(b.begin(), b.end(), a.begin() + static_cast<std::ptrdiff_t>(off));
    };
    if (!eq(got1, 0, u1)) return "t1 decoded its own stream incorrectly";
    if (d1_.mode() == DecodeMode::Both && !eq(got1, u1.size(), u2)) return "t1 decoded the s2 stream incorrectly";
    if (!eq(got2, 0, u2)) return "t2 decoded its own stream incorrectly";
    if (d2_.mode() == DecodeMode::Both && !eq(got2, u2.size(), u1)) return "t2 decoded the s1 stream incorrectly";
    return std::nullopt;
  }

 private:
  EncoderPair enc_;
  Simulator sim_;
  TerminalDecoder d1_, d2_;
  TerminalOutcome t1_, t2_;
};

inline void record_failure(VerificationReport& rep, std::size_t trial, std::size_t block, std::span<const Element> x1,
                           std::span<const Element> x2, std::string reason, const EncoderPair& enc) {
  ++rep.failures;
  if (!rep.witness)
    rep.witness = Witness{trial, block, {x1.begin(), x1.end()}, {x2.begin(), x2.end()}, std::move(reason), enc};
}

}  // namespace detail

// Checks one encoder pair. Enumerates every (V1 X1, V2 X2) value when the
// space holds at most opt.exhaustive_cap pairs, otherwise draws opt.trials
// random message pairs (trial i seeded from opt.seed + i).
inline VerificationReport verify_encoders(const CodedNetwork& code, const TransferMatrices& tm, const CutVector& cv,
                                          const EncoderPair& enc, DecodeMode t1, DecodeMode t2,
                                          const VerifyOptions& opt = {},
                                          Construction construction = Construction::Base) {
  const auto start = std::chrono::steady_clock::now();
  const detail::BlockChecker checker(code, tm, enc, t1, t2);
  const Field& f = code.field;
  VerificationReport rep;
  rep.point = RatePoint(enc.rates());
  rep.q = f.q();
  rep.seed = opt.seed;
  rep.schedule.push_back({enc.rates(), construction, checker.t1(), checker.t2(), enc});

  const auto r1 = enc.m1.cols(), r2 = enc.m2.cols();
  if (detail::bounded_power(f.q(), r1 + r2, opt.exhaustive_cap)) {
    rep.method = "exhaustive";
    const Matrix p1 = right_inverse(enc.v1), p2 = right_inverse(enc.v2);
    detail::for_each_vector(f.q(), r1 + r2, [&](const std::vector<Element>& u) {
      const std::span<const Element> all(u);
      const auto x1 = mat_vec(p1, all.first(r1));
      const auto x2 = mat_vec(p2, all.subspan(r1));
      if (auto bad = checker.check(x1, x2)) detail::record_failure(rep, rep.trials, 0, x1, x2, *bad, checker.encoders());
      ++rep.trials;
    });
  } else {
    rep.method = "random";
    for (std::size_t t = 0; t < opt.trials; ++t) {
      Rng rng(opt.seed + t);
      const auto x1 = detail::random_vector(f, static_cast<std::size_t>(cv.k11), rng);
      const auto x2 = detail::random_vector(f, static_cast<std::size_t>(cv.k22), rng);
      if (auto bad = checker.check(x1, x2)) detail::record_failure(rep, t, 0, x1, x2, *bad, checker.encoders());
      ++rep.trials;
    }
  }
  rep.elapsed_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return rep;
}

// Every message pair (X1, X2) in GF(q)^k11 x GF(q)^k22.
inline VerificationReport exhaustive_check(const CodedNetwork& code, const TransferMatrices& tm, const CutVector& cv,
                                           const EncoderPair& enc, DecodeMode t1, DecodeMode t2,
                                           std::uint64_t cap = 1'000'000) {
  const auto start = std::chrono::steady_clock::now();
  const Field& f = code.field;
  const auto n1 = static_cast<std::size_t>(cv.k11), n2 = static_cast<std::size_t>(cv.k22);
  if (!detail::bounded_power(f.q(), n1 + n2, cap))
    throw SearchSpaceError("q^(k11+k22) exceeds the exhaustive cap of " + std::to_string(cap));
  const detail::BlockChecker checker(code, tm, enc, t1, t2);
  VerificationReport rep;
  rep.point = RatePoint(enc.rates());
  rep.method = "exhaustive-x";
  rep.q = f.q();
  rep.schedule.push_back({enc.rates(), Construction::Base, checker.t1(), checker.t2(), enc});
  detail::for_each_vector(f.q(), n1 + n2, [&](const std::vector<Element>& x) {
    const std::span<const Element> all(x);
    if (auto bad = checker.check(all.first(n1), all.subspan(n1)))
      detail::record_failure(rep, rep.trials, 0, all.first(n1), all.subspan(n1), *bad, checker.encoders());
    ++rep.trials;
  });
  rep.elapsed_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return rep;
}

inline std::pair<EncoderPair, ConstructionPlan> encoders_for(const Instance& inst, IntPoint p) {
  auto plan = plan_construction(inst.cuts, inst.achieved, p);
  if (!plan) throw PreconditionError("no construction reaches " + to_string(RatePoint(p)));
  return {build_plan(inst.tm(), inst.cuts, *plan, p, inst.seed), *plan};
}

// Alternates the encoders of two constructible points over d blocks: the
// first w blocks run `a`, the remaining d - w run `b`, achieving
// (w·a + (d-w)·b) / d. Every round draws fresh messages for every block.
inline VerificationReport verify_timeshare(const Instance& inst, IntPoint a, IntPoint b, int w, int d,
                                           const VerifyOptions& opt = {}) {
  if (d < 1 || w < 0 || w > d) throw PreconditionError("timeshare weights must satisfy 0 <= w <= d, d >= 1");
  const auto start = std::chrono::steady_clock::now();
  const auto [ea, pa] = encoders_for(inst, a);
  const auto [eb, pb] = encoders_for(inst, b);
  const detail::BlockChecker ca(inst.code.code, inst.tm(), ea, pa.t1, pa.t2);
  const detail::BlockChecker cb(inst.code.code, inst.tm(), eb, pb.t1, pb.t2);

  VerificationReport rep;
  rep.point = {(Rational(w) * a.r1 + Rational(d - w) * b.r1) / d, (Rational(w) * a.r2 + Rational(d - w) * b.r2) / d};
  rep.method = "timeshare";
  rep.q = inst.field().q();
  rep.seed = opt.seed;
  for (int k = 0; k < d; ++k) {
    const bool first = k < w;
    const auto& c = first ? ca : cb;
    rep.schedule.push_back({first ? a : b, first ? pa.kind : pb.kind, c.t1(), c.t2(), c.encoders()});
  }
  const Field& f = inst.field();
  for (std::size_t t = 0; t < opt.trials; ++t) {
    Rng rng(opt.seed + t);
    bool ok = true;
    for (int k = 0; k < d; ++k) {
      const auto& c = k < w ? ca : cb;
      const auto x1 = detail::random_vector(f, static_cast<std::size_t>(inst.cuts.k11), rng);
      const auto x2 = detail::random_vector(f, static_cast<std::size_t>(inst.cuts.k22), rng);
      if (auto bad = c.check(x1, x2)) {
        if (ok) detail::record_failure(rep, t, static_cast<std::size_t>(k), x1, x2, *bad, c.encoders());
        ok = false;
      }
    }
    ++rep.trials;
  }
  rep.elapsed_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return rep;
}

namespace detail {

struct Timeshare {
  IntPoint a, b;
  int w, d;
};

// p = λ·a + (1-λ)·b with λ = w/d, d <= max_d, over pairs of constructible
// hull vertices; hull edges are tried first.
inline std::optional<Timeshare> find_timeshare(const RegionReport& rep, const RatePoint& p, int max_d) {
  std::vector<IntPoint> verts;
  for (const auto& v : rep.vertices)
    if (v.plan) verts.push_back(v.point.to_int());
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t i = 0; i < verts.size(); ++i) pairs.emplace_back(i, (i + 1) % verts.size());
  for (std::size_t i = 0; i < verts.size(); ++i)
    for (std::size_t j = i + 2; j < verts.size(); ++j) pairs.emplace_back(i, j);
  for (auto [i, j] : pairs) {
    const RatePoint a(verts[i]), b(verts[j]);
    if (a == b || detail::cross(a, b, p) != 0) continue;
    const Rational lambda = a.r1 != b.r1 ? (p.r1 - b.r1) / (a.r1 - b.r1) : (p.r2 - b.r2) / (a.r2 - b.r2);
    if (lambda < 0 || lambda > 1) continue;
    const auto den = boost::multiprecision::denominator(lambda);
    if (den > max_d) continue;
    return Timeshare{verts[i], verts[j], static_cast<int>(boost::multiprecision::numerator(lambda)),
                     static_cast<int>(den)};
  }
  return std::nullopt;
}

}  // namespace detail

// Builds encoders for p and checks decoding. Integer points covered by a
// construction are checked directly; other points must be a timeshare of
// two hull vertices with denominator at most opt.max_denominator.
inline VerificationReport verify_rate_point(const Instance& inst, const RatePoint& p, const VerifyOptions& opt = {}) {
  if (p.integral()) {
    if (auto plan = plan_construction(inst.cuts, inst.achieved, p.to_int())) {
      const EncoderPair enc = build_plan(inst.tm(), inst.cuts, *plan, p.to_int(), inst.seed);
      return verify_encoders(inst.code.code, inst.tm(), inst.cuts, enc, plan->t1, plan->t2, opt, plan->kind);
    }
  }
  const auto ts = detail::find_timeshare(inst.report, p, opt.max_denominator);
  if (!ts) throw PreconditionError(to_string(p) + " is neither constructible nor a timeshare of hull vertices");
  return verify_timeshare(inst, ts->a, ts->b, ts->w, ts->d, opt);
}

inline VerificationReport verify_rate_point(const Network& net, const RatePoint& p, const VerifyOptions& opt = {},
                                            const PipelineOptions& pipe = {}) {
  return verify_rate_point(build_instance(net, pipe), p, opt);
}

// Enumerates every message pair over GF(q) for the construction at p.
inline VerificationReport exhaustive_verify(const Network& net, IntPoint p, std::uint32_t q, std::uint64_t seed = 0) {
  const Instance inst = build_instance(net, {seed, q});
  const CutVector& cv = inst.cuts;
  if (!detail::bounded_power(q, static_cast<std::size_t>(cv.k11 + cv.k22), 1'000'000))
    throw SearchSpaceError("q^(k11+k22) exceeds 10^6");
  const auto [enc, plan] = encoders_for(inst, p);
  auto rep = exhaustive_check(inst.code.code, inst.tm(), cv, enc, plan.t1, plan.t2);
  rep.schedule.front().construction = plan.kind;
  rep.seed = seed;
  return rep;
}

// Maximum number of pairwise edge-disjoint paths from the source subset to
// the terminal subset, by enumerating paths and searching disjoint families.
inline int oracle_mincut(const Network& net, Pair sources, Pair terminals) {
  if (net.edges.size() > 20) throw SearchSpaceError("oracle_mincut is limited to 20 edges");
  const auto srcs = pair_members(net, sources, true);
  const auto dsts = pair_members(net, terminals, false);
  auto is_dst = [&](NodeId v) { return std::find(dsts.begin(), dsts.end(), v) != dsts.end(); };

  std::vector<std::uint32_t> paths;
  std::function<void(NodeId, std::uint32_t)> walk = [&](NodeId v, std::uint32_t used) {
    if (is_dst(v)) {
      paths.push_back(used);
      return;
    }
    for (std::size_t e = 0; e < net.edges.size(); ++e)
      if (net.edges[e].tail == v && !(used & (1u << e))) walk(net.edges[e].head, used | (1u << e));
  };
  std::uint32_t first_hops = 0;
  for (NodeId s : srcs) {
    if (is_dst(s)) return static_cast<int>(net.edges.size()) + 1;
    walk(s, 0);
    for (std::size_t e = 0; e < net.edges.size(); ++e)
      if (net.edges[e].tail == s) first_hops |= 1u << e;
  }

  int best = 0;
  std::function<void(std::size_t, std::uint32_t, int)> search = [&](std::size_t i, std::uint32_t used, int count) {
    best = std::max(best, count);
    if (count + std::popcount(first_hops & ~used) <= best) return;
    for (std::size_t j = i; j < paths.size(); ++j)
      if (!(paths[j] & used)) search(j + 1, used | paths[j], count + 1);
  };
  search(0, 0, 0);
  return best;
}

inline CutVector oracle_cut_vector(const Network& net) {
  using P = Pair;
  return {oracle_mincut(net, P::One, P::One),  oracle_mincut(net, P::Two, P::Two),  oracle_mincut(net, P::One, P::Two),
          oracle_mincut(net, P::Two, P::One),  oracle_mincut(net, P::Both, P::One), oracle_mincut(net, P::Both, P::Two),
          oracle_mincut(net, P::One, P::Both), oracle_mincut(net, P::Two, P::Both), oracle_mincut(net, P::Both, P::Both)};
}

}  // namespace nc2
