#pragma once

// Source encoders for two-unicast rate points.
//
// With transfer matrices fixed, every rate pair is realized by choosing the
// source encoding matrices M1 (k_{1-12} x R1), M2 (k_{2-12} x R2) and
// precoders V1 (R1 x k11), V2 (R2 x k22):
//
//   Z1 = H11 M1 V1 X1 + H12 M2 V2 X2
//   Z2 = H21 M1 V1 X1 + H22 M2 V2 X2
//
// Terminal t_i must recover V_i X_i. The constructions start at the base
// region boundary point Q1 (or Q2) and grow one rate by appending encoder
// columns (rate increase) and, when the sum rank is saturated, trading a
// column of the other source's encoder away (rate exchange).

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "nc2/codegen.hpp"
#include "nc2/error.hpp"
#include "nc2/gfmat.hpp"
#include "nc2/netgraph.hpp"
#include "nc2/rng.hpp"

namespace nc2 {

struct IntPoint {
  int r1 = 0;
  int r2 = 0;
  IntPoint swapped() const { return {r2, r1}; }
  bool dominated_by(const IntPoint& o) const { return r1 <= o.r1 && r2 <= o.r2; }
  friend bool operator==(const IntPoint&, const IntPoint&) = default;
};

struct EncoderPair {
  Matrix m1, m2;  // k_{1-12} x R1, k_{2-12} x R2
  Matrix v1, v2;  // R1 x k11, R2 x k22

  IntPoint rates() const { return {static_cast<int>(m1.cols()), static_cast<int>(m2.cols())}; }
  EncoderPair swapped() const { return {m2, m1, v2, v1}; }
};

enum class DecodeMode { OwnOnly, Both };

inline const char* to_string(DecodeMode m) { return m == DecodeMode::Both ? "both-streams" : "own-stream-only"; }

struct BoundaryPoints {
  IntPoint q1;  // (R1*, R2*)
  IntPoint q2;  // (R1**, R2**)
};

inline BoundaryPoints boundary_points(const CutVector& cv) {
  const int sum = std::min(cv.k121, cv.k122);
  BoundaryPoints b;
  b.q1.r1 = std::min(cv.k12, cv.k11);
  b.q1.r2 = std::min(std::min(cv.k21, cv.k22), sum - b.q1.r1);
  b.q2.r2 = std::min(cv.k21, cv.k22);
  b.q2.r1 = std::min(std::min(cv.k12, cv.k11), sum - b.q2.r2);
  return b;
}

// Rates reachable by multicasting both sources to both terminals.
inline bool in_base_region(const CutVector& cv, IntPoint p) {
  return p.r1 >= 0 && p.r2 >= 0 && p.r1 <= std::min(cv.k12, cv.k11) && p.r2 <= std::min(cv.k21, cv.k22) &&
         p.r1 + p.r2 <= std::min(cv.k121, cv.k122);
}

inline bool low_interference(const CutVector& cv) { return cv.k12 + cv.k21 <= std::min(cv.k121, cv.k122); }

inline constexpr int kEncoderAttempts = 128;

// Random V1, V2 of full row rank.
inline void draw_precoders(EncoderPair& enc, const CutVector& cv, std::uint64_t seed) {
  const IntPoint r = enc.rates();
  if (r.r1 > cv.k11 || r.r2 > cv.k22)
    throw PreconditionError("rate exceeds message length: precoder would lack full row rank");
  const Field f = enc.m1.field();
  Rng rng(derive_seed(seed, {0x5ec0de}));
  auto draw = [&](std::size_t rows, std::size_t cols) {
    for (int a = 0; a < kEncoderAttempts; ++a) {
      Matrix v = Matrix::random(f, rows, cols, rng);
      if (full_row_rank(v)) return v;
    }
    throw LemmaViolation("could not draw a full-row-rank precoder");
  };
  enc.v1 = draw(static_cast<std::size_t>(r.r1), static_cast<std::size_t>(cv.k11));
  enc.v2 = draw(static_cast<std::size_t>(r.r2), static_cast<std::size_t>(cv.k22));
}

// Both terminals decode both streams:
// rank([H_i1 M1  H_i2 M2]) = R1 + R2 for i = 1, 2.
inline EncoderPair base_encoders(const TransferMatrices& tm, const CutVector& cv, int r1, int r2,
                                 std::uint64_t seed) {
  if (!in_base_region(cv, {r1, r2}))
    throw PreconditionError("(" + std::to_string(r1) + ", " + std::to_string(r2) + ") is outside the base region");
  const Field f = tm.h11.field();
  const auto c1 = static_cast<std::size_t>(r1), c2 = static_cast<std::size_t>(r2);
  Rng rng(derive_seed(seed, {0xba5e, c1, c2}));
  for (int a = 0; a < kEncoderAttempts; ++a) {
    Matrix m1 = Matrix::random(f, tm.h11.cols(), c1, rng);
    Matrix m2 = Matrix::random(f, tm.h12.cols(), c2, rng);
    if (rank(m1) != c1 || rank(m2) != c2) continue;
    if (rank(hcat(tm.h11 * m1, tm.h12 * m2)) != c1 + c2) continue;
    if (rank(hcat(tm.h21 * m1, tm.h22 * m2)) != c1 + c2) continue;
    EncoderPair enc{std::move(m1), std::move(m2), Matrix(f, 0, 0), Matrix(f, 0, 0)};
    draw_precoders(enc, cv, seed);
    return enc;
  }
  throw LemmaViolation("no multicast encoders found for (" + std::to_string(r1) + ", " + std::to_string(r2) + ")");
}

namespace detail {

inline Matrix unit_column(Field f, std::size_t n, std::size_t j) {
  Matrix e(f, n, 1);
  e.set(j, 0, 1);
  return e;
}

}  // namespace detail

// Rate increase. Given M1 (R1 columns), M2 (R2 columns) with
// [H11 M1  H12 M2] of full column rank, returns [new | M1] with R1 + n
// columns such that rank([H11 [new|M1]  H12 M2]) = R1 + R2 + n.
// Needs n <= rank([H11  H12 M2]) - R1 - R2. Candidate columns are the
// interface unit vectors first, then random vectors.
inline Matrix rate_increase(const Matrix& h11, const Matrix& h12, const Matrix& m1, const Matrix& m2, int n,
                            std::uint64_t seed = 0) {
  if (h11.rows() != h12.rows() || m1.rows() != h11.cols() || m2.rows() != h12.cols())
    throw PreconditionError("rate_increase: dimension mismatch");
  if (n < 0) throw PreconditionError("rate_increase: negative increment");
  const Field f = h11.field();
  const Matrix h12m2 = h12 * m2;
  Matrix joint = hcat(h11 * m1, h12m2);
  std::size_t have = m1.cols() + m2.cols();
  if (rank(joint) != have) throw PreconditionError("rate_increase: [H11 M1  H12 M2] lacks full column rank");
  const std::size_t r = rank(hcat(h11, h12m2));
  if (have + static_cast<std::size_t>(n) > r)
    throw PreconditionError("rate_increase: increment " + std::to_string(n) + " exceeds rank headroom " +
                            std::to_string(r - have));

  Matrix added(f, h11.cols(), 0);
  auto try_candidate = [&](const Matrix& c) {
    Matrix grown = hcat(h11 * c, joint);
    if (rank(grown) != have + 1) return false;
    joint = std::move(grown);
    added = hcat(added, c);
    ++have;
    return true;
  };
  int need = n;
  for (std::size_t j = 0; j < h11.cols() && need > 0; ++j)
    if (try_candidate(detail::unit_column(f, h11.cols(), j))) --need;
  Rng rng(derive_seed(seed, {0x1ec, static_cast<std::uint64_t>(n)}));
  for (int a = 0; a < kEncoderAttempts && need > 0; ++a)
    if (try_candidate(Matrix::random(f, h11.cols(), 1, rng))) --need;
  if (need > 0) throw LemmaViolation("rate_increase: candidate pool exhausted");

  Matrix out = hcat(added, m1);
  if (rank(out) != out.cols() || rank(hcat(h11 * out, h12m2)) != out.cols() + m2.cols())
    throw LemmaViolation("rate_increase: postcondition failed");
  return out;
}

// Rate exchange. Given M1p = [alpha | M1] with
// rank([H11 M1p  H12 M2]) = rank([H11  H12 M2]) = r and
// rank(H11 M1p) = r - R2 + 1, removes one column of M2 (lowest index that
// works) so that span(H11 M1p) and span(H12 M2') meet only at zero.
inline Matrix rate_exchange(const Matrix& h11, const Matrix& m1p, const Matrix& h12, const Matrix& m2) {
  if (h11.rows() != h12.rows() || m1p.rows() != h11.cols() || m2.rows() != h12.cols())
    throw PreconditionError("rate_exchange: dimension mismatch");
  const Matrix a = h11 * m1p;
  const Matrix b = h12 * m2;
  const std::size_t r = rank(hcat(h11, b));
  const std::size_t r2 = m2.cols();
  if (rank(hcat(a, b)) != r) throw PreconditionError("rate_exchange: [H11 M1p  H12 M2] does not reach rank r");
  if (r2 == 0 || m1p.cols() + r2 != r + 1 || rank(a) != m1p.cols())
    throw PreconditionError("rate_exchange: H11 M1p must have full rank r - R2 + 1");
  for (std::size_t j = 0; j < r2; ++j) {
    Matrix m2p = m2.without_column(j);
    if (span_intersection_dim(a, h12 * m2p) == 0) return m2p;
  }
  throw LemmaViolation("rate_exchange: no removable column");
}

// rank([H11  H12 M2]).
inline int rank_term(const TransferMatrices& tm, const Matrix& m2) {
  return static_cast<int>(rank(hcat(tm.h11, tm.h12 * m2)));
}

// max(k11, k121 - k21 + R2*, R1* + R2*).
inline int lower_bound_rank(const CutVector& cv, int r1_star, int r2_star) {
  return std::max({cv.k11, cv.k121 - cv.k21 + r2_star, r1_star + r2_star});
}

// Sum-rate terms: t1 = rank([H11  H12 M2]) with M2 from the Q1 encoders,
// t2 = rank([H21 M1  H22]) with M1 from the Q2 encoders.
struct RankTerms {
  int t1 = 0;
  int t2 = 0;
  RankTerms swapped() const { return {t2, t1}; }
  friend bool operator==(const RankTerms&, const RankTerms&) = default;
};

inline RankTerms rank_term_bounds(const CutVector& cv) {
  const auto b = boundary_points(cv);
  const auto bs = boundary_points(cv.swapped());
  return {lower_bound_rank(cv, b.q1.r1, b.q1.r2), lower_bound_rank(cv.swapped(), bs.q1.r1, bs.q1.r2)};
}

// The t2 term is evaluated on the session-swapped instance so that it uses
// exactly the encoders the Region 3 construction starts from.
inline RankTerms achieved_rank_terms(const TransferMatrices& tm, const CutVector& cv, std::uint64_t seed) {
  auto term = [&](const TransferMatrices& t, const CutVector& c) {
    const IntPoint q1 = boundary_points(c).q1;
    return rank_term(t, base_encoders(t, c, q1.r1, q1.r2, seed).m2);
  };
  return {term(tm, cv), term(tm.swapped(), cv.swapped())};
}

// Low-interference construction realizing (k121 - k21, k122 - k12): each
// terminal decodes its own stream while the other stream's image stays
// disjoint from it.
inline EncoderPair region1_encoders(const TransferMatrices& tm, const CutVector& cv, std::uint64_t seed) {
  if (!low_interference(cv)) throw PreconditionError("region1_encoders: requires k12 + k21 <= min(k121, k122)");
  if (cv.k12 > cv.k11 || cv.k21 > cv.k22) throw PreconditionError("region1_encoders: requires k12 <= k11, k21 <= k22");
  const IntPoint q1 = boundary_points(cv).q1;
  const EncoderPair base = base_encoders(tm, cv, q1.r1, q1.r2, seed);
  if (rank_term(tm, base.m2) != cv.k121 || rank_term(tm.swapped(), base.m1) != cv.k122)
    throw LemmaViolation("region1_encoders: Q1 encoders do not span the interfering transfer images");

  const Matrix m1 = rate_increase(tm.h11, tm.h12, base.m1, base.m2, cv.k121 - cv.k21 - q1.r1, seed);
  const Matrix m2 = rate_increase(tm.h22, tm.h21, base.m2, base.m1, cv.k122 - cv.k12 - q1.r2, seed + 1);

  auto check = [](const Matrix& h_own, const Matrix& h_other, const Matrix& m, int width) {
    const auto w = static_cast<std::size_t>(width);
    if (m.cols() != w || rank(m) != w || rank(h_own * m) != w || span_intersection_dim(h_own * m, h_other) != 0)
      throw LemmaViolation("region1_encoders: encoders fail the decode conditions");
  };
  check(tm.h11, tm.h12, m1, cv.k121 - cv.k21);
  check(tm.h22, tm.h21, m2, cv.k122 - cv.k12);

  EncoderPair enc{m1, m2, Matrix(tm.h11.field(), 0, 0), Matrix(tm.h11.field(), 0, 0)};
  draw_precoders(enc, cv, derive_seed(seed, {1}));
  return enc;
}

struct Region2Result {
  EncoderPair enc;
  int rank_term = 0;  // rank([H11  H12 M2]) at Q1
  int r1_prime = 0;   // rank_term - R2*
};

// Region 2 construction: from the Q1 encoders raise R1 to
// R1' = rank([H11 H12 M2]) - R2*, then trade delta units of R2 for R1.
// t1 decodes both streams; t2 decodes its own. Needs k12 <= k11 and
// R1* < k11 (otherwise R1 cannot grow). Also realizes Region 2' in the
// low-interference regime, where the rank term equals k121.
inline Region2Result region2_point_encoders(const TransferMatrices& tm, const CutVector& cv, int delta,
                                            std::uint64_t seed) {
  if (cv.k12 > cv.k11) throw PreconditionError("region2_point_encoders: requires k12 <= k11");
  const IntPoint q1 = boundary_points(cv).q1;
  if (q1.r1 >= cv.k11) throw PreconditionError("region2_point_encoders: R1* = k11, so R1 cannot be increased");
  const EncoderPair base = base_encoders(tm, cv, q1.r1, q1.r2, seed);
  const int rt = rank_term(tm, base.m2);
  const int r1p = rt - q1.r2;
  const int max_delta = std::min(q1.r2, cv.k11 - r1p);
  if (delta < 0 || delta > max_delta)
    throw PreconditionError("region2_point_encoders: delta " + std::to_string(delta) + " outside [0, " +
                            std::to_string(max_delta) + "]");

  Matrix m1 = rate_increase(tm.h11, tm.h12, base.m1, base.m2, r1p - q1.r1, seed);
  Matrix m2 = base.m2;
  const Matrix no_cols(tm.h11.field(), tm.h12.cols(), 0);
  for (int step = 0; step < delta; ++step) {
    Matrix m1p = rate_increase(tm.h11, tm.h12, m1, no_cols, 1, seed + 1 + static_cast<std::uint64_t>(step));
    m2 = rate_exchange(tm.h11, m1p, tm.h12, m2);
    m1 = std::move(m1p);
  }

  const std::size_t total = m1.cols() + m2.cols();
  if (rank(hcat(tm.h11 * m1, tm.h12 * m2)) != total)
    throw LemmaViolation("region2_point_encoders: t1 lost joint decodability");
  if (!full_column_rank(tm.h22 * m2) || span_intersection_dim(tm.h21 * m1, tm.h22 * m2) != 0)
    throw LemmaViolation("region2_point_encoders: interference at t2 overlaps the intended stream");

  EncoderPair enc{std::move(m1), std::move(m2), Matrix(tm.h11.field(), 0, 0), Matrix(tm.h11.field(), 0, 0)};
  draw_precoders(enc, cv, derive_seed(seed, {2, static_cast<std::uint64_t>(delta)}));
  return {std::move(enc), rt, r1p};
}

// Region 3 is Region 2 on the session-swapped instance.
inline Region2Result region3_point_encoders(const TransferMatrices& tm, const CutVector& cv, int delta,
                                            std::uint64_t seed) {
  Region2Result r = region2_point_encoders(tm.swapped(), cv.swapped(), delta, seed);
  r.enc = r.enc.swapped();
  return r;
}

// Keeps the leading columns of each encoder; every decode condition used by
// the constructions survives column deletion.
inline EncoderPair truncate_encoders(const EncoderPair& enc, const CutVector& cv, IntPoint p, std::uint64_t seed) {
  const IntPoint have = enc.rates();
  if (!p.dominated_by(have) || p.r1 < 0 || p.r2 < 0) throw PreconditionError("truncate_encoders: target not dominated");
  if (p == have) return enc;
  EncoderPair out{enc.m1.leading_columns(static_cast<std::size_t>(p.r1)),
                  enc.m2.leading_columns(static_cast<std::size_t>(p.r2)), enc.v1, enc.v2};
  draw_precoders(out, cv, derive_seed(seed, {3, static_cast<std::uint64_t>(p.r1), static_cast<std::uint64_t>(p.r2)}));
  return out;
}

enum class Construction { Base, Region1, Region2, Region3 };

inline const char* to_string(Construction c) {
  switch (c) {
    case Construction::Base: return "base";
    case Construction::Region1: return "region1";
    case Construction::Region2: return "region2";
    case Construction::Region3: return "region3";
  }
  return "?";
}

struct ConstructionPlan {
  Construction kind = Construction::Base;
  int delta = 0;
  IntPoint built;  // rate point of the untruncated construction
  DecodeMode t1 = DecodeMode::Both;
  DecodeMode t2 = DecodeMode::Both;
};

// Region 2 construction points (R1' + d, R2* - d) for every admissible d.
inline std::vector<IntPoint> region2_frontier(const CutVector& cv, int rank_term_t1) {
  if (cv.k12 > cv.k11) return {};
  const IntPoint q1 = boundary_points(cv).q1;
  if (q1.r1 >= cv.k11) return {};
  const int r1p = rank_term_t1 - q1.r2;
  const int max_delta = std::min(q1.r2, cv.k11 - r1p);
  std::vector<IntPoint> out;
  for (int d = 0; d <= max_delta; ++d) out.push_back({r1p + d, q1.r2 - d});
  return out;
}

// Picks the construction that reaches an integer point, or nullopt when no
// construction covers it.
inline std::optional<ConstructionPlan> plan_construction(const CutVector& cv, const RankTerms& terms, IntPoint p) {
  if (p.r1 < 0 || p.r2 < 0) return std::nullopt;
  if (in_base_region(cv, p)) return ConstructionPlan{Construction::Base, 0, p, DecodeMode::Both, DecodeMode::Both};
  if (low_interference(cv) && cv.k12 <= cv.k11 && cv.k21 <= cv.k22) {
    const IntPoint corner{cv.k121 - cv.k21, cv.k122 - cv.k12};
    if (p.dominated_by(corner))
      return ConstructionPlan{Construction::Region1, 0, corner, DecodeMode::OwnOnly, DecodeMode::OwnOnly};
  }
  const auto f2 = region2_frontier(cv, terms.t1);
  for (std::size_t d = 0; d < f2.size(); ++d)
    if (p.dominated_by(f2[d]))
      return ConstructionPlan{Construction::Region2, static_cast<int>(d), f2[d], DecodeMode::Both, DecodeMode::OwnOnly};
  const auto f3 = region2_frontier(cv.swapped(), terms.t2);
  for (std::size_t d = 0; d < f3.size(); ++d)
    if (p.dominated_by(f3[d].swapped()))
      return ConstructionPlan{Construction::Region3, static_cast<int>(d), f3[d].swapped(), DecodeMode::OwnOnly,
                              DecodeMode::Both};
  return std::nullopt;
}

inline EncoderPair build_plan(const TransferMatrices& tm, const CutVector& cv, const ConstructionPlan& plan, IntPoint p,
                              std::uint64_t seed) {
  switch (plan.kind) {
    case Construction::Base: return base_encoders(tm, cv, p.r1, p.r2, seed);
    case Construction::Region1: return truncate_encoders(region1_encoders(tm, cv, seed), cv, p, seed);
    case Construction::Region2:
      return truncate_encoders(region2_point_encoders(tm, cv, plan.delta, seed).enc, cv, p, seed);
    case Construction::Region3:
      return truncate_encoders(region3_point_encoders(tm, cv, plan.delta, seed).enc, cv, p, seed);
  }
  throw PreconditionError("unknown construction");
}

}  // namespace nc2
