#include <gtest/gtest.h>

#include <set>
#include <vector>

#include "nc2/gfmat.hpp"

using namespace nc2;

namespace {

// Every vector in the column span of A, by enumerating coefficient tuples.
std::set<std::vector<Element>> brute_span(const Matrix& a) {
  const Field& f = a.field();
  std::set<std::vector<Element>> out;
  std::vector<Element> c(a.cols(), 0);
  while (true) {
    std::vector<Element> v(a.rows(), 0);
    for (std::size_t j = 0; j < a.cols(); ++j)
      for (std::size_t i = 0; i < a.rows(); ++i) v[i] = f.add(v[i], f.mul(c[j], a.at(i, j)));
    out.insert(v);
    std::size_t k = 0;
    while (k < c.size() && ++c[k] == f.q()) c[k++] = 0;
    if (k == c.size()) break;
  }
  return out;
}

std::size_t log_q(std::size_t n, std::uint32_t q) {
  std::size_t r = 0;
  while (n > 1) {
    n /= q;
    ++r;
  }
  return r;
}

}  // namespace

TEST(Field, InverseAndIdentities) {
  const Field f(257);
  for (Element a = 1; a < 257; ++a) EXPECT_EQ(f.mul(a, f.inv(a)), 1u);
  EXPECT_EQ(f.add(200, 100), 43u);
  EXPECT_EQ(f.sub(3, 5), 255u);
  EXPECT_EQ(f.neg(0), 0u);
  EXPECT_EQ(f.reduce(-1), 256u);
  EXPECT_THROW(f.inv(0), PreconditionError);
}

TEST(Field, RejectsComposite) {
  EXPECT_THROW(Field(256), PreconditionError);
  EXPECT_THROW(Field(1), PreconditionError);
  EXPECT_NO_THROW(Field(2));
}

TEST(Matrix, ProductAgreesWithNaiveSum) {
  const Field f(2053);
  Rng rng(3);
  for (int t = 0; t < 20; ++t) {
    const Matrix a = Matrix::random(f, 4, 7, rng), b = Matrix::random(f, 7, 3, rng);
    const Matrix c = a * b;
    for (std::size_t i = 0; i < 4; ++i)
      for (std::size_t j = 0; j < 3; ++j) {
        Element s = 0;
        for (std::size_t k = 0; k < 7; ++k) s = f.add(s, f.mul(a.at(i, k), b.at(k, j)));
        EXPECT_EQ(c.at(i, j), s);
      }
  }
}

TEST(Matrix, MixedFieldsRejected) {
  EXPECT_THROW(Matrix::identity(Field(5), 2) * Matrix::identity(Field(7), 2), PreconditionError);
}

TEST(RowReduce, RankMatchesSpanSize) {
  for (std::uint32_t q : {2u, 3u, 5u}) {
    const Field f(q);
    Rng rng(q);
    for (int t = 0; t < 60; ++t) {
      const Matrix a = Matrix::random(f, 1 + rng.below(3), 1 + rng.below(4), rng);
      EXPECT_EQ(rank(a), log_q(brute_span(a).size(), q));
    }
  }
}

TEST(RowReduce, EchelonShape) {
  const Field f(7);
  Rng rng(11);
  for (int t = 0; t < 50; ++t) {
    const Matrix a = Matrix::random(f, 4, 5, rng);
    const Echelon e = row_reduce(a);
    for (std::size_t i = 0; i < e.rank(); ++i) {
      if (i) {
        EXPECT_LT(e.pivots[i - 1], e.pivots[i]);
      }
      for (std::size_t r = 0; r < a.rows(); ++r) EXPECT_EQ(e.reduced.at(r, e.pivots[i]), r == i ? 1u : 0u);
    }
    for (std::size_t r = e.rank(); r < a.rows(); ++r)
      for (std::size_t c = 0; c < a.cols(); ++c) EXPECT_EQ(e.reduced.at(r, c), 0u);
  }
}

TEST(RowReduce, IndependentColumnSubsetIsGreedy) {
  const Field f(5);
  const Matrix a = Matrix::from_rows(f, {{1, 2, 0}, {2, 4, 1}});
  EXPECT_EQ(independent_column_subset(a, 2), (std::vector<std::size_t>{0, 2}));
  EXPECT_THROW(independent_column_subset(a, 3), PreconditionError);
}

TEST(SpanIntersection, MatchesEnumeration) {
  const Field f(3);
  Rng rng(5);
  for (int t = 0; t < 60; ++t) {
    const std::size_t rows = 1 + rng.below(3);
    const Matrix a = Matrix::random(f, rows, 1 + rng.below(3), rng);
    const Matrix b = Matrix::random(f, rows, 1 + rng.below(3), rng);
    const auto sa = brute_span(a), sb = brute_span(b);
    std::size_t common = 0;
    for (const auto& v : sa) common += sb.count(v);
    EXPECT_EQ(span_intersection_dim(a, b), log_q(common, 3));
  }
}

TEST(LeftNullspace, AnnihilatesAndHasFullDimension) {
  const Field f(11);
  Rng rng(8);
  for (int t = 0; t < 50; ++t) {
    const std::size_t m = 1 + rng.below(5), n = 1 + rng.below(4);
    Matrix a = Matrix::random(f, m, n, rng);
    if (n > 1 && t % 3 == 0) a = hcat(a.leading_columns(n - 1), a.leading_columns(1));
    const Matrix p = left_nullspace(a);
    EXPECT_EQ(p.rows(), m - rank(a));
    EXPECT_TRUE((p * a).is_zero());
    EXPECT_EQ(rank(p), p.rows());
  }
}

TEST(Inverse, LeftAndRight) {
  const Field f(257);
  Rng rng(2);
  for (int t = 0; t < 30; ++t) {
    const Matrix a = Matrix::random(f, 6, 3, rng);
    if (!full_column_rank(a)) continue;
    EXPECT_EQ(left_inverse(a) * a, Matrix::identity(f, 3));
    const Matrix b = transpose(a);
    EXPECT_EQ(b * right_inverse(b), Matrix::identity(f, 3));
  }
  EXPECT_THROW(left_inverse(Matrix::from_rows(f, {{1, 2}, {2, 4}})), PreconditionError);
}

TEST(SolvePartial, RecoversIntendedStream) {
  const Field f(5);
  const Matrix h1 = Matrix::from_rows(f, {{1}, {1}, {0}});
  const Matrix h2 = Matrix::from_rows(f, {{1, 0}, {0, 0}, {0, 1}});
  const Matrix x1 = Matrix::from_rows(f, {{2}});
  const Matrix x2 = Matrix::from_rows(f, {{3}, {4}});
  const Matrix z = h1 * x1 + h2 * x2;
  EXPECT_EQ(solve_partial(z, h1, h2), x2);
}

TEST(SolvePartial, RankDeficientInterference) {
  const Field f(7);
  // H1 has two identical columns; X1 is not identifiable but X2 is.
  const Matrix h1 = Matrix::from_rows(f, {{1, 1}, {2, 2}, {0, 0}, {0, 0}});
  const Matrix h2 = Matrix::from_rows(f, {{0, 0}, {0, 1}, {1, 0}, {0, 3}});
  const Matrix x2 = Matrix::from_rows(f, {{5}, {6}});
  const Matrix z = h1 * Matrix::from_rows(f, {{3}, {4}}) + h2 * x2;
  EXPECT_EQ(solve_partial(z, h1, h2), x2);
}

TEST(SolvePartial, ReportsFailureReasons) {
  const Field f(5);
  using R = SolveError::Reason;
  auto reason = [&](const Matrix& z, const Matrix& h1, const Matrix& h2) {
    try {
      solve_partial(z, h1, h2);
    } catch (const SolveError& e) {
      return e.reason();
    }
    ADD_FAILURE() << "expected SolveError";
    return R::DimensionMismatch;
  };
  const Matrix e1 = Matrix::from_rows(f, {{1}, {0}});
  EXPECT_EQ(reason(e1, Matrix::from_rows(f, {{1}, {0}, {0}}), e1), R::DimensionMismatch);
  EXPECT_EQ(reason(e1, e1, Matrix::from_rows(f, {{1, 2}, {0, 0}})), R::RankDeficient);
  EXPECT_EQ(reason(e1, Matrix::from_rows(f, {{1}, {1}}), Matrix::from_rows(f, {{2}, {2}})), R::SpanOverlap);
}

TEST(SolvePartial, InconsistentObservation) {
  const Field f(5);
  const Matrix h1 = Matrix::from_rows(f, {{1}, {0}, {0}});
  const Matrix h2 = Matrix::from_rows(f, {{0}, {1}, {0}});
  const Matrix z = Matrix::from_rows(f, {{0}, {0}, {1}});
  try {
    solve_partial(z, h1, h2);
    FAIL() << "expected SolveError";
  } catch (const SolveError& e) {
    EXPECT_EQ(e.reason(), SolveError::Reason::Inconsistent);
  }
}

// rank(H1) + cols(H2) <= rows once the spans meet trivially, so the row
// count condition never binds after the earlier checks.
TEST(SolvePartial, RowConditionFollowsFromTrivialOverlap) {
  const Field f(3);
  Rng rng(21);
  int decoded = 0;
  for (int t = 0; t < 400; ++t) {
    const std::size_t m = 1 + rng.below(4);
    const Matrix h1 = Matrix::random(f, m, 1 + rng.below(3), rng);
    const Matrix h2 = Matrix::random(f, m, 1 + rng.below(3), rng);
    if (!full_column_rank(h2) || span_intersection_dim(h1, h2) != 0) continue;
    EXPECT_GE(h1.rows() + h1.cols() - rank(h1), h1.cols() + h2.cols());
    EXPECT_NO_THROW(partial_decoder(h1, h2));
    ++decoded;
  }
  EXPECT_GT(decoded, 20);
}
