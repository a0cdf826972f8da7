#include <gtest/gtest.h>

#include "dualmink/lp.hpp"

using namespace dualmink;

TEST(Lp, SmallOptimum) {
  // min -x1 - x2 s.t. x1 + 2 x2 + s1 = 4, 3 x1 + x2 + s2 = 6: optimum at (8/5, 6/5).
  Mat a(2, 4);
  a << 1, 2, 1, 0, 3, 1, 0, 1;
  Vec b(2);
  b << 4, 6;
  Vec c(4);
  c << -1, -1, 0, 0;
  const LpResult r = solve_standard_lp(a, b, c);
  ASSERT_EQ(r.status, LpResult::Status::optimal);
  EXPECT_NEAR(r.value, -14.0 / 5.0, 1e-12);
  EXPECT_NEAR(r.y[0], 1.6, 1e-12);
  EXPECT_NEAR(r.y[1], 1.2, 1e-12);
  // dual feasibility and strong duality
  EXPECT_LE((a.transpose() * r.dual - c).maxCoeff(), 1e-10);
  EXPECT_NEAR(b.dot(r.dual), r.value, 1e-10);
}

TEST(Lp, InfeasibleAndUnbounded) {
  Mat a(1, 2);
  a << 1, 1;
  Vec b(1);
  b << -1;
  EXPECT_EQ(solve_standard_lp(a, b, Vec::Zero(2)).status, LpResult::Status::infeasible);
  Mat a2(1, 2);
  a2 << 1, -1;
  Vec b2(1);
  b2 << 0;
  Vec c2(2);
  c2 << -1, 0;
  EXPECT_EQ(solve_standard_lp(a2, b2, c2).status, LpResult::Status::unbounded);
}

TEST(Lp, DegenerateSymmetricInputTerminates) {
  // many identical columns
  Mat a(2, 30);
  for (int j = 0; j < 30; ++j) a.col(j) << 1.0, (j % 2 == 0 ? 1.0 : -1.0);
  Vec b(2);
  b << 1.0, 0.0;
  const LpResult r = solve_standard_lp(a, b, Vec::Ones(30));
  ASSERT_EQ(r.status, LpResult::Status::optimal);
  EXPECT_NEAR(r.value, 1.0, 1e-12);
}
