#pragma once

#include "dualmink/core.hpp"

namespace dualmink {

struct LpResult {
  enum class Status { optimal, infeasible, unbounded };
  Status status = Status::infeasible;
  double value = 0.0;
  Vec y;     // primal solution of the standard form
  Vec dual;  // multipliers pi with A^T pi <= c at optimality
  int iterations = 0;
};

/// min c^T y  s.t.  A y = b, y >= 0, for A with few rows (m <= ~10) and many
/// columns. Two-phase revised simplex with Bland's rule, so degenerate
/// (highly symmetric) inputs terminate.
LpResult solve_standard_lp(const Mat& a, const Vec& b, const Vec& c);

}  // namespace dualmink
