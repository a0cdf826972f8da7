#include "dualmink/lp.hpp"

#include <limits>
#include <vector>

namespace dualmink {

namespace {

struct Tableau {
  const Mat& a;  // m x total, artificials appended by the caller
  const Vec& b;
  std::vector<int> basis;
  Eigen::PartialPivLU<Mat> lu;
  Vec xb;

  void refactor() {
    const auto m = a.rows();
    Mat bm(m, m);
    for (Eigen::Index k = 0; k < m; ++k) bm.col(k) = a.col(basis[static_cast<std::size_t>(k)]);
    lu.compute(bm);
    xb = lu.solve(b);
  }
};

enum class Outcome { optimal, unbounded, stalled };

// Bland's rule: smallest eligible entering index, smallest basis index on
// ratio ties.
Outcome run_simplex(Tableau& t, const Vec& cost, const std::vector<bool>& allowed, double scale,
                    int& iterations) {
  const auto m = t.a.rows();
  const auto total = t.a.cols();
  const double dtol = 1e-11 * scale;
  const int max_iter = 50 * static_cast<int>(total + m) + 1000;
  std::vector<bool> in_basis(static_cast<std::size_t>(total), false);
  for (int j : t.basis) in_basis[static_cast<std::size_t>(j)] = true;
  for (int it = 0; it < max_iter; ++it) {
    t.refactor();
    Vec cb(m);
    for (Eigen::Index k = 0; k < m; ++k) cb[k] = cost[t.basis[static_cast<std::size_t>(k)]];
    const Vec pi = t.lu.transpose().solve(cb);
    int enter = -1;
    for (Eigen::Index j = 0; j < total; ++j) {
      if (in_basis[static_cast<std::size_t>(j)] || !allowed[static_cast<std::size_t>(j)]) continue;
      const double d = cost[j] - pi.dot(t.a.col(j));
      if (d < -dtol) {
        enter = static_cast<int>(j);
        break;
      }
    }
    if (enter < 0) return Outcome::optimal;
    const Vec dir = t.lu.solve(t.a.col(enter));
    int leave = -1;
    double best = std::numeric_limits<double>::infinity();
    for (Eigen::Index k = 0; k < m; ++k) {
      if (dir[k] <= 1e-12) continue;
      const double ratio = std::max(0.0, t.xb[k]) / dir[k];
      const int bk = t.basis[static_cast<std::size_t>(k)];
      if (ratio < best - 1e-14 ||
          (ratio <= best + 1e-14 && leave >= 0 && bk < t.basis[static_cast<std::size_t>(leave)])) {
        best = ratio;
        leave = static_cast<int>(k);
      }
    }
    if (leave < 0) return Outcome::unbounded;
    in_basis[static_cast<std::size_t>(t.basis[static_cast<std::size_t>(leave)])] = false;
    in_basis[static_cast<std::size_t>(enter)] = true;
    t.basis[static_cast<std::size_t>(leave)] = enter;
    ++iterations;
  }
  return Outcome::stalled;
}

}  // namespace

LpResult solve_standard_lp(const Mat& a, const Vec& b, const Vec& c) {
  const auto m = a.rows();
  const auto nvar = a.cols();
  if (b.size() != m || c.size() != nvar) throw DomainError("solve_standard_lp: size mismatch");
  // Phase I on [A | D] with D = diag(sign b), artificial basis.
  Mat full(m, nvar + m);
  full.leftCols(nvar) = a;
  full.rightCols(m).setZero();
  for (Eigen::Index k = 0; k < m; ++k) full(k, nvar + k) = b[k] >= 0 ? 1.0 : -1.0;
  Tableau t{full, b, {}, {}, {}};
  for (Eigen::Index k = 0; k < m; ++k) t.basis.push_back(static_cast<int>(nvar + k));
  Vec phase1 = Vec::Zero(nvar + m);
  phase1.tail(m).setOnes();
  std::vector<bool> allowed(static_cast<std::size_t>(nvar + m), true);
  LpResult res;
  const double bscale = std::max(1.0, b.cwiseAbs().maxCoeff());
  if (run_simplex(t, phase1, allowed, 1.0, res.iterations) == Outcome::stalled)
    throw NumericalError("solve_standard_lp: phase I did not terminate");
  t.refactor();
  double infeas = 0.0;
  for (Eigen::Index k = 0; k < m; ++k)
    if (t.basis[static_cast<std::size_t>(k)] >= nvar) infeas += std::abs(t.xb[k]);
  if (infeas > 1e-9 * bscale) {
    res.status = LpResult::Status::infeasible;
    return res;
  }
  // Drive zero-level artificials out of the basis where possible.
  for (Eigen::Index k = 0; k < m; ++k) {
    if (t.basis[static_cast<std::size_t>(k)] < nvar) continue;
    Mat bm(m, m);
    for (Eigen::Index r = 0; r < m; ++r) bm.col(r) = full.col(t.basis[static_cast<std::size_t>(r)]);
    Eigen::PartialPivLU<Mat> lu(bm);
    for (Eigen::Index j = 0; j < nvar; ++j) {
      bool used = false;
      for (int bj : t.basis) used = used || bj == j;
      if (used) continue;
      const Vec dir = lu.solve(full.col(j));
      if (std::abs(dir[k]) > 1e-9) {
        t.basis[static_cast<std::size_t>(k)] = static_cast<int>(j);
        break;
      }
    }
  }
  for (Eigen::Index j = nvar; j < nvar + m; ++j) allowed[static_cast<std::size_t>(j)] = false;
  Vec cost = Vec::Zero(nvar + m);
  cost.head(nvar) = c;
  const double cscale = std::max(1.0, c.cwiseAbs().maxCoeff());
  const Outcome out = run_simplex(t, cost, allowed, cscale, res.iterations);
  if (out == Outcome::stalled) throw NumericalError("solve_standard_lp: phase II did not terminate");
  if (out == Outcome::unbounded) {
    res.status = LpResult::Status::unbounded;
    return res;
  }
  t.refactor();
  res.status = LpResult::Status::optimal;
  res.y = Vec::Zero(nvar);
  for (Eigen::Index k = 0; k < m; ++k) {
    const int j = t.basis[static_cast<std::size_t>(k)];
    if (j < nvar) res.y[j] = std::max(0.0, t.xb[k]);
  }
  Vec cb(m);
  for (Eigen::Index k = 0; k < m; ++k) cb[k] = cost[t.basis[static_cast<std::size_t>(k)]];
  res.dual = t.lu.transpose().solve(cb);
  res.value = res.dual.dot(b);
  return res;
}

}  // namespace dualmink
