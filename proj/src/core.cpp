#include "dualmink/core.hpp"

namespace dualmink {

Mat orthogonal_complement(const Vec& a) {
  const auto n = a.size();
  const double norm = a.norm();
  if (!(norm > 0.0)) throw DomainError("orthogonal_complement: zero vector");
  // Householder reflection mapping a/|a| to +-e_0; its remaining columns span
  // the complement.
  Vec v = a / norm;
  const double s = v[0] >= 0 ? 1.0 : -1.0;
  v[0] += s;
  const double vn = v.squaredNorm();
  Mat h = Mat::Identity(n, n) - (2.0 / vn) * v * v.transpose();
  return h.rightCols(n - 1);
}

Mat haar_orthogonal(int n, Rng& rng) {
  Mat g(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) g(i, j) = rng.normal();
  Eigen::HouseholderQR<Mat> qr(g);
  Mat q = qr.householderQ() * Mat::Identity(n, n);
  const Mat r = qr.matrixQR();
  for (int j = 0; j < n; ++j)
    if (r(j, j) < 0) q.col(j) = -q.col(j);
  return q;
}

}  // namespace dualmink
