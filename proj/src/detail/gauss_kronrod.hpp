#pragma once

#include <algorithm>
#include <array>
#include <cmath>

namespace dualmink::detail {

// ---- 1D adaptive Gauss-Kronrod (7/15) ----

constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.0};
constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

template <class F>
void gk15(const F& f, double a, double b, double& kron, double& err) {
  const double c = 0.5 * (a + b);
  const double hw = 0.5 * (b - a);
  const double fc = f(c);
  double rk = fc * kWgk[7];
  double rg = fc * kWg[3];
  for (int j = 0; j < 7; ++j) {
    const double dx = hw * kXgk[static_cast<std::size_t>(j)];
    const double s = f(c - dx) + f(c + dx);
    rk += kWgk[static_cast<std::size_t>(j)] * s;
    if (j % 2 == 1) rg += kWg[static_cast<std::size_t>(j / 2)] * s;
  }
  kron = rk * hw;
  err = std::abs((rk - rg) * hw);
}

template <class F>
double adaptive_gk(const F& f, double a, double b, double tol, int depth = 0) {
  double k = 0.0;
  double e = 0.0;
  gk15(f, a, b, k, e);
  if (e <= tol || depth >= 40 || std::abs(b - a) < 1e-15 * (std::abs(a) + std::abs(b))) return k;
  const double m = 0.5 * (a + b);
  return adaptive_gk(f, a, m, 0.5 * tol, depth + 1) + adaptive_gk(f, m, b, 0.5 * tol, depth + 1);
}

template <class F>
double integrate_1d(const F& f, double a, double b, double rtol) {
  double k = 0.0;
  double e = 0.0;
  gk15(f, a, b, k, e);
  const double tol = std::max(rtol * std::abs(k), 1e-300);
  if (e <= tol) return k;
  const double m = 0.5 * (a + b);
  return adaptive_gk(f, a, m, 0.5 * tol, 1) + adaptive_gk(f, m, b, 0.5 * tol, 1);
}

}  // namespace dualmink::detail
