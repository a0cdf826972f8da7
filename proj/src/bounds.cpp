#include "dualmink/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>

#include "detail/gauss_kronrod.hpp"

namespace dualmink {

namespace {

constexpr double kIntegerGate = 1e-9;

void require_q(double q) {
  if (!(q > 0.0) || !std::isfinite(q)) {
    std::ostringstream os;
    os << "exponent q must be positive and finite, got " << q;
    throw DomainError(os.str());
  }
}

void require_n(int n) {
  if (n < 2) throw DomainError("dimension must be at least 2");
}

// a_1 ... a_k
double leading_product(const Vec& a, int k) {
  double p = 1.0;
  for (int i = 0; i < k; ++i) p *= a[i];
  return p;
}

}  // namespace

double q_star(double q, int n) {
  require_q(q);
  require_n(n);
  if (q <= 1.0) return std::numeric_limits<double>::infinity();
  if (q >= n) return q / (q - n + 1.0);
  return (n - 1.0) * q / (q - 1.0);
}

bool q_star_admissible(double q, double r, int n) {
  require_q(q);
  require_n(n);
  if (!(r > 0.0)) return false;
  const double m = n - 1.0;
  const double slack = 1e-14;
  return m / q + 1.0 / r >= 1.0 - slack && m / r + 1.0 / q >= 1.0 - slack;
}

bool q_star_is_supremum(double q, int n, double eps) {
  const double qs = q_star(q, n);
  if (!std::isfinite(qs)) {
    // every r works
    return q_star_admissible(q, 1e12, n);
  }
  return q_star_admissible(q, qs - eps, n) && !q_star_admissible(q, qs + eps, n) &&
         q_star_admissible(q, qs, n);
}

AdmissibleS admissible_exponent_s(double p, double q, int n) {
  const double qs = q_star(q, n);
  if (!(p < 0.0) || !(p > -qs)) {
    std::ostringstream os;
    os << "p = " << p << " outside (-q*, 0) = (" << -qs << ", 0) for q = " << q << ", n = " << n;
    throw HypothesisError(os.str());
  }
  AdmissibleS out;
  if (!std::isfinite(qs)) {
    out.any_s = true;
    out.s = std::numeric_limits<double>::infinity();
    return out;
  }
  out.s = 1.0 / (1.0 + p / qs);
  return out;
}

// ---- boxes -------------------------------------------------------------------------

BoxSpec::BoxSpec(Vec half_axes) : a(std::move(half_axes)) {
  if (a.size() < 2) throw DomainError("box needs at least two half-axes");
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    if (!(a[i] > 0.0) || !std::isfinite(a[i])) {
      std::ostringstream os;
      os << "box half-axis " << i << " must be positive, got " << a[i];
      throw DomainError(os.str());
    }
    if (i > 0 && a[i] < a[i - 1]) throw DomainError("box half-axes must be sorted ascending");
  }
}

BoxSpec BoxSpec::sorted(Vec half_axes) {
  std::sort(half_axes.begin(), half_axes.end());
  return BoxSpec(std::move(half_axes));
}

double box_radial(const BoxSpec& box, const Vec& u) {
  double r = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < u.size(); ++i) {
    const double c = std::abs(u[i]);
    if (c > 0.0) r = std::min(r, box.a[i] / c);
  }
  return r;
}

BoundsReport box_bounds(const BoxSpec& box, double q) {
  require_q(q);
  const int n = box.dim();
  const Vec& a = box.a;
  BoundsReport rep;
  const double qr = std::round(q);
  const bool integer_branch = std::abs(q - qr) < kIntegerGate && qr >= 1.0 && qr <= n - 1.0;

  // upper
  if (integer_branch) {
    const int k = static_cast<int>(qr);
    const double c = q * std::pow(2.0, n - q + 3.0) * alpha(n - k - 1) / n;
    rep.upper = c * std::pow(2.0, k - 1) * leading_product(a, k - 1) * a[k - 1] *
                (1.0 + std::log(a[k] / a[k - 1]));
    rep.branch = "integer";
    rep.constants.emplace_back("upper_constant", c);
  } else if (q < n - 1.0) {
    const int i = static_cast<int>(std::floor(q));
    const double c = q * std::pow(2.0, n - q + 1.0) * alpha(n - i - 1) / (n * (i + 1.0 - q) * (q - i));
    rep.upper = c * std::pow(2.0, i) * leading_product(a, i) * std::pow(a[i], q - i);
    rep.branch = "between(" + std::to_string(i) + "," + std::to_string(i + 1) + ")";
    rep.constants.emplace_back("upper_constant", c);
  } else if (q < n) {
    const double c = q * std::pow(2.0, n - q + 1.0) / (n * (q - n + 1.0));
    rep.upper = c * std::pow(2.0, n - 1) * leading_product(a, n - 1) * std::pow(a[n - 1], q - n + 1.0);
    rep.branch = "above(n-1)";
    rep.constants.emplace_back("upper_constant", c);
  } else {
    const double c = std::pow(2.0, n) * q * std::pow(static_cast<double>(n), (q - n) / 2.0) / (q - n + 1.0);
    rep.upper = c * leading_product(a, n - 1) * std::pow(a[n - 1], q - n + 1.0);
    rep.branch = "above(n)";
    rep.constants.emplace_back("upper_constant", c);
  }

  // lower: sub-box [-a_1,a_1] x ... x [-a_i,a_i] x [-a_{i+1},a_{i+1}]^{n-i}
  const double c = q <= n ? std::sqrt(static_cast<double>(n)) : 0.5;
  rep.constants.emplace_back("lower_radius_factor", c);
  double best = 0.0;
  for (int i = 0; i < n; ++i) {
    const double li = (q / n) * std::pow(c, q - n) * std::pow(2.0, i) * leading_product(a, i) *
                      std::pow(a[i], q - i);
    rep.constants.emplace_back("lower_candidate_" + std::to_string(i), li);
    best = std::max(best, li);
  }
  if (integer_branch) {
    const int k = static_cast<int>(qr);
    const double c2 = std::pow(static_cast<double>(k), (k - n) / 2.0 + 1.0) / n * alpha(n - k) *
                      std::pow(2.0, k - n);
    const double l2 = c2 * leading_product(a, k) * std::log(a[k] / a[k - 1]);
    rep.constants.emplace_back("lower_log_constant", c2);
    rep.constants.emplace_back("lower_log_candidate", l2);
    best = std::max(best, l2);
  }
  rep.lower = best;
  return rep;
}

BoundsReport check_box_bounds(const BoxSpec& box, double q, double observed) {
  BoundsReport rep = box_bounds(box, q);
  rep.observed = observed;
  rep.pass = std::isfinite(observed) && observed >= rep.lower && observed <= rep.upper;
  return rep;
}

double box_dual_volume_mc(const BoxSpec& box, double q, const SphericalGrid& grid) {
  require_q(q);
  const int n = box.dim();
  if (grid.dim() != n) throw DomainError("grid dimension does not match the box");
  // A = diag(a) / geometric mean, so det A = 1
  const double gm = std::exp(box.a.array().log().mean());
  const Vec scale = box.a / gm;
  const double an = alpha(n);
  auto density = [&](const Vec& z) {
    const double m = (z.array() / scale.array()).matrix().norm();
    return 0.5 / an * (1.0 + std::pow(m, -static_cast<double>(n)));
  };
  CompensatedSum sum;
  const auto& nodes = grid.nodes();
  for (std::size_t k = 0; k < nodes.size(); ++k) {
    const Vec& w = nodes[k];
    sum.add(std::pow(box_radial(box, w), q) / density(w));
    Vec z = (w.array() * scale.array()).matrix();
    z /= z.norm();
    sum.add(std::pow(box_radial(box, z), q) / density(z));
  }
  return sum.value() / (2.0 * static_cast<double>(nodes.size())) / n;
}

double box_dual_volume_reference(const BoxSpec& box, double q, double rtol) {
  require_q(q);
  const int n = box.dim();
  const double s = (q - n) / 2.0;
  double total = 0.0;
  for (int j = 0; j < n; ++j) {
    std::vector<double> others;
    for (int k = 0; k < n; ++k)
      if (k != j) others.push_back(box.a[k]);
    const double aj2 = box.a[j] * box.a[j];
    std::function<double(std::size_t, double)> nest = [&](std::size_t level, double r2) -> double {
      if (level == others.size()) return std::pow(r2, s);
      auto f = [&](double y) { return nest(level + 1, r2 + y * y); };
      return detail::integrate_1d(f, 0.0, others[level], rtol);
    };
    total += 2.0 * box.a[j] / n * std::pow(2.0, n - 1) * nest(0, aj2);
  }
  return total;
}

// ---- Santalo -------------------------------------------------------------------------

SantaloReport santalo_product(const SupportPolytope& k, const SphericalGrid& grid) {
  const int n = k.dim();
  SantaloReport rep;
  const StarBodySpec ball = StarBodySpec::ball(n);
  if (n <= 3) {
    rep.volume = k.facets().volume;
    rep.polar_volume = polar_polytope(k).facets().volume;
  } else {
    rep.volume = dual_mixed_volume(k, ball, n, grid);
    CompensatedSum polar;
    for (std::size_t i = 0; i < grid.size(); ++i)
      polar.add(grid.weights()[i] * std::pow(support_eval(k, grid.nodes()[i]), -static_cast<double>(n)));
    rep.polar_volume = polar.value() / n;
  }
  rep.forward = rep.volume * rep.polar_volume;
  rep.kappa_sq = kappa(n) * kappa(n);
  rep.kuperberg_floor = rep.kappa_sq / std::pow(4.0, n);
  const GeometryStats st = geometry_stats(k, grid);
  rep.centered = st.centroid.norm() <= 1e-3 * st.circumradius;
  rep.forward_checked = rep.centered;
  rep.forward_ok = rep.centered && rep.forward <= 1.02 * rep.kappa_sq;
  rep.floor_ok = rep.forward > rep.kuperberg_floor;
  return rep;
}

DualProduct bs_dual_product(const SupportPolytope& k, const StarBodySpec& q1, const StarBodySpec& q2,
                            double q, double r, const MeasureEngine& engine, const SphericalGrid* grid) {
  const int n = k.dim();
  const double qs = q_star(q, n);
  if (!(r > 0.0) || r > qs * (1.0 + 1e-12)) {
    std::ostringstream os;
    os << "r = " << r << " exceeds q* = " << qs << " for q = " << q << ", n = " << n;
    throw HypothesisError(os.str());
  }
  DualProduct out;
  out.vq = engine.volume(k, q1, q);
  if (engine.uses_grid()) {
    if (grid == nullptr) throw DomainError("grid engine needs the grid for the polar factor");
    CompensatedSum sum;
    for (std::size_t i = 0; i < grid->size(); ++i) {
      const Vec& u = grid->nodes()[i];
      double term = std::pow(support_eval(k, u), -r);
      if (!q2.is_ball() || q2.ball_radius() != 1.0) term *= std::pow(q2.radial(u), n - r);
      sum.add(grid->weights()[i] * term);
    }
    out.vr = sum.value() / n;
  } else {
    out.vr = engine.volume(polar_polytope(k), q2, r);
  }
  out.product = std::pow(out.vq, 1.0 / q) * std::pow(out.vr, 1.0 / r);
  return out;
}

InradiusReport inradius_diagnostic(const SupportPolytope& k, double q, double t,
                                   const SphericalGrid& grid) {
  require_q(q);
  if (!(t > 0.0)) throw DomainError("dual volume must be positive");
  InradiusReport rep;
  rep.inradius = geometry_stats(k, grid).inradius;
  rep.t = t;
  rep.ratio = rep.inradius / std::pow(t, 1.0 / q);
  rep.linear_ratio = rep.inradius / t;
  return rep;
}

}  // namespace dualmink
