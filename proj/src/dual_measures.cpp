#include "dualmink/dual_measures.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

#include "detail/gauss_kronrod.hpp"

namespace dualmink {

namespace {

using detail::integrate_1d;

// ---- degree-5 triangle rule (Radon, 7 points) ----

struct TriRule {
  std::array<std::array<double, 3>, 7> bary;
  std::array<double, 7> w;
};

const TriRule& radon7() {
  static const TriRule rule = [] {
    TriRule r{};
    const double s15 = std::sqrt(15.0);
    const double a = (6.0 - s15) / 21.0;
    const double b = (6.0 + s15) / 21.0;
    const double wa = (155.0 - s15) / 1200.0;
    const double wb = (155.0 + s15) / 1200.0;
    r.bary[0] = {1.0 / 3, 1.0 / 3, 1.0 / 3};
    r.w[0] = 9.0 / 40.0;
    r.bary[1] = {a, a, 1 - 2 * a};
    r.bary[2] = {a, 1 - 2 * a, a};
    r.bary[3] = {1 - 2 * a, a, a};
    r.bary[4] = {b, b, 1 - 2 * b};
    r.bary[5] = {b, 1 - 2 * b, b};
    r.bary[6] = {1 - 2 * b, b, b};
    for (int k = 1; k <= 3; ++k) r.w[static_cast<std::size_t>(k)] = wa;
    for (int k = 4; k <= 6; ++k) r.w[static_cast<std::size_t>(k)] = wb;
    return r;
  }();
  return rule;
}

template <class F>
double tri_rule(const F& f, const Vec& a, const Vec& b, const Vec& c) {
  const double area = 0.5 * Eigen::Vector3d(b - a).cross(Eigen::Vector3d(c - a)).norm();
  const TriRule& r = radon7();
  double s = 0.0;
  for (std::size_t k = 0; k < 7; ++k)
    s += r.w[k] * f(r.bary[k][0] * a + r.bary[k][1] * b + r.bary[k][2] * c);
  return s * area;
}

template <class F>
double adaptive_tri(const F& f, const Vec& a, const Vec& b, const Vec& c, double whole, double tol,
                    int depth) {
  const Vec ab = 0.5 * (a + b);
  const Vec bc = 0.5 * (b + c);
  const Vec ca = 0.5 * (c + a);
  const double i1 = tri_rule(f, a, ab, ca);
  const double i2 = tri_rule(f, ab, b, bc);
  const double i3 = tri_rule(f, ca, bc, c);
  const double i4 = tri_rule(f, ab, bc, ca);
  const double split = i1 + i2 + i3 + i4;
  if (std::abs(split - whole) <= tol || depth >= 10) return split;
  const double t = 0.25 * tol;
  return adaptive_tri(f, a, ab, ca, i1, t, depth + 1) + adaptive_tri(f, ab, b, bc, i2, t, depth + 1) +
         adaptive_tri(f, ca, bc, c, i3, t, depth + 1) + adaptive_tri(f, ab, bc, ca, i4, t, depth + 1);
}

// int_0^R (h^2 + r^2)^s r dr / R^2, evaluated without cancellation.
double radial_primitive_over_r2(double r2, double h2, double s) {
  const double z = r2 / h2;
  if (std::abs(s + 1.0) < 1e-14) return 0.5 * std::log1p(z) / r2;
  const double e = std::expm1((s + 1.0) * std::log1p(z));
  return std::pow(h2, s) * e / (2.0 * (s + 1.0) * z);
}

// int_F |x|^{q-3} dA over a planar polygon at distance h from the origin.
double polygon_power_integral(const std::vector<Vec>& poly, const Vec& normal, double h, double q,
                              double rtol) {
  const Vec foot = h * normal;
  const Mat e = orthogonal_complement(normal);
  const double h2 = h * h;
  const double s = 0.5 * (q - 3.0);
  const std::size_t m = poly.size();
  std::vector<Eigen::Vector2d> ys(m);
  double scale = 0.0;
  for (std::size_t k = 0; k < m; ++k) {
    const Vec d = poly[k] - foot;
    ys[k] = Eigen::Vector2d(e.col(0).dot(d), e.col(1).dot(d));
    scale = std::max(scale, ys[k].norm());
  }
  double total = 0.0;
  for (std::size_t k = 0; k < m; ++k) {
    const Eigen::Vector2d a = ys[k];
    const Eigen::Vector2d b = ys[(k + 1) % m];
    const double cross = a.x() * b.y() - a.y() * b.x();
    if (std::abs(cross) <= 1e-15 * (scale * scale + h2)) continue;
    const Eigen::Vector2d d = b - a;
    auto f = [&](double t) {
      const Eigen::Vector2d p = a + t * d;
      const double r2 = p.squaredNorm();
      return radial_primitive_over_r2(r2, h2, s);
    };
    total += cross * integrate_1d(f, 0.0, 1.0, rtol);
  }
  // orientation of the in-plane basis is arbitrary
  return std::abs(total);
}

FacetMeasure boundary_ball(const SupportPolytope& k, const StarBodySpec& qb, double q,
                           double rtol) {
  const int n = k.dim();
  const FacetComplex& fc = k.facets();
  FacetMeasure fm;
  fm.totals = Vec::Zero(static_cast<Eigen::Index>(k.size()));
  fm.grid_id = "boundary";
  const double rq = std::pow(qb.ball_radius(), n - q);
  const double amax = *std::max_element(fc.areas.begin(), fc.areas.end());
  for (std::size_t i = 0; i < k.size(); ++i) {
    const auto& poly = fc.facets[i];
    if (poly.empty() || fc.areas[i] <= 1e-12 * amax) continue;
    const double h = k.h(i);
    double integral = 0.0;
    if (n == 3) {
      integral = polygon_power_integral(poly, k.normal(i), h, q, rtol);
    } else {
      Vec t(2);
      t << -k.normal(i)[1], k.normal(i)[0];
      const double y0 = t.dot(poly[0]);
      const double y1 = t.dot(poly[1]);
      const double s = 0.5 * (q - 2.0);
      integral = std::abs(
          integrate_1d([&](double y) { return std::pow(h * h + y * y, s); }, y0, y1, rtol));
    }
    fm.totals[static_cast<Eigen::Index>(i)] = h * rq * integral / n;
  }
  return fm;
}

FacetMeasure boundary_general(const SupportPolytope& k, const StarBodySpec& qb, double q,
                              double rtol) {
  const int n = k.dim();
  const FacetComplex& fc = k.facets();
  FacetMeasure fm;
  fm.totals = Vec::Zero(static_cast<Eigen::Index>(k.size()));
  fm.grid_id = "boundary";
  auto g = [&](const Vec& x) { return std::pow(qb.radial_at(x), n - q); };
  const double amax = *std::max_element(fc.areas.begin(), fc.areas.end());
  for (std::size_t i = 0; i < k.size(); ++i) {
    const auto& poly = fc.facets[i];
    if (poly.empty() || fc.areas[i] <= 1e-12 * amax) continue;
    double integral = 0.0;
    if (n == 3) {
      Vec c = Vec::Zero(3);
      for (const auto& x : poly) c += x;
      c /= static_cast<double>(poly.size());
      double coarse = 0.0;
      std::vector<double> parts;
      for (std::size_t m = 0; m < poly.size(); ++m) {
        parts.push_back(tri_rule(g, c, poly[m], poly[(m + 1) % poly.size()]));
        coarse += parts.back();
      }
      const double tol = rtol * std::abs(coarse) / static_cast<double>(poly.size());
      for (std::size_t m = 0; m < poly.size(); ++m)
        integral += adaptive_tri(g, c, poly[m], poly[(m + 1) % poly.size()], parts[m], tol, 0);
    } else {
      const Vec a = poly[0];
      const Vec d = poly[1] - poly[0];
      integral = fc.areas[i] * integrate_1d([&](double t) { return g(a + t * d); }, 0.0, 1.0, rtol);
    }
    fm.totals[static_cast<Eigen::Index>(i)] = k.h(i) * integral / n;
  }
  return fm;
}

void check_q(double q) {
  if (q == 0.0 || !std::isfinite(q)) throw DomainError("dual measures: q must be finite and nonzero");
}

}  // namespace

// ---- measures -------------------------------------------------------------------------

MeasureSpec build_measure(const std::function<double(const Vec&)>& density,
                          const SphericalGrid& grid, const NormalSet& normals,
                          const std::string& description) {
  if (grid.dim() != normals.dim()) throw DomainError("build_measure: dimension mismatch");
  MeasureSpec mu;
  mu.atoms = Vec::Zero(static_cast<Eigen::Index>(normals.size()));
  mu.description = description;
  std::vector<CompensatedSum> bins(normals.size());
  const Mat& vm = normals.matrix();
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const double f = density(grid.node(k));
    if (!std::isfinite(f) || f < 0.0)
      throw DomainError("build_measure: density negative or non-finite at node " +
                        std::to_string(k));
    Eigen::Index best = 0;
    (vm.transpose() * grid.node(k)).maxCoeff(&best);
    bins[static_cast<std::size_t>(best)].add(grid.weight(k) * f);
  }
  for (std::size_t i = 0; i < bins.size(); ++i) mu.atoms[static_cast<Eigen::Index>(i)] = bins[i].value();
  mu.total_mass = compensated_total(mu.atoms);
  if (!(mu.total_mass > 0.0)) throw DomainError("build_measure: measure is trivial");
  return mu;
}

MeasureSpec orbit_averaged(const MeasureSpec& mu, const OrbitPartition& partition) {
  MeasureSpec out = mu;
  for (const auto& orb : partition.orbits) {
    CompensatedSum s;
    for (int i : orb) s.add(mu.atoms[i]);
    const double avg = s.value() / static_cast<double>(orb.size());
    for (int i : orb) out.atoms[i] = avg;
  }
  out.total_mass = compensated_total(out.atoms);
  return out;
}

double dual_mixed_volume(const SupportPolytope& k, const StarBodySpec& qb, double q,
                         const SphericalGrid& grid) {
  check_q(q);
  const int n = k.dim();
  return integrate(grid, [&](const Vec& u) {
           return std::pow(radial_eval(k, u).rho, q) * std::pow(qb.radial(u), n - q);
         }) /
         n;
}

FacetMeasure dual_curvature_measure(const SupportPolytope& k, const StarBodySpec& qb, double q,
                                    const SphericalGrid& grid) {
  check_q(q);
  const int n = k.dim();
  std::vector<CompensatedSum> bins(k.size());
  for (std::size_t j = 0; j < grid.size(); ++j) {
    const Vec& u = grid.node(j);
    const RadialHit hit = radial_eval(k, u);
    const double v = grid.weight(j) * std::pow(hit.rho, q) * std::pow(qb.radial(u), n - q) / n;
    if (!std::isfinite(v))
      throw DomainError("dual_curvature_measure: non-finite integrand at node " + std::to_string(j));
    bins[static_cast<std::size_t>(hit.facet)].add(v);
  }
  FacetMeasure fm;
  fm.totals.resize(static_cast<Eigen::Index>(k.size()));
  for (std::size_t i = 0; i < k.size(); ++i) fm.totals[static_cast<Eigen::Index>(i)] = bins[i].value();
  fm.grid_id = grid.label();
  return fm;
}

FacetMeasure lp_dual_curvature_measure(const SupportPolytope& k, const StarBodySpec& qb, double p,
                                       double q, const SphericalGrid& grid) {
  FacetMeasure fm = dual_curvature_measure(k, qb, q, grid);
  for (std::size_t i = 0; i < k.size(); ++i) fm.totals[static_cast<Eigen::Index>(i)] *= std::pow(k.h(i), -p);
  return fm;
}

FacetMeasure dual_curvature_via_boundary(const SupportPolytope& k, const StarBodySpec& qb, double q,
                                         double rtol) {
  check_q(q);
  if (k.dim() != 2 && k.dim() != 3)
    throw DomainError("dual_curvature_via_boundary: only n = 2 and n = 3 are supported");
  if (qb.dim() != k.dim()) throw DomainError("dual_curvature_via_boundary: dimension mismatch");
  return qb.is_ball() ? boundary_ball(k, qb, q, rtol) : boundary_general(k, qb, q, rtol);
}

MeasureEngine MeasureEngine::boundary(double rtol) {
  MeasureEngine e;
  e.rtol_ = rtol;
  return e;
}

MeasureEngine MeasureEngine::on_grid(const SphericalGrid& grid) {
  MeasureEngine e;
  e.grid_ = &grid;
  return e;
}

MeasureEngine MeasureEngine::automatic(int n, const SphericalGrid& grid) {
  return n <= 3 ? boundary() : on_grid(grid);
}

FacetMeasure MeasureEngine::curvature(const SupportPolytope& k, const StarBodySpec& qb,
                                      double q) const {
  if (grid_) return dual_curvature_measure(k, qb, q, *grid_);
  return dual_curvature_via_boundary(k, qb, q, rtol_);
}

std::string MeasureEngine::label() const {
  if (grid_) return "grid:" + grid_->label();
  std::ostringstream s;
  s << "boundary(rtol=" << rtol_ << ")";
  return s.str();
}

// ---- entropy --------------------------------------------------------------------------

EntropyEval entropy_eval(const SupportPolytope& k, const MeasureSpec& mu, const StarBodySpec& qb,
                         double p, double q, const MeasureEngine& engine) {
  if (!(p < 0.0)) throw DomainError("entropy: p must be negative");
  if (!(q > 0.0)) throw DomainError("entropy: q must be positive");
  if (mu.atoms.size() != static_cast<Eigen::Index>(k.size()))
    throw DomainError("entropy: measure atoms do not match the normal count");
  EntropyEval ev;
  ev.curvature = engine.curvature(k, qb, q);
  ev.volume = ev.curvature.total();
  const Vec& h = k.support_numbers();
  const auto nf = h.size();
  Vec hp(nf);
  CompensatedSum mom;
  for (Eigen::Index i = 0; i < nf; ++i) {
    hp[i] = std::pow(h[i], p) * mu.atoms[i];
    mom.add(hp[i]);
  }
  ev.moment = mom.value();
  if (!(ev.moment > 0.0) || !(ev.volume > 0.0) || !std::isfinite(ev.moment) ||
      !std::isfinite(ev.volume))
    throw DomainError("entropy: non-finite or non-positive log argument");
  ev.value = std::log(ev.moment) / p - std::log(ev.volume) / q;
  ev.log_gradient.resize(nf);
  ev.gradient.resize(nf);
  for (Eigen::Index i = 0; i < nf; ++i) {
    ev.log_gradient[i] = hp[i] / ev.moment - ev.curvature.totals[i] / ev.volume;
    ev.gradient[i] = ev.log_gradient[i] / h[i];
  }
  return ev;
}

double entropy_value(const SupportPolytope& k, const MeasureSpec& mu, const StarBodySpec& qb,
                     double p, double q, const MeasureEngine& engine) {
  return entropy_eval(k, mu, qb, p, q, engine).value;
}

Vec entropy_gradient(const SupportPolytope& k, const MeasureSpec& mu, const StarBodySpec& qb,
                     double p, double q, const MeasureEngine& engine) {
  return entropy_eval(k, mu, qb, p, q, engine).gradient;
}

Vec collapse_to_orbits(const Vec& full, const OrbitPartition& partition) {
  Vec out = Vec::Zero(static_cast<Eigen::Index>(partition.orbits.size()));
  for (std::size_t o = 0; o < partition.orbits.size(); ++o) {
    CompensatedSum s;
    for (int i : partition.orbits[o]) s.add(full[i]);
    out[static_cast<Eigen::Index>(o)] = s.value();
  }
  return out;
}

Vec expand_from_orbits(const Vec& reduced, const OrbitPartition& partition) {
  Vec out(static_cast<Eigen::Index>(partition.orbit_of.size()));
  for (std::size_t i = 0; i < partition.orbit_of.size(); ++i)
    out[static_cast<Eigen::Index>(i)] = reduced[partition.orbit_of[i]];
  return out;
}

// ---- affine invariance ------------------------------------------------------------------

AffineCheck affine_invariance_check(const SupportPolytope& k, const StarBodySpec& qb, double q,
                                    const Mat& phi, const std::function<double(const Vec&)>& g,
                                    const SphericalGrid& grid_a, const SphericalGrid& grid_b) {
  if (phi.rows() != k.dim() || phi.cols() != k.dim())
    throw DomainError("affine_invariance_check: matrix of wrong size");
  if (std::abs(phi.determinant() - 1.0) > 1e-10)
    throw DomainError("affine_invariance_check: det(phi) must be 1");
  Eigen::JacobiSVD<Mat> svd(phi);
  const Vec sv = svd.singularValues();
  if (sv[0] / sv[sv.size() - 1] > 1e6)
    throw DomainError("affine_invariance_check: phi is ill-conditioned");
  const SupportPolytope pk = linear_image(k, phi);
  const StarBodySpec pq = StarBodySpec::linear_image(qb, phi);
  const FacetMeasure left = dual_curvature_measure(pk, pq, q, grid_a);
  const FacetMeasure right = dual_curvature_measure(k, qb, q, grid_b);
  CompensatedSum l;
  CompensatedSum r;
  for (std::size_t i = 0; i < k.size(); ++i) {
    const double gv = g(pk.normal(i));  // normals of phi K are phi^{-T} v_i normalized
    l.add(gv * left.totals[static_cast<Eigen::Index>(i)]);
    r.add(gv * right.totals[static_cast<Eigen::Index>(i)]);
  }
  AffineCheck out;
  out.lhs = l.value();
  out.rhs = r.value();
  out.gap = std::abs(out.lhs - out.rhs) / std::max(std::abs(out.lhs), std::abs(out.rhs));
  return out;
}

}  // namespace dualmink
