#include "dualmink/constructions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace dualmink {

namespace {

void require_admissible_group(const OrthogonalGroup& g, int n) {
  if (g.dim() != n) throw DomainError("group dimension does not match the body");
  const GroupCertificate cert = certify(g);
  if (cert.contains_negation) throw HypothesisError("group contains -I");
  if (cert.has_nonzero_fixed_point) throw HypothesisError("group has a nonzero fixed point");
}

// Constraints of C rotated by every g h, duplicates merged (smallest support kept).
SupportPolytope pooled(const OrthogonalGroup& g, const SupportPolytope& c, const Mat& rot) {
  PointHash index(c.dim(), 1e-9);
  std::vector<Vec> normals;
  std::vector<double> support;
  for (const auto& e : g.elements()) {
    const Mat m = e * rot;
    for (std::size_t i = 0; i < c.size(); ++i) {
      Vec v = m * c.normal(i);
      v /= v.norm();
      const int j = index.find(v);
      if (j >= 0) {
        support[static_cast<std::size_t>(j)] = std::min(support[static_cast<std::size_t>(j)], c.h(i));
        continue;
      }
      index.insert(v);
      normals.push_back(std::move(v));
      support.push_back(c.h(i));
    }
  }
  return {std::move(normals), Eigen::Map<Vec>(support.data(), static_cast<Eigen::Index>(support.size()))};
}

std::vector<Vec> orbit_of(const OrthogonalGroup& g, const Vec& y) {
  std::vector<Vec> out;
  for (const auto& e : g.elements()) out.push_back(e * y);
  return out;
}

}  // namespace

AsymmetryCertificate certify_asymmetry(const SupportPolytope& k, const SphericalGrid& grid,
                                       const OrthogonalGroup* g, const std::vector<Vec>& extra_probes) {
  AsymmetryCertificate cert;
  cert.witness = Vec::Zero(k.dim());
  auto probe = [&](const Vec& u) {
    const double gap = std::abs(radial_eval(k, u).rho - radial_eval(k, -u).rho);
    if (gap > cert.max_gap) {
      cert.max_gap = gap;
      cert.witness = u;
    }
  };
  for (const auto& u : grid.nodes()) probe(u);
  for (const auto& u : extra_probes) probe(u / u.norm());
  if (g != nullptr) cert.invariance_deviation = is_invariant(k, *g, grid, 1e-9).max_deviation;
  cert.non_symmetric = cert.max_gap > 10.0 * cert.invariance_deviation + 1e-6;
  return cert;
}

double generic_margin(const OrthogonalGroup& g, const Vec& y) {
  double m = std::numeric_limits<double>::infinity();
  for (const auto& e : g.elements()) m = std::min(m, (-y - e * y).norm());
  return m;
}

Mat random_generic_rotation(const OrthogonalGroup& g, const Vec& z, std::uint64_t seed, int max_tries,
                            double margin) {
  if (z.size() != g.dim()) throw DomainError("direction dimension does not match the group");
  if (std::abs(z.norm() - 1.0) > 1e-10) throw DomainError("direction must be a unit vector");
  Rng rng(seed);
  for (int t = 0; t < max_tries; ++t) {
    Mat h = haar_orthogonal(g.dim(), rng);
    if (generic_margin(g, h * z) >= margin) return h;
  }
  std::ostringstream os;
  os << "no generic rotation found in " << max_tries << " tries (margin " << margin << ")";
  throw HypothesisError(os.str());
}

ConstructionResult orbit_intersection_body(const OrthogonalGroup& g, const SupportPolytope& c,
                                           const SphericalGrid& probe, std::uint64_t seed,
                                           const Mat* rotation) {
  const int n = c.dim();
  require_admissible_group(g, n);
  std::vector<double> hs(c.size());
  std::size_t best = 0;
  for (std::size_t i = 0; i < c.size(); ++i) {
    hs[i] = support_eval(c, c.normal(i));
    if (hs[i] <= 0.0) throw HypothesisError("base body must contain the origin in its interior");
    if (hs[i] < hs[best]) best = i;
  }
  const Vec u1 = c.normal(best);
  const double r = hs[best];
  bool unique = true;
  for (std::size_t i = 0; i < c.size(); ++i)
    if (i != best && (c.normal(i) - u1).norm() > 1e-9 && hs[i] < r * (1.0 + 1e-4)) unique = false;

  const Mat h = rotation != nullptr ? *rotation : random_generic_rotation(g, u1, seed);
  SupportPolytope k = pooled(g, c, h);
  ConstructionResult out{k, h, u1, r, unique, {}, 0.0, 0.0, false};
  std::vector<Vec> extra = orbit_of(g, h * u1);
  for (const auto& y : orbit_of(g, h * u1)) extra.push_back(-y);
  out.certificate = certify_asymmetry(k, probe, &g, extra);
  out.rho_at_hz = radial_eval(k, h * u1).rho;
  out.rho_at_minus_hz = radial_eval(k, -(h * u1)).rho;
  out.boundary_check = std::abs(out.rho_at_hz - r) <= 1e-9 * r && out.rho_at_minus_hz > r;
  return out;
}

ConstructionResult orbit_intersection_body_circum(const OrthogonalGroup& g, const SupportPolytope& c,
                                                  const SphericalGrid& probe, std::uint64_t seed,
                                                  const Mat* rotation) {
  const int n = c.dim();
  if (n > 3) throw DomainError("maximal-radius construction needs n <= 3");
  require_admissible_group(g, n);
  for (std::size_t i = 0; i < c.size(); ++i)
    if (support_eval(c, c.normal(i)) <= 0.0)
      throw HypothesisError("base body must contain the origin in its interior");
  const auto& verts = c.facets().vertices;
  std::size_t best = 0;
  for (std::size_t i = 1; i < verts.size(); ++i)
    if (verts[i].norm() > verts[best].norm()) best = i;
  const double big_r = verts[best].norm();
  const Vec u1 = verts[best] / big_r;
  bool unique = true;
  for (std::size_t i = 0; i < verts.size(); ++i)
    if (i != best && (verts[i] - verts[best]).norm() > 1e-9 * big_r && verts[i].norm() > big_r * (1.0 - 1e-4))
      unique = false;

  const Mat h = rotation != nullptr ? *rotation : random_generic_rotation(g, u1, seed);
  SupportPolytope k = polar_polytope(pooled(g, polar_polytope(c), h));
  ConstructionResult out{k, h, u1, big_r, unique, {}, 0.0, 0.0, false};
  std::vector<Vec> extra = orbit_of(g, h * u1);
  for (const auto& y : orbit_of(g, h * u1)) extra.push_back(-y);
  out.certificate = certify_asymmetry(k, probe, &g, extra);
  out.rho_at_hz = radial_eval(k, h * u1).rho;
  out.rho_at_minus_hz = radial_eval(k, -(h * u1)).rho;
  out.boundary_check = std::abs(out.rho_at_hz - big_r) <= 1e-9 * big_r && out.rho_at_minus_hz < big_r;
  return out;
}

// ---- Dirichlet-Voronoi cells -------------------------------------------------------

bool DirichletCone::contains(const Vec& x, double tol) const {
  const double scale = std::max(1.0, x.norm());
  return std::all_of(constraints.begin(), constraints.end(),
                     [&](const Vec& a) { return a.dot(x) <= tol * scale; });
}

bool DirichletCone::contains_interior(const Vec& x, double margin) const {
  const double scale = std::max(1.0, x.norm());
  return std::all_of(constraints.begin(), constraints.end(),
                     [&](const Vec& a) { return a.dot(x) < -margin * scale; });
}

DirichletCone dirichlet_voronoi_cone(const OrthogonalGroup& g, const Vec& z, double margin) {
  if (z.size() != g.dim()) throw DomainError("direction dimension does not match the group");
  DirichletCone d;
  d.seed_direction = z / z.norm();
  PointHash index(g.dim(), 1e-12);
  for (std::size_t e = 1; e < g.order(); ++e) {
    const Vec gz = g.element(e) * d.seed_direction;
    if ((gz - d.seed_direction).norm() < margin || (gz + d.seed_direction).norm() < margin) {
      std::ostringstream os;
      os << "seed direction is not generic for group element " << e;
      throw HypothesisError(os.str());
    }
    Vec a = gz - d.seed_direction;
    if (index.find(a) >= 0) continue;
    index.insert(a);
    d.constraints.push_back(std::move(a));
  }
  return d;
}

CoverageReport voronoi_coverage(const OrthogonalGroup& g, const DirichletCone& d, int samples,
                                std::uint64_t seed) {
  Rng rng(seed);
  CoverageReport rep;
  rep.samples = samples;
  const int n = g.dim();
  for (int s = 0; s < samples; ++s) {
    Vec x(n);
    for (int i = 0; i < n; ++i) x[i] = rng.normal();
    bool covered = false;
    int interiors = 0;
    for (const auto& e : g.elements()) {
      const Vec y = e.transpose() * x;
      covered = covered || d.contains(y);
      if (d.contains_interior(y)) ++interiors;
    }
    if (covered) ++rep.covered;
    if (interiors > 1) ++rep.overlaps;
  }
  return rep;
}

}  // namespace dualmink
