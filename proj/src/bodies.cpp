#include "dualmink/bodies.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "dualmink/lp.hpp"

namespace dualmink {

// ---- NormalSet -----------------------------------------------------------------

NormalSet::NormalSet(std::vector<Vec> normals) : dim_(0), normals_(std::move(normals)) {
  if (normals_.empty()) throw DomainError("NormalSet: no normals");
  dim_ = static_cast<int>(normals_.front().size());
  if (dim_ < 2) throw DomainError("NormalSet: dimension must be >= 2");
  if (static_cast<int>(normals_.size()) < dim_ + 1)
    throw DomainError("NormalSet: need at least n+1 normals");
  matrix_.resize(dim_, static_cast<Eigen::Index>(normals_.size()));
  for (std::size_t i = 0; i < normals_.size(); ++i) {
    if (normals_[i].size() != dim_) throw DomainError("NormalSet: normals of mixed dimension");
    if (std::abs(normals_[i].norm() - 1.0) > 1e-10)
      throw DomainError("NormalSet: normal " + std::to_string(i) + " is not a unit vector");
    matrix_.col(static_cast<Eigen::Index>(i)) = normals_[i];
  }
  // Positive spanning <=> every +-e_k is a nonnegative combination.
  const Vec zero_cost = Vec::Zero(matrix_.cols());
  for (int k = 0; k < dim_; ++k) {
    for (double s : {1.0, -1.0}) {
      Vec e = Vec::Zero(dim_);
      e[k] = s;
      if (solve_standard_lp(matrix_, e, zero_cost).status == LpResult::Status::infeasible)
        throw DomainError("NormalSet: normals do not positively span R^" + std::to_string(dim_) +
                          " (the polytope would be unbounded)");
    }
  }
}

// ---- facet complex --------------------------------------------------------------

namespace {

constexpr int kNoLabel = -1;

Vec solve_planes(const NormalSet& ns, const Vec& h, const std::vector<int>& ids, const Vec& fallback) {
  const auto n = static_cast<Eigen::Index>(ids.size());
  Mat a(n, n);
  Vec b(n);
  for (Eigen::Index r = 0; r < n; ++r) {
    a.row(r) = ns[static_cast<std::size_t>(ids[static_cast<std::size_t>(r)])].transpose();
    b[r] = h[ids[static_cast<std::size_t>(r)]];
  }
  Eigen::FullPivLU<Mat> lu(a);
  if (lu.rank() < n || std::abs(lu.determinant()) < 1e-9) return fallback;
  Vec x = lu.solve(b);
  if ((x - fallback).norm() > 1e-6 * std::max(1.0, fallback.norm())) return fallback;
  return x;
}

struct Line2 {
  Eigen::Vector2d a;
  double b;
};

// Crossing of the new line with the edge from p to q carried by edge_label;
// recomputed from the two lines when both are genuine constraints.
Eigen::Vector2d crossing(const Eigen::Vector2d& p, const Eigen::Vector2d& q, double dp, double dq,
                         const Line2& line, int edge_label, const std::vector<Line2>& lines) {
  const Eigen::Vector2d approx = p + dp / (dp - dq) * (q - p);
  if (edge_label < 0) return approx;
  const Line2& other = lines[static_cast<std::size_t>(edge_label)];
  Eigen::Matrix2d m;
  m << line.a.transpose(), other.a.transpose();
  const double det = m.determinant();
  if (std::abs(det) < 1e-9 * line.a.norm() * other.a.norm()) return approx;
  return m.inverse() * Eigen::Vector2d(line.b, other.b);
}

// Clip the convex polygon (ys, labels) by a.y <= b; labels[k] names the line
// carrying the edge from ys[k] to ys[k+1].
void clip_polygon(std::vector<Eigen::Vector2d>& ys, std::vector<int>& labels,
                  const std::vector<Line2>& lines, int label, double eps) {
  const Eigen::Vector2d& a = lines[static_cast<std::size_t>(label)].a;
  const double b = lines[static_cast<std::size_t>(label)].b;
  const std::size_t m = ys.size();
  if (m == 0) return;
  std::vector<double> d(m);
  bool any_out = false;
  bool any_in = false;
  for (std::size_t k = 0; k < m; ++k) {
    d[k] = a.dot(ys[k]) - b;
    (d[k] > eps ? any_out : any_in) = true;
  }
  if (!any_out) return;
  if (!any_in) {
    ys.clear();
    labels.clear();
    return;
  }
  std::vector<Eigen::Vector2d> ny;
  std::vector<int> nl;
  for (std::size_t k = 0; k < m; ++k) {
    const std::size_t k1 = (k + 1) % m;
    const bool cin = d[k] <= eps;
    const bool nin = d[k1] <= eps;
    if (cin) {
      ny.push_back(ys[k]);
      nl.push_back(labels[k]);
      if (!nin) {
        ny.push_back(crossing(ys[k], ys[k1], d[k], d[k1], lines[static_cast<std::size_t>(label)],
                              labels[k], lines));
        nl.push_back(label);
      }
    } else if (nin) {
      ny.push_back(crossing(ys[k], ys[k1], d[k], d[k1], lines[static_cast<std::size_t>(label)],
                            labels[k], lines));
      nl.push_back(labels[k]);
    }
  }
  // drop vertices that coincide with their successor
  std::vector<Eigen::Vector2d> oy;
  std::vector<int> ol;
  for (std::size_t k = 0; k < ny.size(); ++k) {
    const std::size_t k1 = (k + 1) % ny.size();
    if (ny.size() > 1 && (ny[k] - ny[k1]).norm() <= eps) continue;
    oy.push_back(ny[k]);
    ol.push_back(nl[k]);
  }
  if (oy.size() < 3) {
    oy.clear();
    ol.clear();
  }
  ys.swap(oy);
  labels.swap(ol);
}

FacetComplex build_complex_3d(const NormalSet& ns, const Vec& h) {
  const std::size_t nf = ns.size();
  const double scale = h.maxCoeff();
  const double big = 1e6 * scale;
  const double eps = 1e-12 * scale;
  FacetComplex fc;
  fc.facets.resize(nf);
  fc.facet_vertex_ids.resize(nf);
  fc.areas.assign(nf, 0.0);
  std::vector<int> order(nf);
  for (std::size_t i = 0; i < nf; ++i) {
    const Vec& v = ns[i];
    const Mat e = orthogonal_complement(v);
    // orient (e0, e1, v) positively so counter-clockwise y-order faces outward
    Mat basis = e;
    Eigen::Matrix3d frame;
    frame << e.col(0), e.col(1), v;
    if (frame.determinant() < 0) basis.col(1) = -basis.col(1);
    const Vec p0 = h[static_cast<Eigen::Index>(i)] * v;
    std::vector<Eigen::Vector2d> ys = {{-big, -big}, {big, -big}, {big, big}, {-big, big}};
    std::vector<int> labels = {-2, -3, -4, -5};
    std::iota(order.begin(), order.end(), 0);
    const Vec dots = ns.matrix().transpose() * v;
    std::sort(order.begin(), order.end(), [&](int a, int b) {
      return dots[a] > dots[b] || (dots[a] == dots[b] && a < b);
    });
    bool empty = false;
    std::vector<Line2> lines(nf);
    for (int j : order) {
      if (static_cast<std::size_t>(j) == i) continue;
      const Vec& w = ns[static_cast<std::size_t>(j)];
      const Eigen::Vector2d a(basis.col(0).dot(w), basis.col(1).dot(w));
      const double b = h[j] - h[static_cast<Eigen::Index>(i)] * dots[j];
      if (a.norm() < 1e-12) {
        if (dots[j] > 0 && (b < -eps || (std::abs(b) <= eps && j < static_cast<int>(i)))) {
          empty = true;
          break;
        }
        continue;
      }
      lines[static_cast<std::size_t>(j)] = {a, b};
      clip_polygon(ys, labels, lines, j, eps);
      if (ys.empty()) {
        empty = true;
        break;
      }
    }
    if (empty) continue;
    for (int l : labels)
      if (l < kNoLabel)
        throw DomainError("facet complex: intersection is unbounded (facet " + std::to_string(i) +
                          ")");
    std::vector<Vec> poly;
    const std::size_t m = ys.size();
    for (std::size_t k = 0; k < m; ++k) {
      const int prev = labels[(k + m - 1) % m];
      const int next = labels[k];
      const Vec approx = p0 + basis * Eigen::Vector2d(ys[k]);
      poly.push_back(solve_planes(ns, h, {static_cast<int>(i), prev, next}, approx));
    }
    double area = 0.0;
    for (std::size_t k = 1; k + 1 < m; ++k) {
      const Eigen::Vector3d a3 = poly[k] - poly[0];
      const Eigen::Vector3d b3 = poly[k + 1] - poly[0];
      area += 0.5 * a3.cross(b3).dot(Eigen::Vector3d(v));
    }
    if (area <= 1e-14 * scale * scale) continue;
    fc.areas[i] = area;
    fc.facets[i] = std::move(poly);
  }
  return fc;
}

FacetComplex build_complex_2d(const NormalSet& ns, const Vec& h) {
  const std::size_t nf = ns.size();
  const double scale = h.maxCoeff();
  const double big = 1e6 * scale;
  const double eps = 1e-12 * scale;
  FacetComplex fc;
  fc.facets.resize(nf);
  fc.facet_vertex_ids.resize(nf);
  fc.areas.assign(nf, 0.0);
  for (std::size_t i = 0; i < nf; ++i) {
    const Vec& v = ns[i];
    Vec t(2);
    t << -v[1], v[0];
    const Vec p0 = h[static_cast<Eigen::Index>(i)] * v;
    double lo = -big;
    double hi = big;
    int llo = -2;
    int lhi = -3;
    bool empty = false;
    for (std::size_t j = 0; j < nf && !empty; ++j) {
      if (j == i) continue;
      const Vec& w = ns[j];
      const double a = t.dot(w);
      const double dot = v.dot(w);
      const double b = h[static_cast<Eigen::Index>(j)] - h[static_cast<Eigen::Index>(i)] * dot;
      if (std::abs(a) < 1e-12) {
        if (dot > 0 && (b < -eps || (std::abs(b) <= eps && j < i))) empty = true;
        continue;
      }
      const double s = b / a;
      if (a > 0) {
        if (s < hi) {
          hi = s;
          lhi = static_cast<int>(j);
        }
      } else if (s > lo) {
        lo = s;
        llo = static_cast<int>(j);
      }
    }
    if (empty || hi - lo <= eps) continue;
    if (llo < kNoLabel || lhi < kNoLabel)
      throw DomainError("facet complex: intersection is unbounded (facet " + std::to_string(i) +
                        ")");
    const Vec a0 = solve_planes(ns, h, {static_cast<int>(i), llo}, p0 + lo * t);
    const Vec a1 = solve_planes(ns, h, {static_cast<int>(i), lhi}, p0 + hi * t);
    fc.areas[i] = (a1 - a0).norm();
    fc.facets[i] = {a0, a1};
  }
  return fc;
}

void finish_complex(FacetComplex& fc, const Vec& h, int n) {
  const double scale = h.maxCoeff();
  PointHash index(n, 1e-9 * scale);
  fc.centroid = Vec::Zero(n);
  CompensatedSum vol;
  Vec moment = Vec::Zero(n);
  for (std::size_t i = 0; i < fc.facets.size(); ++i) {
    const auto& poly = fc.facets[i];
    if (poly.empty()) continue;
    for (const auto& x : poly) {
      int id = index.find(x);
      if (id < 0) {
        id = static_cast<int>(index.size());
        index.insert(x);
        fc.vertices.push_back(x);
      }
      fc.facet_vertex_ids[i].push_back(id);
    }
    const double hi = h[static_cast<Eigen::Index>(i)];
    // cone over facet i: volume h*area/n, centroid n/(n+1) times facet centroid
    Vec fcent = Vec::Zero(n);
    if (n == 2) {
      fcent = 0.5 * (poly[0] + poly[1]);
    } else {
      double a = 0.0;
      for (std::size_t k = 1; k + 1 < poly.size(); ++k) {
        const Eigen::Vector3d e1 = poly[k] - poly[0];
        const Eigen::Vector3d e2 = poly[k + 1] - poly[0];
        const double ta = 0.5 * e1.cross(e2).norm();
        fcent += ta * (poly[0] + poly[k] + poly[k + 1]) / 3.0;
        a += ta;
      }
      fcent /= a;
    }
    const double cv = hi * fc.areas[i] / n;
    vol.add(cv);
    moment += cv * (static_cast<double>(n) / (n + 1)) * fcent;
  }
  fc.volume = vol.value();
  fc.centroid = moment / fc.volume;
}

}  // namespace

// ---- SupportPolytope ---------------------------------------------------------------

SupportPolytope::SupportPolytope(std::vector<Vec> normals, Vec support_numbers)
    : SupportPolytope(std::make_shared<const NormalSet>(std::move(normals)),
                      std::move(support_numbers)) {}

SupportPolytope::SupportPolytope(std::shared_ptr<const NormalSet> normals, Vec support_numbers)
    : normals_(std::move(normals)), h_(std::move(support_numbers)) {
  if (!normals_) throw DomainError("SupportPolytope: null normal set");
  if (h_.size() != static_cast<Eigen::Index>(normals_->size()))
    throw DomainError("SupportPolytope: support count does not match normal count");
  for (Eigen::Index i = 0; i < h_.size(); ++i)
    if (!(h_[i] > 0.0) || !std::isfinite(h_[i]))
      throw DomainError("SupportPolytope: support number " + std::to_string(i) +
                        " is not positive and finite");
}

SupportPolytope SupportPolytope::with_support(Vec support_numbers) const {
  return {normals_, std::move(support_numbers)};
}

SupportPolytope SupportPolytope::scaled(double lambda) const {
  if (!(lambda > 0.0)) throw DomainError("SupportPolytope::scaled: lambda must be positive");
  SupportPolytope out(normals_, lambda * h_);
  if (complex_) {
    auto fc = std::make_shared<FacetComplex>(*complex_);
    for (auto& f : fc->facets)
      for (auto& x : f) x *= lambda;
    for (auto& x : fc->vertices) x *= lambda;
    for (auto& a : fc->areas) a *= std::pow(lambda, dim() - 1);
    fc->volume *= std::pow(lambda, dim());
    fc->centroid *= lambda;
    out.complex_ = std::move(fc);
  }
  return out;
}

const FacetComplex& SupportPolytope::facets() const {
  if (!complex_) {
    const int n = dim();
    if (n > 3) throw DomainError("facet complex: only n = 2 and n = 3 are supported");
    auto fc = std::make_shared<FacetComplex>(n == 2 ? build_complex_2d(*normals_, h_)
                                                    : build_complex_3d(*normals_, h_));
    finish_complex(*fc, h_, n);
    complex_ = std::move(fc);
  }
  return *complex_;
}

// ---- StarBodySpec ----------------------------------------------------------------

StarBodySpec::StarBodySpec(int dim, Radial radial, std::string description, bool is_ball,
                           double ball_radius)
    : dim_(dim),
      radial_(std::move(radial)),
      description_(std::move(description)),
      is_ball_(is_ball),
      ball_radius_(ball_radius) {
  if (dim_ < 2) throw DomainError("StarBodySpec: dimension must be >= 2");
  const SphericalGrid probe = build_grid(dim_, 2000, default_scheme(dim_), 1);
  double c = 1.0;
  for (std::size_t i = 0; i < probe.size(); ++i) {
    const double r = radial_(probe.node(i));
    if (!(r > 0.0) || !std::isfinite(r))
      throw DomainError("StarBodySpec '" + description_ + "': radial function not positive at probe node " +
                        std::to_string(i));
    c = std::max({c, r, 1.0 / r});
  }
  sandwich_ = c;
}

double StarBodySpec::radial_at(const Vec& x) const {
  const double r = x.norm();
  if (is_ball_) return ball_radius_ / r;
  return radial_(x / r) / r;
}

StarBodySpec StarBodySpec::ball(int n, double radius) {
  if (!(radius > 0.0)) throw DomainError("ball: radius must be positive");
  std::ostringstream d;
  d << "ball(r=" << radius << ")";
  return {n, [radius](const Vec&) { return radius; }, d.str(), true, radius};
}

StarBodySpec StarBodySpec::ellipsoid(const Mat& m) {
  Eigen::FullPivLU<Mat> lu(m);
  if (!lu.isInvertible()) throw DomainError("ellipsoid: matrix is singular");
  const Mat inv = lu.inverse();
  return {static_cast<int>(m.rows()), [inv](const Vec& u) { return 1.0 / (inv * u).norm(); },
          "ellipsoid"};
}

StarBodySpec StarBodySpec::from_polytope(const SupportPolytope& p) {
  return {p.dim(), [p](const Vec& u) { return radial_eval(p, u).rho; }, "polytope"};
}

StarBodySpec StarBodySpec::linear_image(const StarBodySpec& q, const Mat& phi) {
  Eigen::FullPivLU<Mat> lu(phi);
  if (!lu.isInvertible()) throw DomainError("linear_image: matrix is singular");
  const Mat inv = lu.inverse();
  auto base = q.function();
  // rho_{phi Q}(u) = rho_Q(phi^{-1} u)
  return {q.dim(),
          [inv, base](const Vec& u) {
            const Vec w = inv * u;
            const double r = w.norm();
            return base(w / r) / r;
          },
          "linear_image(" + q.description() + ")"};
}

StarBodySpec StarBodySpec::symmetrized(const StarBodySpec& q, const OrthogonalGroup& g) {
  if (g.dim() != q.dim()) throw DomainError("symmetrized: dimension mismatch");
  return {q.dim(), symmetrize_density(g, q.function()),
          "symmetrized(" + q.description() + "," + g.label() + ")", q.is_ball(), q.ball_radius()};
}

// ---- evaluations -------------------------------------------------------------------

RadialHit radial_eval(const SupportPolytope& p, const Vec& u) {
  double best = std::numeric_limits<double>::infinity();
  int arg = -1;
  const Vec dots = p.normal_set()->matrix().transpose() * u;
  const Vec& h = p.support_numbers();
  for (Eigen::Index i = 0; i < dots.size(); ++i) {
    const double c = dots[i];
    if (c <= 0.0 || h[i] >= best * c) continue;
    best = h[i] / c;
    arg = static_cast<int>(i);
  }
  if (arg < 0) throw DomainError("radial_eval: no normal has positive inner product with u");
  return {best, arg};
}

double support_eval_lp(const SupportPolytope& p, const Vec& u) {
  const LpResult r = solve_standard_lp(p.normal_set()->matrix(), u, p.support_numbers());
  if (r.status == LpResult::Status::infeasible)
    throw NumericalError("support_eval: LP unbounded (normals do not positively span)");
  if (r.status != LpResult::Status::optimal) throw NumericalError("support_eval: LP infeasible");
  return r.value;
}

double support_eval(const SupportPolytope& p, const Vec& u) {
  if (p.dim() > 3) return support_eval_lp(p, u);
  const auto& verts = p.facets().vertices;
  double best = -std::numeric_limits<double>::infinity();
  for (const auto& x : verts) best = std::max(best, x.dot(u));
  return best;
}

double polar_radial(const SupportPolytope& p, const Vec& u) {
  const double h = support_eval(p, u);
  if (!(h > 0.0)) throw NumericalError("polar_radial: support value not positive");
  return 1.0 / h;
}

SupportPolytope polar_polytope(const SupportPolytope& p) {
  const auto& verts = p.facets().vertices;
  std::vector<Vec> normals;
  Vec h(static_cast<Eigen::Index>(verts.size()));
  for (std::size_t k = 0; k < verts.size(); ++k) {
    const double r = verts[k].norm();
    normals.push_back(verts[k] / r);
    h[static_cast<Eigen::Index>(k)] = 1.0 / r;
  }
  return {std::move(normals), std::move(h)};
}

double default_h_floor(const Vec& h) {
  double s = 0.0;
  for (Eigen::Index i = 0; i < h.size(); ++i) s += std::log(h[i]);
  return 1e-6 * std::exp(s / static_cast<double>(h.size()));
}

SupportPolytope wulff_shape(const SupportPolytope& base, const Vec& phi, double t, double h_floor) {
  if (phi.size() != static_cast<Eigen::Index>(base.size()))
    throw DomainError("wulff_shape: perturbation size does not match normal count");
  const double floor = h_floor < 0 ? default_h_floor(base.support_numbers()) : h_floor;
  Vec h = base.support_numbers() + t * phi;
  for (Eigen::Index i = 0; i < h.size(); ++i)
    if (!(h[i] >= floor))
      throw DomainError("wulff_shape: support number " + std::to_string(i) + " below h_floor");
  return base.with_support(std::move(h));
}

GeometryStats geometry_stats(const SupportPolytope& p, const SphericalGrid& grid) {
  GeometryStats st;
  const int n = p.dim();
  if (n <= 3) {
    const FacetComplex& fc = p.facets();
    st.exact = true;
    st.centroid = fc.centroid;
    for (const auto& x : fc.vertices) st.circumradius = std::max(st.circumradius, x.norm());
    for (std::size_t a = 0; a < fc.vertices.size(); ++a)
      for (std::size_t b = a + 1; b < fc.vertices.size(); ++b)
        st.diameter = std::max(st.diameter, (fc.vertices[a] - fc.vertices[b]).norm());
  } else {
    Vec moment = Vec::Zero(n);
    CompensatedSum vol;
    for (std::size_t k = 0; k < grid.size(); ++k) {
      const Vec& u = grid.node(k);
      const double r = radial_eval(p, u).rho;
      const double r2 = radial_eval(p, -u).rho;
      vol.add(grid.weight(k) * std::pow(r, n) / n);
      moment += grid.weight(k) * std::pow(r, n + 1) / (n + 1) * u;
      st.circumradius = std::max(st.circumradius, r);
      st.diameter = std::max(st.diameter, r + r2);
    }
    st.centroid = moment / vol.value();
  }
  st.inradius = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < p.size(); ++i)
    st.inradius = std::min(st.inradius, support_eval(p, p.normal(i)));
  return st;
}

InvarianceReport is_invariant(const SupportPolytope& p, const OrthogonalGroup& g,
                              const SphericalGrid& grid, double tol) {
  InvarianceReport rep;
  std::vector<double> base(grid.size());
  for (std::size_t k = 0; k < grid.size(); ++k) base[k] = radial_eval(p, grid.node(k)).rho;
  for (std::size_t e = 1; e < g.order(); ++e) {
    for (std::size_t k = 0; k < grid.size(); ++k) {
      const double r = radial_eval(p, g.element(e) * grid.node(k)).rho;
      rep.max_deviation = std::max(rep.max_deviation, std::abs(r - base[k]));
    }
  }
  rep.invariant = rep.max_deviation <= tol;
  return rep;
}

double constraint_set_deviation(const SupportPolytope& p, const OrthogonalGroup& g,
                                double match_tol) {
  PointHash index(p.dim(), match_tol);
  for (const auto& v : p.normals()) index.insert(v);
  double dev = 0.0;
  for (const auto& e : g.elements()) {
    for (std::size_t i = 0; i < p.size(); ++i) {
      const int j = index.find(e * p.normal(i));
      if (j < 0) return std::numeric_limits<double>::infinity();
      dev = std::max(dev, std::abs(p.h(i) - p.h(static_cast<std::size_t>(j))));
    }
  }
  return dev;
}

// ---- common bodies -------------------------------------------------------------------

SupportPolytope box_polytope(const Vec& half_axes) {
  const auto n = half_axes.size();
  std::vector<Vec> normals;
  Vec h(2 * n);
  for (Eigen::Index k = 0; k < n; ++k) {
    if (!(half_axes[k] > 0.0)) throw DomainError("box_polytope: half-axes must be positive");
    for (double s : {1.0, -1.0}) {
      Vec v = Vec::Zero(n);
      v[k] = s;
      h[static_cast<Eigen::Index>(normals.size())] = half_axes[k];
      normals.push_back(v);
    }
  }
  return {std::move(normals), std::move(h)};
}

SupportPolytope ball_polytope(const std::vector<Vec>& normals, double r) {
  return {normals, Vec::Constant(static_cast<Eigen::Index>(normals.size()), r)};
}

SupportPolytope shifted_ball_polytope(const std::vector<Vec>& normals, const Vec& center,
                                      double r) {
  Vec h(static_cast<Eigen::Index>(normals.size()));
  for (std::size_t i = 0; i < normals.size(); ++i)
    h[static_cast<Eigen::Index>(i)] = r + normals[i].dot(center);
  return {normals, std::move(h)};
}

SupportPolytope linear_image(const SupportPolytope& p, const Mat& phi) {
  Eigen::FullPivLU<Mat> lu(phi);
  if (!lu.isInvertible()) throw DomainError("linear_image: matrix is singular");
  const Mat inv_t = lu.inverse().transpose();
  std::vector<Vec> normals;
  Vec h(static_cast<Eigen::Index>(p.size()));
  for (std::size_t i = 0; i < p.size(); ++i) {
    const Vec w = inv_t * p.normal(i);
    const double s = w.norm();
    normals.push_back(w / s);
    h[static_cast<Eigen::Index>(i)] = p.h(i) / s;
  }
  return {std::move(normals), std::move(h)};
}

SupportPolytope translated(const SupportPolytope& p, const Vec& shift) {
  Vec h = p.support_numbers();
  for (std::size_t i = 0; i < p.size(); ++i) h[static_cast<Eigen::Index>(i)] += p.normal(i).dot(shift);
  return p.with_support(std::move(h));
}

SupportPolytope centered(const SupportPolytope& p) {
  return translated(p, -p.facets().centroid);
}

SupportPolytope random_polytope(int n, int facets, Rng& rng, double h_lo, double h_hi) {
  if (facets < n + 1) throw DomainError("random_polytope: need at least n+1 facets");
  for (int attempt = 0; attempt < 100; ++attempt) {
    std::vector<Vec> normals;
    Vec h(facets);
    for (int i = 0; i < facets; ++i) {
      normals.push_back(rng.unit_vector(n));
      h[i] = rng.uniform(h_lo, h_hi);
    }
    try {
      return {std::move(normals), std::move(h)};
    } catch (const DomainError&) {
    }
  }
  throw NumericalError("random_polytope: no positively spanning normal set drawn");
}

}  // namespace dualmink
