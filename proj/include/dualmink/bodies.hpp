#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "dualmink/core.hpp"
#include "dualmink/groups.hpp"
#include "dualmink/sphere_quadrature.hpp"

namespace dualmink {

/// Fixed set of unit normals shared by all polytopes of a family (Wulff
/// shapes, solver iterates). Validated once: unit length, at least n+1
/// vectors, positively spanning R^n.
class NormalSet {
 public:
  explicit NormalSet(std::vector<Vec> normals);
  [[nodiscard]] int dim() const { return dim_; }
  [[nodiscard]] std::size_t size() const { return normals_.size(); }
  [[nodiscard]] const std::vector<Vec>& normals() const { return normals_; }
  [[nodiscard]] const Vec& operator[](std::size_t i) const { return normals_[i]; }
  /// Normals as columns of an n x N matrix.
  [[nodiscard]] const Mat& matrix() const { return matrix_; }

 private:
  int dim_;
  std::vector<Vec> normals_;
  Mat matrix_;
};

/// Boundary pieces of a polytope in R^2 or R^3. For n = 3 each facet is a
/// convex polygon listed counter-clockwise when seen from outside; for n = 2
/// each facet is a segment (two endpoints). Empty facets are redundant.
struct FacetComplex {
  std::vector<std::vector<Vec>> facets;
  std::vector<std::vector<int>> facet_vertex_ids;
  std::vector<double> areas;  // (n-1)-volume of each facet
  std::vector<Vec> vertices;  // deduplicated
  double volume = 0.0;
  Vec centroid;
};

/// K = {x : <x, v_i> <= h_i}. Immutable; the facet complex (n <= 3) is built
/// on first use and cached.
class SupportPolytope {
 public:
  SupportPolytope(std::vector<Vec> normals, Vec support_numbers);
  SupportPolytope(std::shared_ptr<const NormalSet> normals, Vec support_numbers);

  [[nodiscard]] int dim() const { return normals_->dim(); }
  [[nodiscard]] std::size_t size() const { return normals_->size(); }
  [[nodiscard]] const std::vector<Vec>& normals() const { return normals_->normals(); }
  [[nodiscard]] const Vec& normal(std::size_t i) const { return (*normals_)[i]; }
  [[nodiscard]] const Vec& support_numbers() const { return h_; }
  [[nodiscard]] double h(std::size_t i) const { return h_[static_cast<Eigen::Index>(i)]; }
  [[nodiscard]] const std::shared_ptr<const NormalSet>& normal_set() const { return normals_; }

  /// Same normals, new support numbers.
  [[nodiscard]] SupportPolytope with_support(Vec support_numbers) const;
  [[nodiscard]] SupportPolytope scaled(double lambda) const;

  /// Throws DomainError for n > 3 or an unbounded intersection.
  [[nodiscard]] const FacetComplex& facets() const;

 private:
  std::shared_ptr<const NormalSet> normals_;
  Vec h_;
  mutable std::shared_ptr<const FacetComplex> complex_;
};

/// Star body given by a positive continuous radial function on S^{n-1}.
class StarBodySpec {
 public:
  using Radial = std::function<double(const Vec&)>;
  StarBodySpec(int dim, Radial radial, std::string description, bool is_ball = false,
               double ball_radius = 1.0);

  [[nodiscard]] int dim() const { return dim_; }
  [[nodiscard]] double radial(const Vec& u) const { return radial_(u); }
  /// rho_Q(x) = rho_Q(x/|x|)/|x| for nonzero x.
  [[nodiscard]] double radial_at(const Vec& x) const;
  [[nodiscard]] const std::string& description() const { return description_; }
  [[nodiscard]] bool is_ball() const { return is_ball_; }
  [[nodiscard]] double ball_radius() const { return ball_radius_; }
  /// Smallest c >= 1 with 1/c <= rho_Q <= c on the probe grid.
  [[nodiscard]] double sandwich_constant() const { return sandwich_; }
  [[nodiscard]] const Radial& function() const { return radial_; }

  static StarBodySpec ball(int n, double radius = 1.0);
  /// Q = M B^n for an invertible matrix M.
  static StarBodySpec ellipsoid(const Mat& m);
  static StarBodySpec from_polytope(const SupportPolytope& p);
  /// phi Q for an invertible matrix phi.
  static StarBodySpec linear_image(const StarBodySpec& q, const Mat& phi);
  /// Radial function averaged over G.
  static StarBodySpec symmetrized(const StarBodySpec& q, const OrthogonalGroup& g);

 private:
  int dim_;
  Radial radial_;
  std::string description_;
  bool is_ball_;
  double ball_radius_;
  double sandwich_ = 1.0;
};

struct RadialHit {
  double rho;
  int facet;
};

/// rho_K(u) and the facet hit by the ray through u (smallest index on ties).
RadialHit radial_eval(const SupportPolytope& p, const Vec& u);

/// h_K(u): vertex maximum for n <= 3, linear programming otherwise.
double support_eval(const SupportPolytope& p, const Vec& u);

/// Support value by linear programming regardless of dimension.
double support_eval_lp(const SupportPolytope& p, const Vec& u);

/// rho_{K*}(u) = 1 / h_K(u).
double polar_radial(const SupportPolytope& p, const Vec& u);

/// K* as an H-polytope (n <= 3): one facet per vertex x of K, with normal
/// x/|x| and support number 1/|x|.
SupportPolytope polar_polytope(const SupportPolytope& p);

/// 1e-6 times the geometric mean of the support numbers.
double default_h_floor(const Vec& h);

/// Support numbers h_i + t phi_i on the same normals. Throws DomainError
/// naming the first index below h_floor (negative h_floor: default floor of
/// the base).
SupportPolytope wulff_shape(const SupportPolytope& base, const Vec& phi, double t,
                            double h_floor = -1.0);

struct GeometryStats {
  Vec centroid;
  double diameter = 0.0;
  double inradius = 0.0;
  double circumradius = 0.0;
  bool exact = false;  // true when computed from the facet complex
};

/// For n <= 3 the statistics are exact (facet cone decomposition, vertex
/// distances). Otherwise: centroid from grid cone decomposition, diameter as
/// the largest chord rho(u)+rho(-u) through the origin, circumradius as
/// max rho on the grid, inradius as min_i h_K(v_i).
GeometryStats geometry_stats(const SupportPolytope& p, const SphericalGrid& grid);

struct InvarianceReport {
  bool invariant = false;
  double max_deviation = 0.0;
};

/// max over g, grid nodes u of |rho_K(g u) - rho_K(u)|.
InvarianceReport is_invariant(const SupportPolytope& p, const OrthogonalGroup& g,
                              const SphericalGrid& grid, double tol);

/// Largest distance from any g v_i to the normal set and largest support
/// mismatch over matched pairs; zero exactly when the constraint set is
/// G-stable.
double constraint_set_deviation(const SupportPolytope& p, const OrthogonalGroup& g,
                                double match_tol = 1e-9);

// ---- common bodies -------------------------------------------------------------

/// [-a_1,a_1] x ... x [-a_n,a_n].
SupportPolytope box_polytope(const Vec& half_axes);

/// Polytope with the given normals and all support numbers r.
SupportPolytope ball_polytope(const std::vector<Vec>& normals, double r = 1.0);

/// H-polytope approximating the ball c + r B^n on the given normals.
SupportPolytope shifted_ball_polytope(const std::vector<Vec>& normals, const Vec& center,
                                      double r);

/// Image phi K, normals phi^{-T} v / |phi^{-T} v| with support h / |phi^{-T} v|.
SupportPolytope linear_image(const SupportPolytope& p, const Mat& phi);

/// K + shift: support numbers h_i + <v_i, shift>.
SupportPolytope translated(const SupportPolytope& p, const Vec& shift);

/// K - centroid(K) (n <= 3).
SupportPolytope centered(const SupportPolytope& p);

/// Random polytope: uniform normals, support numbers uniform in [h_lo, h_hi].
/// Redraws until the normals positively span R^n.
SupportPolytope random_polytope(int n, int facets, Rng& rng, double h_lo = 0.5, double h_hi = 1.5);

}  // namespace dualmink
