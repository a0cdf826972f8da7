#pragma once

#include <functional>
#include <string>
#include <vector>

#include "dualmink/bodies.hpp"
#include "dualmink/groups.hpp"
#include "dualmink/sphere_quadrature.hpp"

namespace dualmink {

/// One nonnegative total per normal of a SupportPolytope.
struct FacetMeasure {
  Vec totals;
  std::string grid_id;
  [[nodiscard]] double total() const { return compensated_total(totals); }
};

/// Discrete measure on the normals of a polytope family.
struct MeasureSpec {
  Vec atoms;
  double total_mass = 0.0;
  std::string description;
};

/// Bins w_u f(u) of every grid node to its nearest normal (largest <u, v_i>,
/// smallest index on ties). Throws DomainError on negative or non-finite f or
/// a trivial measure.
MeasureSpec build_measure(const std::function<double(const Vec&)>& density,
                          const SphericalGrid& grid, const NormalSet& normals,
                          const std::string& description = "density");

/// Replaces each atom by the mean over its orbit.
MeasureSpec orbit_averaged(const MeasureSpec& mu, const OrbitPartition& partition);

// ---- spherical-grid oracle -------------------------------------------------------

/// (1/n) sum_u w_u rho_K(u)^q rho_Q(u)^{n-q}.
double dual_mixed_volume(const SupportPolytope& k, const StarBodySpec& q_body, double q,
                         const SphericalGrid& grid);

/// Node-to-facet assignment of the dual mixed volume integrand.
FacetMeasure dual_curvature_measure(const SupportPolytope& k, const StarBodySpec& q_body, double q,
                                    const SphericalGrid& grid);

/// dual_curvature_measure weighted by h_i^{-p}.
FacetMeasure lp_dual_curvature_measure(const SupportPolytope& k, const StarBodySpec& q_body,
                                       double p, double q, const SphericalGrid& grid);

// ---- boundary oracle ---------------------------------------------------------------

/// Atom i = (1/n) h_i int_{F_i} rho_Q(x)^{n-q} dA over the exact facets (n = 2, 3).
/// For a ball Q the radial part is integrated in closed form and the rest by
/// adaptive Gauss-Kronrod; otherwise facets are split into triangles and
/// integrated by an adaptive degree-5 rule. Facets of area below 1e-12
/// (relative) contribute zero.
FacetMeasure dual_curvature_via_boundary(const SupportPolytope& k, const StarBodySpec& q_body,
                                         double q, double rtol = 1e-12);

/// Chooses between the two oracles. The boundary engine is smooth in the
/// support numbers and is the default for n = 2, 3.
class MeasureEngine {
 public:
  static MeasureEngine boundary(double rtol = 1e-12);
  static MeasureEngine on_grid(const SphericalGrid& grid);
  /// boundary for n <= 3, otherwise the supplied grid.
  static MeasureEngine automatic(int n, const SphericalGrid& grid);

  [[nodiscard]] FacetMeasure curvature(const SupportPolytope& k, const StarBodySpec& q_body,
                                       double q) const;
  [[nodiscard]] double volume(const SupportPolytope& k, const StarBodySpec& q_body, double q) const {
    return curvature(k, q_body, q).total();
  }
  [[nodiscard]] bool uses_grid() const { return grid_ != nullptr; }
  [[nodiscard]] std::string label() const;

 private:
  const SphericalGrid* grid_ = nullptr;
  double rtol_ = 1e-12;
};

// ---- entropy functional -------------------------------------------------------------

/// Phi = (1/p) log sum_i h_i^p mu_i - (1/q) log V_q(K, Q).
double entropy_value(const SupportPolytope& k, const MeasureSpec& mu, const StarBodySpec& q_body,
                     double p, double q, const MeasureEngine& engine);

struct EntropyEval {
  double value = 0.0;
  double volume = 0.0;         // V_q(K, Q)
  double moment = 0.0;         // sum_i h_i^p mu_i
  Vec gradient;                // dPhi/dh_i
  Vec log_gradient;            // dPhi/dlog h_i = h_i dPhi/dh_i, sums to zero
  FacetMeasure curvature;      // C_q atoms
};

/// Value and analytic gradient
///   dPhi/dh_i = h_i^{p-1} mu_i / sum_j h_j^p mu_j - C_{q,i} / (h_i V_q).
EntropyEval entropy_eval(const SupportPolytope& k, const MeasureSpec& mu, const StarBodySpec& q_body,
                         double p, double q, const MeasureEngine& engine);

Vec entropy_gradient(const SupportPolytope& k, const MeasureSpec& mu, const StarBodySpec& q_body,
                     double p, double q, const MeasureEngine& engine);

/// Sums a per-normal vector over each orbit.
Vec collapse_to_orbits(const Vec& full, const OrbitPartition& partition);
/// Spreads per-orbit values to every member.
Vec expand_from_orbits(const Vec& reduced, const OrbitPartition& partition);

// ---- affine invariance ---------------------------------------------------------------

struct AffineCheck {
  double lhs = 0.0;
  double rhs = 0.0;
  double gap = 0.0;  // |lhs - rhs| / max(|lhs|, |rhs|)
};

/// lhs = int g dC_q(phi K, phi Q) on grid_a, rhs = int g(phi^{-T}v/|phi^{-T}v|) dC_q(K, Q)
/// on grid_b. Requires |det phi - 1| <= 1e-10 and condition number <= 1e6.
AffineCheck affine_invariance_check(const SupportPolytope& k, const StarBodySpec& q_body, double q,
                                    const Mat& phi, const std::function<double(const Vec&)>& g,
                                    const SphericalGrid& grid_a, const SphericalGrid& grid_b);

}  // namespace dualmink
