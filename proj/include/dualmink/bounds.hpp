#pragma once

#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "dualmink/bodies.hpp"
#include "dualmink/dual_measures.hpp"

namespace dualmink {

// ---- exponents ---------------------------------------------------------------------

/// q/(q-n+1) for q >= n, (n-1)q/(q-1) for 1 < q < n, +infinity for 0 < q <= 1.
double q_star(double q, int n);

/// True when r satisfies (n-1)/q + 1/r >= 1 and (n-1)/r + 1/q >= 1.
bool q_star_admissible(double q, double r, int n);

/// Checks that q_star(q, n) is the supremum of admissible r: admissible at
/// q* - eps and not at q* + eps (finite q* only).
bool q_star_is_supremum(double q, int n, double eps = 1e-6);

struct ExponentPair {
  double q = 0.0;
  double q_star = 0.0;
  int n = 0;
};

struct AdmissibleS {
  double s = 0.0;       // finite for q > 1
  bool any_s = false;   // q <= 1: every s > 1 is admissible
};

/// Rejects p outside (-q*, 0) with HypothesisError naming the bound.
AdmissibleS admissible_exponent_s(double p, double q, int n);

// ---- boxes -------------------------------------------------------------------------

/// Half-axes 0 < a_1 <= ... <= a_n.
struct BoxSpec {
  Vec a;
  explicit BoxSpec(Vec half_axes);  // throws unless sorted ascending and positive
  static BoxSpec sorted(Vec half_axes);
  [[nodiscard]] int dim() const { return static_cast<int>(a.size()); }
};

struct BoundsReport {
  double lower = 0.0;
  double upper = 0.0;
  double observed = std::numeric_limits<double>::quiet_NaN();
  bool pass = false;
  std::string branch;
  std::vector<std::pair<std::string, double>> constants;
};

/// Lower and upper envelopes for V_q(R) with explicit constants; observed is
/// left NaN.
BoundsReport box_bounds(const BoxSpec& box, double q);

/// Fills observed and pass.
BoundsReport check_box_bounds(const BoxSpec& box, double q, double observed);

/// Monte-Carlo V_q(R, B^n). Each grid node w contributes two samples, w and
/// A w/|A w| with A = diag(a); both are weighted by the density of the
/// 50/50 mixture of the uniform law and the law of A w/|A w|. With A = I this
/// is the plain grid rule.
double box_dual_volume_mc(const BoxSpec& box, double q, const SphericalGrid& grid);

/// Reference value sum_j (2 a_j / n) int_{face_j} |x|^{q-n} dA by nested
/// adaptive Gauss-Kronrod on one orthant of every face.
double box_dual_volume_reference(const BoxSpec& box, double q, double rtol = 1e-9);

/// rho_R(u) = min_i a_i/|u_i|.
double box_radial(const BoxSpec& box, const Vec& u);

// ---- Santalo -------------------------------------------------------------------------

struct SantaloReport {
  double volume = 0.0;
  double polar_volume = 0.0;
  double forward = 0.0;  // V(K) V(K*)
  double kappa_sq = 0.0;
  double kuperberg_floor = 0.0;
  bool centered = false;
  bool forward_checked = false;
  bool forward_ok = false;  // forward <= 1.02 kappa^2
  bool floor_ok = false;    // forward > kappa^2 / 4^n
};

/// Volumes from the facet complexes for n <= 3, grid quadrature otherwise.
SantaloReport santalo_product(const SupportPolytope& k, const SphericalGrid& grid);

struct DualProduct {
  double vq = 0.0;  // V_q(K, Q1)
  double vr = 0.0;  // V_r(K*, Q2)
  double product = 0.0;
};

/// V_q(K,Q1)^{1/q} V_r(K*,Q2)^{1/r}. With a boundary engine (n <= 3) both
/// factors are boundary integrals over K and its polar polytope; with a grid
/// engine V_r(K*, Q2) is (1/n) int h_K^{-r} rho_Q2^{n-r} du. Rejects r > q*.
DualProduct bs_dual_product(const SupportPolytope& k, const StarBodySpec& q1,
                            const StarBodySpec& q2, double q, double r,
                            const MeasureEngine& engine, const SphericalGrid* grid = nullptr);

struct InradiusReport {
  double inradius = 0.0;
  double t = 0.0;
  double ratio = 0.0;         // inradius / t^{1/q}
  double linear_ratio = 0.0;  // inradius / t
};

InradiusReport inradius_diagnostic(const SupportPolytope& k, double q, double t,
                                   const SphericalGrid& grid);

}  // namespace dualmink
