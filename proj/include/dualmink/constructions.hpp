#pragma once

#include <cstdint>
#include <vector>

#include "dualmink/bodies.hpp"
#include "dualmink/groups.hpp"
#include "dualmink/sphere_quadrature.hpp"

namespace dualmink {

struct AsymmetryCertificate {
  double max_gap = 0.0;  // max_u |rho_K(u) - rho_K(-u)|
  Vec witness;
  double invariance_deviation = 0.0;
  bool non_symmetric = false;  // max_gap > 10 * invariance_deviation + 1e-6
};

/// Gap over the grid nodes plus any extra probe directions. With a group the
/// invariance deviation is measured on the same grid.
AsymmetryCertificate certify_asymmetry(const SupportPolytope& k, const SphericalGrid& grid,
                                       const OrthogonalGroup* g = nullptr,
                                       const std::vector<Vec>& extra_probes = {});

/// min over g in G of |-y - g y| for y = h z.
double generic_margin(const OrthogonalGroup& g, const Vec& y);

/// Haar-random orthogonal h with generic_margin(G, h z) >= margin. Throws
/// HypothesisError after max_tries rejections.
Mat random_generic_rotation(const OrthogonalGroup& g, const Vec& z, std::uint64_t seed,
                            int max_tries = 1000, double margin = 1e-3);

struct ConstructionResult {
  SupportPolytope body;
  Mat rotation;
  Vec extremal_direction;   // u_1
  double extremal_radius = 0.0;
  bool unique_extremum = false;
  AsymmetryCertificate certificate;
  // maximal-radius variant only
  double rho_at_hz = 0.0;
  double rho_at_minus_hz = 0.0;
  bool boundary_check = false;
};

/// K = intersection of g h C over G, built by pooling the constraints of C
/// rotated by g h. C's minimal radius is min_i h_C(v_i); uniqueness means
/// every other normal has support at least r (1 + 1e-4). When rotation is
/// null it is drawn by random_generic_rotation(seed).
ConstructionResult orbit_intersection_body(const OrthogonalGroup& g, const SupportPolytope& c,
                                           const SphericalGrid& probe, std::uint64_t seed,
                                           const Mat* rotation = nullptr);

/// Variant for C with a unique maximal radius (n = 2, 3). K is the convex
/// hull of the g h C, computed as the polar of the intersection of the
/// rotated polars; R B^n then touches K exactly at the orbit of h z.
ConstructionResult orbit_intersection_body_circum(const OrthogonalGroup& g, const SupportPolytope& c,
                                                  const SphericalGrid& probe, std::uint64_t seed,
                                                  const Mat* rotation = nullptr);

/// D = {x : <g z - z, x> <= 0 for all g != I}.
struct DirichletCone {
  Vec seed_direction;
  std::vector<Vec> constraints;
  [[nodiscard]] bool contains(const Vec& x, double tol = 1e-12) const;
  [[nodiscard]] bool contains_interior(const Vec& x, double margin = 1e-12) const;
};

/// Throws HypothesisError when g z is within margin of z or -z for some g != I.
DirichletCone dirichlet_voronoi_cone(const OrthogonalGroup& g, const Vec& z, double margin = 1e-6);

struct CoverageReport {
  int samples = 0;
  int covered = 0;
  int overlaps = 0;  // points interior to two different cells g D
  [[nodiscard]] bool pass() const { return covered == samples && overlaps == 0; }
};

/// Samples standard Gaussian points and tests membership of g^{-1} x in D.
CoverageReport voronoi_coverage(const OrthogonalGroup& g, const DirichletCone& d, int samples,
                                std::uint64_t seed);

}  // namespace dualmink
