#include <gtest/gtest.h>

#include "dualmink/constructions.hpp"

using namespace dualmink;

namespace {
SupportPolytope shifted_base() {
  Vec c(3);
  c << 0.5, 0.0, 0.0;
  return shifted_ball_polytope(octahedral_directions(5), c, 2.0);
}
}  // namespace

TEST(Certificate, SymmetricBodyHasNoGap) {
  const SphericalGrid g = build_grid(3, 500, GridScheme::fibonacci_sphere);
  const AsymmetryCertificate c = certify_asymmetry(box_polytope(Vec::Ones(3)), g);
  EXPECT_NEAR(c.max_gap, 0.0, 1e-12);
  EXPECT_FALSE(c.non_symmetric);
}

TEST(Certificate, TriangleIsAsymmetric) {
  const SphericalGrid g = build_grid(2, 360, GridScheme::uniform_angle);
  const AsymmetryCertificate c = certify_asymmetry(ball_polytope(circle_points(3)), g);
  // rho = 1 toward an edge, 2 toward the opposite vertex
  EXPECT_NEAR(c.max_gap, 1.0, 1e-2);
  EXPECT_TRUE(c.non_symmetric);
}

TEST(Rotation, GenericAndDeterministic) {
  const auto g = standard_group(GroupSpec::simplex_symmetry(3), 3);
  const Vec z = Vec::Unit(3, 0);
  const Mat h = random_generic_rotation(g, z, 4);
  EXPECT_NEAR((h.transpose() * h - Mat::Identity(3, 3)).norm(), 0.0, 1e-12);
  EXPECT_GE(generic_margin(g, h * z), 1e-3);
  EXPECT_EQ((random_generic_rotation(g, z, 4) - h).norm(), 0.0);
}

TEST(Intersection, InvariantAndNonSymmetric) {
  const auto g = standard_group(GroupSpec::simplex_symmetry(3), 3);
  const SphericalGrid probe = build_grid(3, 500, GridScheme::fibonacci_sphere, 3);
  const ConstructionResult r = orbit_intersection_body(g, shifted_base(), probe, 2);
  EXPECT_TRUE(r.unique_extremum);
  EXPECT_TRUE(r.certificate.non_symmetric);
  EXPECT_LE(r.certificate.invariance_deviation, 1e-9);
  EXPECT_LE(constraint_set_deviation(r.body, g), 1e-9);
  // K lies inside every g h C, so its inradius about 0 is at most the minimal radius of C.
  EXPECT_LE(geometry_stats(r.body, probe).inradius, r.extremal_radius + 1e-9);
}

TEST(Intersection, RejectsGroupsWithNegation) {
  const OrthogonalGroup neg = enumerate_group({-Mat::Identity(3, 3)}, 4);
  const SphericalGrid probe = build_grid(3, 200, GridScheme::fibonacci_sphere);
  EXPECT_THROW(orbit_intersection_body(neg, shifted_base(), probe, 1), HypothesisError);
}

TEST(Circum, TouchesCircumsphereOnlyAtOrbit) {
  const auto g = standard_group(GroupSpec::cyclic(3), 2);
  Vec c(2);
  c << -0.3, 0.0;
  const SupportPolytope base = shifted_ball_polytope(circle_points(64, 0.013), c, 1.0);
  const SphericalGrid probe = build_grid(2, 2000, GridScheme::uniform_angle, 1);
  const ConstructionResult r = orbit_intersection_body_circum(g, base, probe, 5);
  EXPECT_TRUE(r.boundary_check);
  EXPECT_NEAR(r.rho_at_hz, r.extremal_radius, 1e-9);
  EXPECT_LT(r.rho_at_minus_hz, r.extremal_radius);
  EXPECT_TRUE(r.certificate.non_symmetric);
}

TEST(DirichletVoronoi, CellsTileSpace) {
  for (int l : {3, 5, 7}) {
    const auto g = standard_group(GroupSpec::cyclic(l), 2);
    Vec z(2);
    z << 1.0, 0.3;
    const DirichletCone d = dirichlet_voronoi_cone(g, z.normalized());
    EXPECT_EQ(d.constraints.size(), static_cast<std::size_t>(l - 1));
    EXPECT_TRUE(d.contains_interior(z.normalized()));
    EXPECT_TRUE(voronoi_coverage(g, d, 2000, 1).pass());
  }
}

TEST(DirichletVoronoi, DegenerateSeedRejected) {
  const auto g = standard_group(GroupSpec::cube_rotation(3), 3);
  EXPECT_THROW(dirichlet_voronoi_cone(g, Vec::Unit(3, 2)), HypothesisError);
}
