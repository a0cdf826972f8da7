#include <gtest/gtest.h>

#include "dualmink/groups.hpp"
#include "dualmink/sphere_quadrature.hpp"

using namespace dualmink;

namespace {

void expect_group_axioms(const OrthogonalGroup& g) {
  const int n = g.dim();
  EXPECT_NEAR((g.element(0) - Mat::Identity(n, n)).norm(), 0.0, 1e-12);
  for (const auto& a : g.elements()) {
    EXPECT_NEAR((a.transpose() * a - Mat::Identity(n, n)).norm(), 0.0, 1e-10);
    EXPECT_GE(g.find(a.transpose()), 0);
    for (const auto& b : g.elements()) ASSERT_GE(g.find(a * b), 0);
  }
}

}  // namespace

TEST(StandardGroups, Orders) {
  // |S_{m+1}|, |A_{m+1}|, rotations of the cube 2^{m-1} m!, cyclic l.
  EXPECT_EQ(standard_group(GroupSpec::simplex_symmetry(3), 3).order(), 24u);
  EXPECT_EQ(standard_group(GroupSpec::simplex_rotation(3), 3).order(), 12u);
  EXPECT_EQ(standard_group(GroupSpec::simplex_symmetry(2), 2).order(), 6u);
  EXPECT_EQ(standard_group(GroupSpec::cube_rotation(3), 3).order(), 24u);
  EXPECT_EQ(standard_group(GroupSpec::cyclic(5), 2).order(), 5u);
  EXPECT_EQ(standard_group(GroupSpec::simplex_symmetry(4), 4).order(), 120u);
  const auto sum = standard_group(parse_group_spec("direct-sum(cyclic(3),cyclic(5))"), 4);
  EXPECT_EQ(sum.order(), 15u);
}

TEST(StandardGroups, AxiomsHold) {
  expect_group_axioms(standard_group(GroupSpec::simplex_symmetry(3), 3));
  expect_group_axioms(standard_group(GroupSpec::cube_rotation(3), 3));
  expect_group_axioms(standard_group(GroupSpec::cyclic(7), 2));
}

TEST(StandardGroups, InadmissibleParametersRejected) {
  EXPECT_THROW(standard_group(GroupSpec::cyclic(4), 2), DomainError);
  EXPECT_THROW(standard_group(GroupSpec::cube_rotation(4), 4), DomainError);
  EXPECT_THROW(standard_group(GroupSpec::simplex_symmetry(1), 1), DomainError);
  EXPECT_THROW(standard_group(GroupSpec::cyclic(3), 3), DomainError);
}

TEST(Certificate, FixedPointsAndNegation) {
  const auto c = certify(standard_group(GroupSpec::simplex_symmetry(3), 3));
  EXPECT_FALSE(c.has_nonzero_fixed_point);
  EXPECT_FALSE(c.contains_negation);
  EXPECT_NEAR(c.averaging_norm, 0.0, 1e-12);

  Mat reflect = Mat::Identity(3, 3);
  reflect(2, 2) = -1.0;
  const auto refl = certify(enumerate_group({reflect}, 10));
  EXPECT_TRUE(refl.has_nonzero_fixed_point);
  EXPECT_EQ(refl.order, 2u);

  const auto neg = certify(enumerate_group({-Mat::Identity(2, 2)}, 10));
  EXPECT_TRUE(neg.contains_negation);
  EXPECT_FALSE(neg.has_nonzero_fixed_point);
}

TEST(Enumerate, ClosureLimit) {
  const double t = 2.0 * M_PI / 3.0;
  Mat r(2, 2);
  r << std::cos(t), -std::sin(t), std::sin(t), std::cos(t);
  EXPECT_EQ(enumerate_group({r}, 10).order(), 3u);
  Mat irrational(2, 2);
  irrational << std::cos(1.0), -std::sin(1.0), std::sin(1.0), std::cos(1.0);
  EXPECT_THROW(enumerate_group({irrational}, 50), NumericalError);
}

TEST(Parse, RoundTripAndErrors) {
  for (const char* s : {"cyclic(5)", "simplex-symmetry(3)", "cube-rotation(3)", "direct-sum(cyclic(3),simplex-rotation(2))"})
    EXPECT_EQ(parse_group_spec(s).name(), s);
  EXPECT_EQ(parse_group_spec(" simplex_symmetry( 3 ) ").name(), "simplex-symmetry(3)");
  EXPECT_THROW(parse_group_spec("cyclic(5"), DomainError);
  EXPECT_THROW(parse_group_spec("dihedral(5)"), DomainError);
  EXPECT_THROW(parse_group_spec("cyclic(5) x"), DomainError);
}

TEST(Orbits, TetrahedralGroupOnOctahedralDirections) {
  const auto g = standard_group(GroupSpec::simplex_symmetry(3), 3);
  const auto p = orbits(g, octahedral_directions(13));
  EXPECT_TRUE(p.stable);
  EXPECT_EQ(p.orbits.size(), 35u);
  std::size_t total = 0;
  for (const auto& o : p.orbits) {
    total += o.size();
    EXPECT_EQ(24u % o.size(), 0u);  // orbit sizes divide |G|
  }
  EXPECT_EQ(total, 678u);
}

TEST(Orbits, UnstableSetFlagged) {
  const auto g = standard_group(GroupSpec::cyclic(3), 2);
  EXPECT_FALSE(orbits(g, circle_points(4)).stable);
  EXPECT_TRUE(orbits(g, circle_points(9, 0.1)).stable);
}

TEST(Symmetrize, DensityBecomesInvariant) {
  const auto g = standard_group(GroupSpec::cube_rotation(3), 3);
  auto f = symmetrize_density(g, [](const Vec& u) { return 1.0 + u[0] + 2.0 * u[1] * u[1]; });
  Rng rng(3);
  for (int t = 0; t < 20; ++t) {
    const Vec u = rng.unit_vector(3);
    for (const auto& e : g.elements()) EXPECT_NEAR(f(e * u), f(u), 1e-13);
  }
}

TEST(PointHashTest, FindsWithinTolerance) {
  PointHash h(3, 1e-9);
  Rng rng(5);
  std::vector<Vec> pts;
  for (int i = 0; i < 200; ++i) {
    pts.push_back(rng.unit_vector(3));
    h.insert(pts.back());
  }
  EXPECT_EQ(h.find(pts[77] + Vec::Constant(3, 1e-11)), 77);
  EXPECT_EQ(h.find(pts[77] + Vec::Constant(3, 1e-6)), -1);
}
