#include <gtest/gtest.h>

#include "dualmink/dual_measures.hpp"

using namespace dualmink;

namespace {
const SphericalGrid& grid3() {
  static const SphericalGrid g = build_grid(3, 20000, GridScheme::fibonacci_sphere, 1);
  return g;
}
}  // namespace

TEST(DualVolume, EqualsVolumeAtQEqualsN) {
  const SupportPolytope cube = box_polytope(Vec::Ones(3));
  const StarBodySpec ball = StarBodySpec::ball(3);
  EXPECT_NEAR(dual_curvature_via_boundary(cube, ball, 3.0).total(), 8.0, 1e-9);
  EXPECT_NEAR(dual_mixed_volume(cube, ball, 3.0, grid3()), 8.0, 8.0 * 1e-3);
}

TEST(DualVolume, SquareFirstDualVolumeClosedForm) {
  // (1/2) int rho = 4 log(1 + sqrt 2) for [-1,1]^2
  const double exact = 4.0 * std::log(1.0 + std::sqrt(2.0));
  const SupportPolytope sq = box_polytope(Vec::Ones(2));
  const StarBodySpec ball = StarBodySpec::ball(2);
  EXPECT_NEAR(dual_curvature_via_boundary(sq, ball, 1.0).total(), exact, 1e-10);
  const SphericalGrid c = build_grid(2, 20000, GridScheme::uniform_angle);
  EXPECT_NEAR(dual_mixed_volume(sq, ball, 1.0, c), exact, 1e-6);
}

TEST(DualVolume, Homogeneity) {
  Rng rng(3);
  const SupportPolytope k = centered(random_polytope(3, 12, rng));
  const StarBodySpec ball = StarBodySpec::ball(3);
  const StarBodySpec big = StarBodySpec::ball(3, 1.7);
  for (double q : {0.5, 2.0, 3.5}) {
    const double v = dual_curvature_via_boundary(k, ball, q).total();
    EXPECT_NEAR(dual_curvature_via_boundary(k.scaled(1.3), ball, q).total(), std::pow(1.3, q) * v, 1e-9 * v);
    EXPECT_NEAR(dual_curvature_via_boundary(k, big, q).total(), std::pow(1.7, 3.0 - q) * v, 1e-9 * v);
  }
}

TEST(DualCurvature, CubeFacetsShareMassEqually) {
  const auto a = dual_curvature_via_boundary(box_polytope(Vec::Ones(3)), StarBodySpec::ball(3), 2.0);
  for (Eigen::Index i = 0; i < 6; ++i) EXPECT_NEAR(a.totals[i], a.total() / 6.0, 1e-10);
}

TEST(DualCurvature, GeneralStarBodyPathMatchesBallPath) {
  Rng rng(5);
  const SupportPolytope k = centered(random_polytope(3, 10, rng));
  const auto fast = dual_curvature_via_boundary(k, StarBodySpec::ball(3), 1.5, 1e-10);
  const auto general = dual_curvature_via_boundary(k, StarBodySpec::ellipsoid(Mat::Identity(3, 3)), 1.5, 1e-10);
  for (Eigen::Index i = 0; i < fast.totals.size(); ++i)
    EXPECT_NEAR(general.totals[i], fast.totals[i], 1e-7 * fast.total());
}

TEST(DualCurvature, LpWeightedByPowerOfSupport) {
  Rng rng(9);
  const SupportPolytope k = centered(random_polytope(3, 10, rng));
  const StarBodySpec ball = StarBodySpec::ball(3);
  const auto c = dual_curvature_measure(k, ball, 2.0, grid3());
  const auto lp = lp_dual_curvature_measure(k, ball, -0.5, 2.0, grid3());
  for (Eigen::Index i = 0; i < c.totals.size(); ++i)
    EXPECT_NEAR(lp.totals[i], c.totals[i] * std::pow(k.h(static_cast<std::size_t>(i)), 0.5), 1e-12);
}

TEST(Measure, BinningPreservesMass) {
  const NormalSet ns(octahedral_directions(3));
  const MeasureSpec mu = build_measure([](const Vec& u) { return 1.0 + u[2] * u[2]; }, grid3(), ns);
  EXPECT_NEAR(mu.total_mass, 4.0 * M_PI + 4.0 * M_PI / 3.0, 1e-3);
  EXPECT_NEAR(mu.atoms.sum(), mu.total_mass, 1e-10);
  const auto g = standard_group(GroupSpec::simplex_symmetry(3), 3);
  const MeasureSpec avg = orbit_averaged(mu, orbits(g, ns.normals()));
  EXPECT_NEAR(avg.atoms.sum(), mu.total_mass, 1e-10);
  EXPECT_THROW(build_measure([](const Vec&) { return -1.0; }, grid3(), ns), DomainError);
}

TEST(Entropy, GradientMatchesFiniteDifferences) {
  const NormalSet ns(octahedral_directions(3));
  auto normals = std::make_shared<const NormalSet>(ns);
  const MeasureSpec mu = build_measure([](const Vec& u) { return 0.5 + u[0] * u[0]; }, grid3(), ns);
  Rng rng(2);
  Vec h(static_cast<Eigen::Index>(ns.size()));
  for (Eigen::Index i = 0; i < h.size(); ++i) h[i] = rng.uniform(0.95, 1.05);
  const SupportPolytope k(normals, h);
  const StarBodySpec ball = StarBodySpec::ball(3);
  const MeasureEngine e = MeasureEngine::boundary();
  const EntropyEval ev = entropy_eval(k, mu, ball, -0.8, 1.5, e);
  EXPECT_NEAR(ev.log_gradient.sum(), 0.0, 1e-12);
  for (int i : {0, 7, 20, 33}) {
    const double s = 1e-5;
    Vec hp = h, hm = h;
    hp[i] += s;
    hm[i] -= s;
    const double fd = (entropy_value(k.with_support(hp), mu, ball, -0.8, 1.5, e) -
                       entropy_value(k.with_support(hm), mu, ball, -0.8, 1.5, e)) / (2.0 * s);
    EXPECT_NEAR(fd, ev.gradient[i], 1e-5 * std::abs(ev.gradient[i]));
  }
  // scale invariance of the functional
  EXPECT_NEAR(entropy_value(k.scaled(3.0), mu, ball, -0.8, 1.5, e), ev.value, 1e-12);
}

TEST(Orbits, CollapseExpandRoundTrip) {
  const auto g = standard_group(GroupSpec::simplex_symmetry(3), 3);
  const auto p = orbits(g, octahedral_directions(4));
  Vec r(static_cast<Eigen::Index>(p.orbits.size()));
  for (Eigen::Index i = 0; i < r.size(); ++i) r[i] = 1.0 + static_cast<double>(i);
  const Vec full = expand_from_orbits(r, p);
  const Vec back = collapse_to_orbits(full, p);
  for (Eigen::Index i = 0; i < r.size(); ++i)
    EXPECT_NEAR(back[i], r[i] * static_cast<double>(p.orbits[static_cast<std::size_t>(i)].size()), 1e-12);
}

TEST(Engine, Selection) {
  const SphericalGrid g4 = build_grid(4, 100, GridScheme::monte_carlo, 1);
  EXPECT_TRUE(MeasureEngine::automatic(4, g4).uses_grid());
  EXPECT_FALSE(MeasureEngine::automatic(3, grid3()).uses_grid());
}

TEST(Affine, RejectsNonUnimodularMap) {
  const SupportPolytope cube = box_polytope(Vec::Ones(3));
  EXPECT_THROW(affine_invariance_check(cube, StarBodySpec::ball(3), 2.0, 2.0 * Mat::Identity(3, 3),
                                       [](const Vec&) { return 1.0; }, grid3(), grid3()),
               DomainError);
}

TEST(Affine, ShearOfSquareAgrees) {
  Mat phi(2, 2);
  phi << 1.0, 0.4, 0.0, 1.0;
  const SphericalGrid a = build_grid(2, 20000, GridScheme::uniform_angle, 0);
  const AffineCheck r = affine_invariance_check(box_polytope(Vec::Ones(2)), StarBodySpec::ball(2), 1.5, phi,
                                                [](const Vec& u) { return 1.0 + u[0]; }, a, a);
  EXPECT_LT(r.gap, 1e-3);
}
