#include <gtest/gtest.h>

#include "dualmink/solver.hpp"

using namespace dualmink;

namespace {

struct Plane {
  std::shared_ptr<const OrthogonalGroup> group =
      std::make_shared<const OrthogonalGroup>(standard_group(GroupSpec::cyclic(3), 2));
  std::shared_ptr<const StarBodySpec> ball = std::make_shared<const StarBodySpec>(StarBodySpec::ball(2));
  std::shared_ptr<const SphericalGrid> grid =
      std::make_shared<const SphericalGrid>(build_grid(2, 20000, GridScheme::uniform_angle, 0));
};

}  // namespace

TEST(Problem, HypothesesEnforced) {
  Plane s;
  auto one = [](const Vec&) { return 1.0; };
  EXPECT_THROW(make_problem(2, -4.0, 1.5, s.group, s.ball, one, circle_points(60), s.grid), HypothesisError);
  EXPECT_THROW(make_problem(2, 0.3, 1.5, s.group, s.ball, one, circle_points(60), s.grid), HypothesisError);
  EXPECT_NO_THROW(make_problem(2, 0.3, 1.5, s.group, s.ball, one, circle_points(60), s.grid, true));
  // density not invariant under rotation by 2 pi / 3
  EXPECT_THROW(make_problem(2, -0.5, 1.5, s.group, s.ball, [](const Vec& u) { return 2.0 + u[0]; }, circle_points(60),
                            s.grid),
               HypothesisError);
  // direction set not stable
  EXPECT_THROW(make_problem(2, -0.5, 1.5, s.group, s.ball, one, circle_points(64), s.grid), HypothesisError);
  // Q not invariant
  Mat m = Mat::Identity(2, 2);
  m(0, 0) = 2.0;
  auto ell = std::make_shared<const StarBodySpec>(StarBodySpec::ellipsoid(m));
  EXPECT_THROW(make_problem(2, -0.5, 1.5, s.group, ell, one, circle_points(60), s.grid), HypothesisError);
  // group with a fixed axis
  Mat r = Mat::Identity(2, 2);
  r(1, 1) = -1.0;
  auto reflection = std::make_shared<const OrthogonalGroup>(enumerate_group({r}, 4));
  EXPECT_THROW(make_problem(2, -0.5, 1.5, reflection, s.ball, one, circle_points(60), s.grid), HypothesisError);
}

TEST(Problem, MeasureScalingAndOrbits) {
  Plane s;
  const ProblemSpec spec =
      make_problem(2, -0.5, 1.5, s.group, s.ball, [](const Vec&) { return 0.8; }, circle_points(60), s.grid);
  EXPECT_NEAR(spec.mu.total_mass, 0.8 * 2.0 * M_PI, 1e-9);
  EXPECT_NEAR(with_scaled_measure(spec, 3.0).mu.total_mass, 3.0 * spec.mu.total_mass, 1e-9);
  const OrbitParametrization par = reduce_to_orbits(spec);
  EXPECT_EQ(par.size(), 20u);
  EXPECT_NEAR(par.orbit_sizes().sum(), 60.0, 0.0);
}

TEST(Engine, Names) {
  for (EngineKind k : {EngineKind::automatic, EngineKind::boundary, EngineKind::grid})
    EXPECT_EQ(engine_kind_from_string(to_string(k)), k);
  EXPECT_THROW(engine_kind_from_string("exact"), DomainError);
}

// Regular N-gon with h = r against B^2: each atom is (1/2) r^q int_{-pi/N}^{pi/N} sec^q,
// while an evenly binned constant density gives c 2 pi / N per normal.
double regular_polygon_radius(int count, double c, double p, double q) {
  const double t = M_PI / count;
  const int m = 20000;
  double simpson = 0.0;
  for (int j = 0; j <= m; ++j) {
    const double x = -t + 2.0 * t * j / m;
    const double w = (j == 0 || j == m) ? 1.0 : (j % 2 == 1 ? 4.0 : 2.0);
    simpson += w * std::pow(1.0 / std::cos(x), q);
  }
  simpson *= 2.0 * t / m / 3.0;
  return std::pow(c * 2.0 * M_PI / count / (0.5 * simpson), 1.0 / (q - p));
}

TEST(Solve, PlaneRegularPolygonFixedPoint) {
  Plane s;
  const int count = 90;
  const double c = 0.8;
  const double p = -0.5;
  const double q = 1.5;
  // 200 grid nodes per normal, bin boundaries between nodes
  auto grid = std::make_shared<const SphericalGrid>(build_grid(2, 200 * count, GridScheme::uniform_angle, 0));
  const ProblemSpec spec = make_problem(2, p, q, s.group, s.ball, [c](const Vec&) { return c; },
                                        circle_points(count, M_PI / (200 * count)), grid);
  const SolutionReport r = solve(spec, SolverConfig{});
  ASSERT_TRUE(r.converged);
  const double radius = regular_polygon_radius(count, c, p, q);
  EXPECT_NEAR(radius, std::pow(2.0 * c, 1.0 / (q - p)), 1e-3);  // close to the ball solution
  for (std::size_t i = 0; i < r.body.size(); ++i) EXPECT_NEAR(r.body.h(i), radius, 1e-6);
  EXPECT_NEAR(r.scale, std::pow(r.lambda, 1.0 / (q - p)), 1e-12);
  EXPECT_LT(r.residual, 0.01);
  EXPECT_TRUE(euler_lagrange_check(r.normalized, r.lambda, spec, SolverConfig{}).pass);
  for (std::size_t i = 1; i < r.phi_trace.size(); ++i) EXPECT_LE(r.phi_trace[i], r.phi_trace[i - 1] + 1e-14);
}

TEST(Solve, NonUniformDensityConverges) {
  auto group = std::make_shared<const OrthogonalGroup>(standard_group(GroupSpec::cube_rotation(3), 3));
  auto ball = std::make_shared<const StarBodySpec>(StarBodySpec::ball(3));
  auto grid = std::make_shared<const SphericalGrid>(build_grid(3, 20000, GridScheme::fibonacci_sphere, 1));
  auto f = symmetrize_density(*group, [](const Vec& u) { return 0.2 + std::exp(-4.0 * (u - Vec::Unit(3, 2)).squaredNorm()); });
  const ProblemSpec spec = make_problem(3, -0.5, 2.5, group, ball, f, octahedral_directions(4), grid);
  SolverConfig cfg;
  cfg.boundary_rtol = 1e-10;
  const SolutionReport r = solve(spec, cfg);
  ASSERT_TRUE(r.converged);
  EXPECT_LT(r.residual, 0.05);
  EXPECT_TRUE(euler_lagrange_check(r.normalized, r.lambda, spec, cfg).pass);
  const SphericalGrid probe = build_grid(3, 300, GridScheme::fibonacci_sphere, 5);
  EXPECT_LE(is_invariant(r.body, *group, probe, 1e-9).max_deviation, 1e-9);
}

TEST(Solve, ObserverSeesNormalizedIterates) {
  Plane s;
  const ProblemSpec spec =
      make_problem(2, -0.5, 1.5, s.group, s.ball, [](const Vec& u) { return 1.0 + 0.3 * std::pow(u[0], 3) - 0.9 * u[0] * u[1] * u[1]; },
                   circle_points(60), s.grid);
  SolverConfig cfg;
  int calls = 0;
  double worst = 0.0;
  cfg.observer = [&](const IterateInfo& it) {
    ++calls;
    worst = std::max(worst, std::abs(it.eval->volume - 1.0));
  };
  const MinimizeResult r = minimize_entropy(spec, cfg);
  EXPECT_GT(calls, 0);
  EXPECT_LT(worst, 1e-10);
  EXPECT_TRUE(r.converged);
}
