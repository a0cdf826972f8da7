// Acceptance run: one line per criterion, nonzero exit when any fails.
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <fstream>
#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "dualmink/bounds.hpp"
#include "dualmink/constructions.hpp"
#include "dualmink/solver.hpp"

using namespace dualmink;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = false;
  std::string detail;
};

nlohmann::ordered_json g_report;

std::string fmt(const char* f, ...) __attribute__((format(printf, 1, 2)));
std::string fmt(const char* f, ...) {
  char buf[512];
  va_list ap;
  va_start(ap, f);
  std::vsnprintf(buf, sizeof buf, f, ap);
  va_end(ap);
  return buf;
}

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

// Shared ball problem: T_d on 678 octahedral directions, f = 1/3, p = -1, q = 2.
struct BallCase {
  std::shared_ptr<const OrthogonalGroup> group;
  std::shared_ptr<const StarBodySpec> ball;
  ProblemSpec spec;
  SolverConfig config;
  std::optional<SolutionReport> report;
  double wall = 0.0;
  // per-iterate invariance diagnostics
  double worst_invariance = 0.0;
  double worst_centroid_ratio = 0.0;
  double worst_scale_gap = 0.0;
  double worst_euler = 0.0;
  int observed = 0;
};

constexpr double kBallP = -1.0;
constexpr double kBallQ = 2.0;
constexpr double kBallDensity = 1.0 / 3.0;

std::shared_ptr<const SphericalGrid> fib_grid(int nodes) {
  return std::make_shared<const SphericalGrid>(build_grid(3, nodes, GridScheme::fibonacci_sphere, 1));
}

ProblemSpec ball_problem(const BallCase& c, int nodes) {
  return make_problem(3, kBallP, kBallQ, c.group, c.ball, [](const Vec&) { return kBallDensity; },
                      octahedral_directions(13), fib_grid(nodes));
}

BallCase& ball_case() {
  static BallCase b;
  if (b.report) return b;
  b.group = std::make_shared<const OrthogonalGroup>(standard_group(GroupSpec::simplex_symmetry(3), 3));
  b.ball = std::make_shared<const StarBodySpec>(StarBodySpec::ball(3));
  b.spec = ball_problem(b, 20000);
  const SphericalGrid probe = build_grid(3, 500, GridScheme::fibonacci_sphere, 7);
  const MeasureEngine engine = MeasureEngine::boundary();
  b.config.observer = [probe, engine](const IterateInfo& it) {
    const SupportPolytope& k = *it.body;
    b.worst_invariance = std::max(b.worst_invariance, is_invariant(k, *b.group, probe, 1e-9).max_deviation);
    const GeometryStats st = geometry_stats(k, probe);
    b.worst_centroid_ratio = std::max(b.worst_centroid_ratio, st.centroid.norm() / st.circumradius);
    const double phi2 = entropy_value(k.scaled(2.0), b.spec.mu, *b.ball, kBallP, kBallQ, engine);
    b.worst_scale_gap = std::max(b.worst_scale_gap, std::abs(phi2 - it.eval->value));
    b.worst_euler = std::max(b.worst_euler, std::abs(it.eval->gradient.dot(k.support_numbers())));
    ++b.observed;
  };
  const auto t0 = Clock::now();
  b.report = solve(b.spec, b.config);
  b.wall = seconds_since(t0);
  b.config.observer = nullptr;
  return b;
}

double rms_radial_error(const SupportPolytope& k, const SphericalGrid& grid, double radius) {
  CompensatedSum s;
  for (const auto& u : grid.nodes()) {
    const double d = radial_eval(k, u).rho - radius;
    s.add(d * d);
  }
  return std::sqrt(s.value() / static_cast<double>(grid.size()));
}

Outcome ball_fixed_point() {
  BallCase& c = ball_case();
  const SolutionReport& r = *c.report;
  // Oracle: C(rB, B) = (r^{q-p}/n) du, so n c r^{p-q} = 1 gives r = (n c)^{1/(q-p)}.
  const double radius = std::pow(3.0 * kBallDensity, 1.0 / (kBallQ - kBallP));
  const double rms = rms_radial_error(r.body, *c.spec.grid, radius);
  g_report["ball_fixed_point"] = {{"directions", c.spec.directions->size()},
                                  {"orbits", c.spec.partition.orbits.size()},
                                  {"iterations", r.iterations},
                                  {"rms_radial_error", rms},
                                  {"residual", r.residual},
                                  {"lambda", r.lambda},
                                  {"wall_time_s", c.wall}};
  const bool ok = r.converged && rms <= 0.02 && r.residual <= 0.02 && c.wall <= 120.0;
  return {ok, fmt("%zu directions, %d iterations, rms radial error %.2e, residual %.2e, %.1f s",
                  c.spec.directions->size(), r.iterations, rms, r.residual, c.wall)};
}

Outcome scaling_law() {
  BallCase& c = ball_case();
  const ProblemSpec doubled = with_scaled_measure(c.spec, 2.0);
  const SolutionReport r2 = solve(doubled, c.config);
  const double expected = std::pow(2.0, 1.0 / (kBallQ - kBallP));
  const Vec ratio = r2.body.support_numbers().cwiseQuotient(c.report->body.support_numbers());
  const double worst = (ratio.array() / expected - 1.0).abs().maxCoeff();
  g_report["scaling_law"] = {{"expected_ratio", expected}, {"max_relative_deviation", worst}};
  return {r2.converged && worst <= 0.01,
          fmt("support ratio vs 2^(1/(q-p)) = %.6f: worst relative deviation %.2e", expected, worst)};
}

Outcome gradient_check() {
  auto group = std::make_shared<const OrthogonalGroup>(standard_group(GroupSpec::simplex_symmetry(3), 3));
  auto ball = std::make_shared<const StarBodySpec>(StarBodySpec::ball(3));
  auto density = symmetrize_density(*group, [](const Vec& u) { return 0.3 + std::exp(-(u - Vec::Unit(3, 0)).squaredNorm()); });
  const ProblemSpec spec = make_problem(3, -0.7, 2.5, group, ball, density, octahedral_directions(7), fib_grid(20000));
  const MeasureEngine engine = MeasureEngine::boundary();
  const OrbitParametrization par = reduce_to_orbits(spec);
  Rng rng(2024);
  double worst = 0.0;
  int checked = 0;
  for (int b = 0; b < 5; ++b) {
    Vec reduced(static_cast<Eigen::Index>(par.size()));
    for (Eigen::Index i = 0; i < reduced.size(); ++i) reduced[i] = rng.uniform(0.9, 1.1);
    const SupportPolytope k(spec.directions, par.expand(reduced));
    const Vec an = entropy_gradient(k, spec.mu, *spec.q_body, spec.p, spec.q, engine);
    for (int t = 0; t < 20; ++t) {
      const int i = rng.uniform_int(0, static_cast<int>(k.size()) - 1);
      const double step = 1e-5 * k.h(static_cast<std::size_t>(i));
      Vec hp = k.support_numbers();
      Vec hm = hp;
      hp[i] += step;
      hm[i] -= step;
      const double fd = (entropy_value(k.with_support(hp), spec.mu, *spec.q_body, spec.p, spec.q, engine) -
                         entropy_value(k.with_support(hm), spec.mu, *spec.q_body, spec.p, spec.q, engine)) /
                        (2.0 * step);
      worst = std::max(worst, std::abs(fd - an[i]) / std::abs(an[i]));
      ++checked;
    }
  }
  g_report["gradient_check"] = {{"coordinates", checked}, {"max_relative_error", worst}};
  return {worst <= 1e-4, fmt("%d coordinates on 5 invariant bodies: max relative error %.2e", checked, worst)};
}

// Perturbed regular tetrahedron: random rotation, jittered normals, support numbers in [0.8, 1.2].
SupportPolytope tetrahedron_like(Rng& rng) {
  Mat s(4, 3);
  s << 1, 1, 1, 1, -1, -1, -1, 1, -1, -1, -1, 1;
  for (;;) {
    const Mat rot = haar_orthogonal(3, rng);
    std::vector<Vec> normals;
    for (int i = 0; i < 4; ++i) {
      Vec w = rot * s.row(i).transpose().normalized();
      for (int k = 0; k < 3; ++k) w[k] += 0.05 * rng.normal();
      normals.push_back(w.normalized());
    }
    Vec h(4);
    for (int i = 0; i < 4; ++i) h[i] = rng.uniform(0.8, 1.2);
    try {
      return {std::move(normals), std::move(h)};
    } catch (const DomainError&) {
    }
  }
}

Outcome two_oracles() {
  const SphericalGrid grid = build_grid(3, 20000, GridScheme::fibonacci_sphere, 1);
  const StarBodySpec ball = StarBodySpec::ball(3);
  Rng rng(41);
  double worst = 0.0;
  int facets = 0;
  for (int t = 0; t < 10; ++t) {
    const SupportPolytope k = tetrahedron_like(rng);
    for (double q : {1.0, 2.0, 3.0}) {
      const FacetMeasure a = dual_curvature_via_boundary(k, ball, q);
      const FacetMeasure b = dual_curvature_measure(k, ball, q, grid);
      for (Eigen::Index i = 0; i < a.totals.size(); ++i) {
        if (a.totals[i] == 0.0 && b.totals[i] == 0.0) continue;
        worst = std::max(worst, std::abs(a.totals[i] - b.totals[i]) / std::max(a.totals[i], b.totals[i]));
        ++facets;
      }
    }
  }
  g_report["two_oracles"] = {{"facet_comparisons", facets}, {"max_relative_gap", worst}};
  return {worst <= 0.01, fmt("%d facet comparisons: max relative gap %.3e", facets, worst)};
}

Outcome box_brackets() {
  const std::vector<double> qs = {0.5, 1.0, 1.5, 2.0, 2.5, 3.0, 3.5};
  Rng rng(7);
  int total = 0;
  int passed = 0;
  double min_upper_margin = std::numeric_limits<double>::infinity();
  double min_lower_margin = std::numeric_limits<double>::infinity();
  nlohmann::ordered_json constants = nlohmann::ordered_json::array();
  for (int n : {2, 3, 4}) {
    const SphericalGrid grid = build_grid(n, 20000, default_scheme(n), 1);
    for (int b = 0; b < 100; ++b) {
      Vec a(n);
      for (int i = 0; i < n; ++i) a[i] = std::exp(rng.uniform(0.0, std::log(200.0)));
      const BoxSpec box = BoxSpec::sorted(a);
      for (double q : qs) {
        const BoundsReport r = check_box_bounds(box, q, box_dual_volume_mc(box, q, grid));
        ++total;
        if (r.pass) ++passed;
        min_upper_margin = std::min(min_upper_margin, r.upper / r.observed);
        min_lower_margin = std::min(min_lower_margin, r.observed / r.lower);
        if (b == 0) {
          nlohmann::ordered_json entry = {{"n", n}, {"q", q}, {"branch", r.branch}};
          for (const auto& [name, value] : r.constants) entry[name] = value;
          constants.push_back(entry);
        }
      }
    }
  }
  g_report["box_brackets"] = {{"cases", total},
                              {"passed", passed},
                              {"min_upper_over_observed", min_upper_margin},
                              {"min_observed_over_lower", min_lower_margin},
                              {"constants", constants}};
  return {passed == total, fmt("%d/%d inside; min upper/observed %.3f, min observed/lower %.3f", passed, total,
                               min_upper_margin, min_lower_margin)};
}

Outcome santalo() {
  Rng rng(3);
  int total = 0;
  int passed = 0;
  double lo = std::numeric_limits<double>::infinity();
  double hi = 0.0;
  for (int n : {2, 3}) {
    const SphericalGrid grid = build_grid(n, 20000, default_scheme(n), 1);
    for (int b = 0; b < 100; ++b) {
      const SupportPolytope k = centered(random_polytope(n, rng.uniform_int(n + 3, 30), rng));
      const SantaloReport r = santalo_product(k, grid);
      ++total;
      if (r.centered && r.floor_ok && r.forward_ok) ++passed;
      lo = std::min(lo, r.forward / r.kappa_sq);
      hi = std::max(hi, r.forward / r.kappa_sq);
    }
  }
  g_report["santalo"] = {{"cases", total}, {"passed", passed}, {"product_over_kappa_sq", {lo, hi}}};
  return {passed == total, fmt("%d/%d; V(K)V(K*)/kappa^2 in [%.4f, %.4f]", passed, total, lo, hi)};
}

Outcome dual_product() {
  const StarBodySpec ball = StarBodySpec::ball(3);
  const MeasureEngine engine = MeasureEngine::boundary();
  double scale_gap = 0.0;
  double lo = std::numeric_limits<double>::infinity();
  double hi = 0.0;
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (const char* family : {"needle", "plate"}) {
    for (int k = 0; k <= 4; ++k) {
      const double a = std::pow(10.0, k);
      Vec axes(3);
      if (std::string(family) == "needle") axes << 1.0, 1.0, a;
      else axes << 1.0, a, a;
      const SupportPolytope box = box_polytope(axes);
      const double p0 = bs_dual_product(box, ball, ball, 2.0, 4.0, engine).product;
      for (double lam : {1e-2, 0.5, 3.0, 1e2})
        scale_gap = std::max(scale_gap,
                             std::abs(bs_dual_product(box.scaled(lam), ball, ball, 2.0, 4.0, engine).product / p0 - 1.0));
      lo = std::min(lo, p0);
      hi = std::max(hi, p0);
      rows.push_back({{"family", family}, {"aspect", a}, {"product", p0}});
    }
  }
  const double theta = std::max(hi, 1.0 / lo);
  g_report["dual_product"] = {{"q", 2.0}, {"r", 4.0}, {"scale_gap", scale_gap}, {"theta_hat", theta}, {"rows", rows}};
  const bool ok = scale_gap <= 1e-10 && lo > 0.0 && std::isfinite(hi);
  return {ok, fmt("scale gap %.1e; products in [%.4f, %.4f] within [1/theta, theta], theta = %.4f", scale_gap, lo, hi,
                  theta)};
}

Outcome invariance_suite() {
  BallCase& c = ball_case();
  const auto g3 = standard_group(GroupSpec::simplex_symmetry(3), 3);
  const SphericalGrid probe3 = build_grid(3, 500, GridScheme::fibonacci_sphere, 3);
  Vec c3(3);
  c3 << 0.5, 0.0, 0.0;
  const SupportPolytope base3 = shifted_ball_polytope(octahedral_directions(5), c3, 2.0);
  const auto g2 = standard_group(GroupSpec::cyclic(3), 2);
  const SphericalGrid probe2 = build_grid(2, 2000, GridScheme::uniform_angle, 1);
  Vec c2(2);
  c2 << -0.3, 0.0;
  const SupportPolytope base2 = shifted_ball_polytope(circle_points(64, 0.013), c2, 1.0);
  double cons_dev = 0.0;
  double cons_cent = 0.0;
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    for (int variant = 0; variant < 2; ++variant) {
      const ConstructionResult r = variant == 0 ? orbit_intersection_body(g3, base3, probe3, seed)
                                                : orbit_intersection_body_circum(g2, base2, probe2, seed);
      const SphericalGrid& probe = variant == 0 ? probe3 : probe2;
      const OrthogonalGroup& g = variant == 0 ? g3 : g2;
      cons_dev = std::max(cons_dev, is_invariant(r.body, g, probe, 1e-9).max_deviation);
      const GeometryStats st = geometry_stats(r.body, probe);
      cons_cent = std::max(cons_cent, st.centroid.norm() / st.circumradius);
    }
  }
  const double dev = std::max(c.worst_invariance, cons_dev);
  const double cent = std::max(c.worst_centroid_ratio, cons_cent);
  g_report["invariance_suite"] = {{"iterates", c.observed},
                                  {"iterate_invariance", c.worst_invariance},
                                  {"iterate_centroid_ratio", c.worst_centroid_ratio},
                                  {"phi_scale_gap", c.worst_scale_gap},
                                  {"euler_identity", c.worst_euler},
                                  {"construction_invariance", cons_dev},
                                  {"construction_centroid_ratio", cons_cent}};
  const bool ok = c.observed > 0 && dev <= 1e-9 && cent <= 1e-3 && c.worst_scale_gap <= 1e-10 && c.worst_euler <= 1e-9;
  return {ok, fmt("%d iterates + 10 constructions: invariance %.1e, centroid/circumradius %.1e, "
                  "phi scale gap %.1e, <grad phi, h> %.1e",
                  c.observed, dev, cent, c.worst_scale_gap, c.worst_euler)};
}

Outcome construction_certificates() {
  const auto g = standard_group(GroupSpec::simplex_symmetry(3), 3);
  const SphericalGrid probe = build_grid(3, 500, GridScheme::fibonacci_sphere, 3);
  Vec c(3);
  c << 0.5, 0.0, 0.0;
  const SupportPolytope base = shifted_ball_polytope(octahedral_directions(5), c, 2.0);
  int certified = 0;
  double min_gap = std::numeric_limits<double>::infinity();
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    const ConstructionResult r = orbit_intersection_body(g, base, probe, seed);
    if (r.certificate.non_symmetric) ++certified;
    min_gap = std::min(min_gap, r.certificate.max_gap);
  }
  struct Dv {
    GroupSpec spec;
    int n;
  };
  bool coverage_ok = true;
  std::string cov;
  nlohmann::ordered_json covj = nlohmann::ordered_json::array();
  Rng zr(99);
  for (const Dv& d : {Dv{GroupSpec::cyclic(3), 2}, Dv{GroupSpec::cyclic(5), 2}, Dv{GroupSpec::simplex_symmetry(3), 3}}) {
    const auto group = standard_group(d.spec, d.n);
    const DirichletCone cone = dirichlet_voronoi_cone(group, zr.unit_vector(d.n));
    const CoverageReport r = voronoi_coverage(group, cone, 10000, 5);
    coverage_ok = coverage_ok && r.pass();
    cov += fmt(" %s %d/%d overlaps %d;", group.label().c_str(), r.covered, r.samples, r.overlaps);
    covj.push_back({{"group", group.label()}, {"covered", r.covered}, {"samples", r.samples}, {"overlaps", r.overlaps}});
  }
  g_report["construction_certificates"] = {
      {"seeds", 100}, {"certified", certified}, {"min_gap", min_gap}, {"coverage", covj}};
  return {certified >= 95 && coverage_ok,
          fmt("%d/100 certified non-symmetric (min gap %.3f);", certified, min_gap) + cov};
}

Outcome exponents() {
  double worst = 0.0;
  bool gate = true;
  int pairs = 0;
  for (int n : {2, 3, 4}) {
    for (double q : {1.1, 1.5, 2.0, M_E, 3.0, 10.0}) {
      const double qs = q_star(q, n);
      if (!std::isfinite(qs)) continue;
      const double back = q_star(qs, n);
      if (std::isfinite(back)) {
        worst = std::max(worst, std::abs(back - q) / q);
        ++pairs;
      }
      bool rejected = false;
      try {
        admissible_exponent_s(-qs, q, n);
      } catch (const HypothesisError&) {
        rejected = true;
      }
      bool accepted = true;
      try {
        admissible_exponent_s(-qs + 1e-6, q, n);
      } catch (const HypothesisError&) {
        accepted = false;
      }
      gate = gate && rejected && accepted;
    }
  }
  g_report["exponents"] = {{"pairs", pairs}, {"max_involution_error", worst}, {"gate", gate}};
  return {worst <= 1e-12 && gate && pairs > 0,
          fmt("%d involution pairs, max error %.1e; p gate %s", pairs, worst, gate ? "correct" : "wrong")};
}

Outcome affine_invariance() {
  Rng rng(11);
  double worst = 0.0;
  int tuples = 0;
  for (int n : {2, 3}) {
    const SphericalGrid ga = build_grid(n, 20000, default_scheme(n), 1);
    const SphericalGrid gb = build_grid(n, 20000, default_scheme(n), 2);
    for (int t = 0; t < 5; ++t) {
      const SupportPolytope k = centered(random_polytope(n, n == 2 ? 7 : 12, rng));
      Mat m = Mat::Identity(n, n);
      for (int i = 0; i < n; ++i) m(i, i) = rng.uniform(0.7, 1.4);
      const StarBodySpec q_body = StarBodySpec::ellipsoid(haar_orthogonal(n, rng) * m);
      Mat d = Mat::Identity(n, n);
      for (int i = 0; i < n; ++i) d(i, i) = std::exp(rng.uniform(-0.5, 0.5));
      Mat phi = haar_orthogonal(n, rng) * d * haar_orthogonal(n, rng);
      if (phi.determinant() < 0.0) phi.col(0) *= -1.0;
      phi /= std::pow(phi.determinant(), 1.0 / n);
      const Vec a = rng.unit_vector(n);
      const double q = rng.uniform(0.5, 3.0);
      const AffineCheck r = affine_invariance_check(
          k, q_body, q, phi, [a](const Vec& u) { return 1.0 + 0.5 * std::pow(a.dot(u), 2); }, ga, gb);
      worst = std::max(worst, r.gap);
      ++tuples;
    }
  }
  g_report["affine_invariance"] = {{"tuples", tuples}, {"max_gap", worst}};
  return {worst <= 0.02, fmt("%d tuples: max relative gap %.2e", tuples, worst)};
}

Outcome grid_refinement() {
  BallCase& c = ball_case();
  const ProblemSpec fine = ball_problem(c, 80000);
  const SolutionReport r = solve(fine, c.config);
  const double ratio = c.report->residual / r.residual;
  g_report["grid_refinement"] = {{"residual_20000", c.report->residual}, {"residual_80000", r.residual}, {"reduction", ratio}};
  return {r.converged && ratio >= 1.5,
          fmt("residual %.2e at 20000 nodes, %.2e at 80000: reduction %.2fx", c.report->residual, r.residual, ratio)};
}

}  // namespace

int main(int argc, char** argv) {
  const std::string report_path = argc > 1 ? argv[1] : "acceptance_report.json";
  struct Criterion {
    const char* name;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria = {
      {"ball fixed point", ball_fixed_point},
      {"scaling law", scaling_law},
      {"gradient vs finite differences", gradient_check},
      {"two-oracle curvature agreement", two_oracles},
      {"box brackets", box_brackets},
      {"Santalo sandwich", santalo},
      {"dual product boundedness", dual_product},
      {"invariance suite", invariance_suite},
      {"construction certificates", construction_certificates},
      {"exponent arithmetic", exponents},
      {"affine invariance", affine_invariance},
      {"grid refinement", grid_refinement},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto t0 = Clock::now();
    Outcome o;
    try {
      o = criteria[i].run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failed;
    std::printf("%s %2zu %s: %s (%.1f s)\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].name, o.detail.c_str(),
                seconds_since(t0));
    std::fflush(stdout);
  }
  std::printf("%zu/%zu criteria passed\n", criteria.size() - static_cast<std::size_t>(failed), criteria.size());
  std::ofstream(report_path) << g_report.dump(2) << "\n";
  return failed == 0 ? 0 : 1;
}
