#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "dualmink/bodies.hpp"
#include "dualmink/bounds.hpp"
#include "dualmink/dual_measures.hpp"
#include "dualmink/groups.hpp"
#include "dualmink/sphere_quadrature.hpp"

namespace dualmink {

/// Everything needed to pose C_{p,q}(K, Q; .) = mu over G-invariant bodies.
struct ProblemSpec {
  int n = 0;
  double p = 0.0;
  double q = 0.0;
  double q_star = 0.0;
  AdmissibleS exponent_s;
  bool unsupported_regime = false;
  std::shared_ptr<const OrthogonalGroup> group;
  GroupCertificate group_certificate;
  std::shared_ptr<const StarBodySpec> q_body;
  MeasureSpec mu;  // orbit-averaged
  std::shared_ptr<const NormalSet> directions;
  OrbitPartition partition;
  std::shared_ptr<const SphericalGrid> grid;  // builds mu, measures residuals
};

/// Validates every hypothesis and builds mu from the density on the grid.
/// Throws HypothesisError naming the failed condition (p range, fixed point,
/// G-invariance of Q or of the density, non-stable directions). With
/// unsupported_regime the p range check is skipped.
ProblemSpec make_problem(int n, double p, double q, std::shared_ptr<const OrthogonalGroup> group,
                         std::shared_ptr<const StarBodySpec> q_body,
                         const std::function<double(const Vec&)>& density, std::vector<Vec> directions,
                         std::shared_ptr<const SphericalGrid> grid, bool unsupported_regime = false);

/// Same problem with every atom of mu multiplied by factor.
ProblemSpec with_scaled_measure(const ProblemSpec& spec, double factor);

enum class EngineKind { automatic, boundary, grid };
std::string to_string(EngineKind kind);
EngineKind engine_kind_from_string(const std::string& text);

struct IterateInfo {
  int iteration = 0;
  const SupportPolytope* body = nullptr;  // normalized iterate
  const EntropyEval* eval = nullptr;
};

struct SolverConfig {
  int max_iters = 400;
  double gradient_tolerance = 1e-7;
  double initial_step = 0.1;
  double shrink = 0.5;
  double armijo = 1e-4;
  double max_log_step = 0.5;
  double h_floor_factor = 1e-6;  // times the geometric mean of the iterate
  double diameter_growth_limit = 10.0;
  bool trace_residual = true;
  EngineKind engine = EngineKind::automatic;
  double boundary_rtol = 1e-12;
  std::uint64_t seed = 0;
  Vec initial_support;  // empty: ball-like start
  std::function<void(const IterateInfo&)> observer;
};

/// Orbit-constant parametrization of support vectors.
struct OrbitParametrization {
  OrbitPartition partition;
  [[nodiscard]] std::size_t size() const { return partition.orbits.size(); }
  [[nodiscard]] Vec expand(const Vec& reduced) const { return expand_from_orbits(reduced, partition); }
  [[nodiscard]] Vec collapse(const Vec& full) const { return collapse_to_orbits(full, partition); }
  [[nodiscard]] Vec orbit_sizes() const;
  /// Orbit means of a full vector.
  [[nodiscard]] Vec average(const Vec& full) const;
};

OrbitParametrization reduce_to_orbits(const ProblemSpec& spec);

MeasureEngine make_engine(const ProblemSpec& spec, const SolverConfig& config);

struct MinimizeResult {
  SupportPolytope normalized;  // V_q = 1
  std::vector<double> phi_trace;
  std::vector<double> gradient_trace;
  std::vector<double> diameter_trace;
  std::vector<double> residual_trace;
  double gradient_norm = 0.0;
  int iterations = 0;
  bool converged = false;
  bool line_search_failed = false;
  bool floor_hit = false;
  bool diameter_flag = false;
  double wall_time = 0.0;
  std::string engine_label;
};

MinimizeResult minimize_entropy(const ProblemSpec& spec, const SolverConfig& config);

struct SolutionReport {
  SupportPolytope body;        // solves the measure equation
  SupportPolytope normalized;  // V_q = 1 minimizer
  double lambda = 0.0;
  double scale = 0.0;  // lambda^{1/(q-p)}
  double residual = 0.0;
  std::vector<double> phi_trace;
  std::vector<double> gradient_trace;
  std::vector<double> diameter_trace;
  std::vector<double> residual_trace;
  double gradient_norm = 0.0;
  int iterations = 0;
  bool converged = false;
  bool line_search_failed = false;
  bool floor_hit = false;
  bool diameter_flag = false;
  double wall_time = 0.0;
  std::string engine_label;
};

/// Orbit-binned relative l1 gap between the grid atoms of C_{p,q}(K, Q; .)
/// and mu.
double measure_residual(const SupportPolytope& k, const ProblemSpec& spec);

SolutionReport assemble_solution(const MinimizeResult& result, const ProblemSpec& spec);

struct EulerLagrangeReport {
  double max_gap = 0.0;   // max over orbits with mu > 0
  double max_ratio = 0.0; // max gap / allowed
  bool pass = false;
  Vec orbit_gaps;
};

/// Orbit-wise |sum (mu_i - lambda C_{q,i} h_i^{-p})| / sum mu_i at a normalized
/// body. Allowed gap per orbit: max(5 tol lambda h_o^{-p} / mu_o, quad_tol).
EulerLagrangeReport euler_lagrange_check(const SupportPolytope& normalized, double lambda,
                                         const ProblemSpec& spec, const SolverConfig& config,
                                         double quad_tol = 1e-9);

/// Convenience: minimize then assemble.
SolutionReport solve(const ProblemSpec& spec, const SolverConfig& config);

}  // namespace dualmink
