#include "dualmink/solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <sstream>

namespace dualmink {

namespace {

Vec log_vec(const Vec& v) { return v.array().log().matrix(); }
Vec exp_vec(const Vec& v) { return v.array().exp().matrix(); }

double geometric_mean(const Vec& h) { return std::exp(h.array().log().mean()); }

}  // namespace

ProblemSpec make_problem(int n, double p, double q, std::shared_ptr<const OrthogonalGroup> group,
                         std::shared_ptr<const StarBodySpec> q_body,
                         const std::function<double(const Vec&)>& density, std::vector<Vec> directions,
                         std::shared_ptr<const SphericalGrid> grid, bool unsupported_regime) {
  if (!group || !q_body || !grid) throw DomainError("problem needs a group, a star body and a grid");
  if (group->dim() != n || q_body->dim() != n || grid->dim() != n)
    throw DomainError("group, star body and grid must all act on R^" + std::to_string(n));
  ProblemSpec spec;
  spec.n = n;
  spec.p = p;
  spec.q = q;
  spec.q_star = q_star(q, n);
  spec.unsupported_regime = unsupported_regime;
  if (!unsupported_regime) {
    spec.exponent_s = admissible_exponent_s(p, q, n);
  } else if (!(q > 0.0) || p == 0.0 || p == q) {
    throw HypothesisError("unsupported regime still needs q > 0 and p not in {0, q}");
  }
  spec.group = group;
  spec.group_certificate = certify(*group);
  if (spec.group_certificate.has_nonzero_fixed_point)
    throw HypothesisError("G has a nonzero fixed point");

  // G-invariance of Q and of the density on a probe subset of the grid
  const std::size_t stride = std::max<std::size_t>(1, grid->size() / 500);
  for (std::size_t k = 0; k < grid->size(); k += stride) {
    const Vec& u = grid->node(k);
    const double rq = q_body->radial(u);
    const double fu = density(u);
    for (const auto& g : group->elements()) {
      const Vec gu = g * u;
      if (std::abs(q_body->radial(gu) - rq) > 1e-8 * std::max(1.0, rq))
        throw HypothesisError("Q is not G-invariant");
      if (std::abs(density(gu) - fu) > 1e-8 * std::max(1.0, std::abs(fu)))
        throw HypothesisError("density is not G-invariant");
    }
  }
  spec.q_body = q_body;
  spec.directions = std::make_shared<const NormalSet>(std::move(directions));
  spec.partition = orbits(*group, spec.directions->normals());
  if (!spec.partition.stable) throw HypothesisError("direction set is not G-stable");
  spec.grid = grid;
  spec.mu = orbit_averaged(build_measure(density, *grid, *spec.directions), spec.partition);
  return spec;
}

ProblemSpec with_scaled_measure(const ProblemSpec& spec, double factor) {
  if (!(factor > 0.0)) throw DomainError("measure scale factor must be positive");
  ProblemSpec out = spec;
  out.mu.atoms *= factor;
  out.mu.total_mass *= factor;
  return out;
}

std::string to_string(EngineKind kind) {
  switch (kind) {
    case EngineKind::automatic: return "auto";
    case EngineKind::boundary: return "boundary";
    case EngineKind::grid: return "grid";
  }
  return "auto";
}

EngineKind engine_kind_from_string(const std::string& text) {
  if (text == "auto") return EngineKind::automatic;
  if (text == "boundary") return EngineKind::boundary;
  if (text == "grid") return EngineKind::grid;
  throw DomainError("unknown engine '" + text + "' (auto, boundary, grid)");
}

Vec OrbitParametrization::orbit_sizes() const {
  Vec s(static_cast<Eigen::Index>(size()));
  for (std::size_t o = 0; o < size(); ++o)
    s[static_cast<Eigen::Index>(o)] = static_cast<double>(partition.orbits[o].size());
  return s;
}

Vec OrbitParametrization::average(const Vec& full) const {
  return (collapse(full).array() / orbit_sizes().array()).matrix();
}

OrbitParametrization reduce_to_orbits(const ProblemSpec& spec) {
  if (spec.partition.orbit_of.size() != spec.directions->size())
    throw DomainError("orbit partition does not match the direction set");
  return {spec.partition};
}

MeasureEngine make_engine(const ProblemSpec& spec, const SolverConfig& config) {
  switch (config.engine) {
    case EngineKind::boundary:
      if (spec.n > 3) throw DomainError("boundary engine needs n <= 3");
      return MeasureEngine::boundary(config.boundary_rtol);
    case EngineKind::grid: return MeasureEngine::on_grid(*spec.grid);
    case EngineKind::automatic: break;
  }
  return spec.n <= 3 ? MeasureEngine::boundary(config.boundary_rtol) : MeasureEngine::on_grid(*spec.grid);
}

double measure_residual(const SupportPolytope& k, const ProblemSpec& spec) {
  const FacetMeasure c = lp_dual_curvature_measure(k, *spec.q_body, spec.p, spec.q, *spec.grid);
  const Vec diff = collapse_to_orbits(c.totals - spec.mu.atoms, spec.partition);
  return diff.cwiseAbs().sum() / spec.mu.atoms.sum();
}

MinimizeResult minimize_entropy(const ProblemSpec& spec, const SolverConfig& config) {
  if (config.max_iters < 0 || !(config.gradient_tolerance > 0.0) || !(config.initial_step > 0.0) ||
      !(config.shrink > 0.0 && config.shrink < 1.0) || !(config.armijo > 0.0 && config.armijo < 1.0))
    throw DomainError("invalid solver configuration");
  const auto t_start = std::chrono::steady_clock::now();
  const OrbitParametrization param = reduce_to_orbits(spec);
  const Vec sizes = param.orbit_sizes();
  const MeasureEngine engine = make_engine(spec, config);
  const StarBodySpec& qb = *spec.q_body;
  const double p = spec.p;
  const double q = spec.q;

  Vec h0 = Vec::Ones(static_cast<Eigen::Index>(spec.directions->size()));
  if (config.initial_support.size() > 0) {
    if (config.initial_support.size() != h0.size()) throw DomainError("initial support has the wrong size");
    if ((config.initial_support.array() <= 0.0).any()) throw DomainError("initial support must be positive");
    h0 = exp_vec(param.expand(param.average(log_vec(config.initial_support))));
  }
  SupportPolytope k(spec.directions, h0);
  k = k.scaled(std::pow(engine.volume(k, qb, q), -1.0 / q));
  EntropyEval ev = entropy_eval(k, spec.mu, qb, p, q, engine);
  Vec x = param.average(log_vec(k.support_numbers()));

  MinimizeResult res{k, {}, {}, {}, {}, 0.0, 0, false, false, false, false, 0.0, engine.label()};
  const double diameter0 = geometry_stats(k, *spec.grid).diameter;

  Vec s_prev;
  Vec g_prev;
  for (int it = 0;; ++it) {
    const Vec g = param.collapse(ev.log_gradient);
    const double gn = g.norm();
    res.gradient_norm = gn;
    res.phi_trace.push_back(ev.value);
    res.gradient_trace.push_back(gn);
    const double diam = geometry_stats(k, *spec.grid).diameter;
    res.diameter_trace.push_back(diam);
    if (diam > config.diameter_growth_limit * diameter0) res.diameter_flag = true;
    if (config.trace_residual) {
      const double scale = std::pow(ev.moment, 1.0 / (q - p));
      res.residual_trace.push_back(measure_residual(k.scaled(scale), spec));
    }
    if (config.observer) config.observer(IterateInfo{it, &k, &ev});
    res.iterations = it;
    if (gn <= config.gradient_tolerance) {
      res.converged = true;
      break;
    }
    if (it >= config.max_iters) break;

    const Vec d = -(g.array() / sizes.array()).matrix();
    const double dmax = d.cwiseAbs().maxCoeff();
    const double slope = g.dot(d);
    double alpha = config.initial_step / dmax;
    if (s_prev.size() > 0) {
      const Vec y = g - g_prev;
      const double sy = s_prev.dot(y);
      const double ss = (s_prev.array().square() * sizes.array()).sum();
      if (sy > 0.0 && std::isfinite(ss / sy)) alpha = ss / sy;
    }
    alpha = std::min(alpha, config.max_log_step / dmax);

    const double floor = config.h_floor_factor * geometric_mean(k.support_numbers());
    bool accepted = false;
    while (alpha * dmax > 1e-14) {
      const Vec x_trial = x + alpha * d;
      const Vec h_trial = exp_vec(param.expand(x_trial));
      if (h_trial.minCoeff() < floor) {
        res.floor_hit = true;
        alpha *= config.shrink;
        continue;
      }
      SupportPolytope kt = k.with_support(h_trial);
      EntropyEval et;
      try {
        et = entropy_eval(kt, spec.mu, qb, p, q, engine);
      } catch (const DomainError&) {
        alpha *= config.shrink;
        continue;
      }
      if (!std::isfinite(et.value) || et.value > ev.value + config.armijo * alpha * slope) {
        alpha *= config.shrink;
        continue;
      }
      // project back onto V_q = 1; Phi and the log-gradient are scale invariant
      const double t = std::pow(et.volume, -1.0 / q);
      kt = kt.scaled(t);
      et.volume *= std::pow(t, q);
      et.moment *= std::pow(t, p);
      et.curvature.totals *= std::pow(t, q);
      et.gradient /= t;
      s_prev = alpha * d;
      g_prev = g;
      x = x_trial + Vec::Constant(x.size(), std::log(t));
      k = std::move(kt);
      ev = std::move(et);
      accepted = true;
      break;
    }
    if (!accepted) {
      res.line_search_failed = true;
      break;
    }
  }
  res.normalized = k;
  res.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
  return res;
}

SolutionReport assemble_solution(const MinimizeResult& result, const ProblemSpec& spec) {
  const SupportPolytope& kt = result.normalized;
  const Vec& h = kt.support_numbers();
  CompensatedSum lam;
  for (Eigen::Index i = 0; i < h.size(); ++i) lam.add(std::pow(h[i], spec.p) * spec.mu.atoms[i]);
  const double lambda = lam.value();
  if (!std::isfinite(lambda) || !(lambda > 0.0)) throw NumericalError("lambda is not finite and positive");
  const double scale = std::pow(lambda, 1.0 / (spec.q - spec.p));
  SupportPolytope body = kt.scaled(scale);
  const double residual = measure_residual(body, spec);
  return SolutionReport{body,
                        kt,
                        lambda,
                        scale,
                        residual,
                        result.phi_trace,
                        result.gradient_trace,
                        result.diameter_trace,
                        result.residual_trace,
                        result.gradient_norm,
                        result.iterations,
                        result.converged,
                        result.line_search_failed,
                        result.floor_hit,
                        result.diameter_flag,
                        result.wall_time,
                        result.engine_label};
}

EulerLagrangeReport euler_lagrange_check(const SupportPolytope& normalized, double lambda,
                                         const ProblemSpec& spec, const SolverConfig& config,
                                         double quad_tol) {
  const MeasureEngine engine = make_engine(spec, config);
  const FacetMeasure c = engine.curvature(normalized, *spec.q_body, spec.q);
  const Vec& h = normalized.support_numbers();
  const std::size_t m = spec.partition.orbits.size();
  EulerLagrangeReport rep;
  rep.orbit_gaps = Vec::Zero(static_cast<Eigen::Index>(m));
  rep.pass = true;
  for (std::size_t o = 0; o < m; ++o) {
    CompensatedSum mu_o;
    CompensatedSum diff;
    for (int i : spec.partition.orbits[o]) {
      mu_o.add(spec.mu.atoms[i]);
      diff.add(spec.mu.atoms[i] - lambda * c.totals[i] * std::pow(h[i], -spec.p));
    }
    if (!(mu_o.value() > 0.0)) continue;
    const double gap = std::abs(diff.value()) / mu_o.value();
    const double h_o = h[spec.partition.representatives[o]];
    const double allowed =
        std::max(5.0 * config.gradient_tolerance * lambda * std::pow(h_o, -spec.p) / mu_o.value(), quad_tol);
    rep.orbit_gaps[static_cast<Eigen::Index>(o)] = gap;
    rep.max_gap = std::max(rep.max_gap, gap);
    rep.max_ratio = std::max(rep.max_ratio, gap / allowed);
    if (gap > allowed) rep.pass = false;
  }
  return rep;
}

SolutionReport solve(const ProblemSpec& spec, const SolverConfig& config) {
  return assemble_solution(minimize_entropy(spec, config), spec);
}

}  // namespace dualmink
