#include "dualmink/io.hpp"

#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>

#include "dualmink/bounds.hpp"
#include "dualmink/constructions.hpp"

namespace dualmink {

namespace fs = std::filesystem;

namespace {

// ---- schema helpers ----

const Json& require(const Json& j, const std::string& key, const std::string& where) {
  if (!j.is_object()) throw SchemaError(where + ": expected an object");
  auto it = j.find(key);
  if (it == j.end()) throw SchemaError(where + "." + key + ": missing");
  return *it;
}

double as_number(const Json& v, const std::string& where) {
  if (!v.is_number()) throw SchemaError(where + ": expected a number");
  return v.get<double>();
}

int as_int(const Json& v, const std::string& where) {
  if (!v.is_number_integer()) throw SchemaError(where + ": expected an integer");
  return v.get<int>();
}

std::string as_string(const Json& v, const std::string& where) {
  if (!v.is_string()) throw SchemaError(where + ": expected a string");
  return v.get<std::string>();
}

bool as_bool(const Json& v, const std::string& where) {
  if (!v.is_boolean()) throw SchemaError(where + ": expected true or false");
  return v.get<bool>();
}

double number_or(const Json& j, const std::string& key, double fallback, const std::string& where) {
  auto it = j.find(key);
  return it == j.end() ? fallback : as_number(*it, where + "." + key);
}

int int_or(const Json& j, const std::string& key, int fallback, const std::string& where) {
  auto it = j.find(key);
  return it == j.end() ? fallback : as_int(*it, where + "." + key);
}

bool bool_or(const Json& j, const std::string& key, bool fallback, const std::string& where) {
  auto it = j.find(key);
  return it == j.end() ? fallback : as_bool(*it, where + "." + key);
}

std::string string_or(const Json& j, const std::string& key, const std::string& fallback,
                      const std::string& where) {
  auto it = j.find(key);
  return it == j.end() ? fallback : as_string(*it, where + "." + key);
}

Vec as_vec(const Json& v, const std::string& where) {
  if (!v.is_array() || v.empty()) throw SchemaError(where + ": expected a non-empty array of numbers");
  Vec out(static_cast<Eigen::Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i)
    out[static_cast<Eigen::Index>(i)] = as_number(v[i], where + "[" + std::to_string(i) + "]");
  return out;
}

Mat as_mat(const Json& v, const std::string& where) {
  if (!v.is_array() || v.empty()) throw SchemaError(where + ": expected an array of rows");
  const auto rows = static_cast<Eigen::Index>(v.size());
  const Vec first = as_vec(v[0], where + "[0]");
  Mat m(rows, first.size());
  for (Eigen::Index r = 0; r < rows; ++r) {
    const Vec row = as_vec(v[static_cast<std::size_t>(r)], where + "[" + std::to_string(r) + "]");
    if (row.size() != first.size()) throw SchemaError(where + ": ragged matrix");
    m.row(r) = row.transpose();
  }
  return m;
}

std::vector<double> as_number_list(const Json& v, const std::string& where) {
  if (!v.is_array() || v.empty()) throw SchemaError(where + ": expected a non-empty array");
  std::vector<double> out;
  for (std::size_t i = 0; i < v.size(); ++i) out.push_back(as_number(v[i], where + "[" + std::to_string(i) + "]"));
  return out;
}

std::vector<int> as_int_list(const Json& v, const std::string& where) {
  if (!v.is_array() || v.empty()) throw SchemaError(where + ": expected a non-empty array");
  std::vector<int> out;
  for (std::size_t i = 0; i < v.size(); ++i) out.push_back(as_int(v[i], where + "[" + std::to_string(i) + "]"));
  return out;
}

OrderedJson vec_json(const Vec& v) {
  OrderedJson a = OrderedJson::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

OrderedJson mat_json(const Mat& m) {
  OrderedJson a = OrderedJson::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) a.push_back(vec_json(m.row(r).transpose()));
  return a;
}

// Non-finite values are written as strings so the JSON stays valid.
OrderedJson number_json(double x) {
  if (std::isfinite(x)) return x;
  if (std::isnan(x)) return "nan";
  return x > 0 ? "inf" : "-inf";
}

std::string csv_number(double x) {
  std::ostringstream os;
  os << std::setprecision(17) << x;
  return os.str();
}

std::string utc_stamp() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  std::ostringstream os;
  os << std::put_time(&tm, "%Y%m%dT%H%M%SZ");
  return os.str();
}

OrderedJson manifest_head(const std::string& command, const RunDir& dir) {
  OrderedJson m;
  m["tool"] = "dualmink";
  m["version"] = kToolVersion;
  m["command"] = command;
  m["run"] = dir.name;
  m["created"] = utc_stamp();
  return m;
}

OrderedJson grid_json(const SphericalGrid& g) {
  OrderedJson j;
  j["scheme"] = to_string(g.scheme());
  j["nodes"] = g.size();
  j["seed"] = g.seed();
  return j;
}

OrderedJson exponents_json(double p, double q, int n) {
  OrderedJson j;
  j["q"] = q;
  j["q_star"] = number_json(q_star(q, n));
  if (!std::isnan(p)) {
    j["p"] = p;
    const AdmissibleS s = admissible_exponent_s(p, q, n);
    j["s"] = s.any_s ? OrderedJson("any s > 1") : OrderedJson(s.s);
  }
  return j;
}

class CsvWriter {
 public:
  CsvWriter(const fs::path& path, const std::vector<std::string>& header) : out_(path) {
    if (!out_) throw IoError("cannot write " + path.string());
    row(header);
  }
  void row(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) out_ << (i ? "," : "") << cells[i];
    out_ << "\n";
  }

 private:
  std::ofstream out_;
};

}  // namespace

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const HypothesisError*>(&e) != nullptr) return kExitHypothesis;
  if (dynamic_cast<const DomainError*>(&e) != nullptr) return kExitSchema;
  if (dynamic_cast<const Json::exception*>(&e) != nullptr) return kExitSchema;
  if (dynamic_cast<const NumericalError*>(&e) != nullptr) return kExitNonConvergence;
  return kExitIo;
}

Json read_json_file(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw SchemaError(path.string() + ": " + e.what());
  }
}

void write_text_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  out << text;
  if (!out) throw IoError("write failed: " + path.string());
}

void write_json_file(const fs::path& path, const OrderedJson& j) { write_text_file(path, j.dump(2) + "\n"); }

RunDir create_run_dir(const fs::path& root, const std::string& command) {
  std::error_code ec;
  fs::create_directories(root, ec);
  if (ec) throw IoError("cannot create " + root.string() + ": " + ec.message());
  const std::string stamp = utc_stamp();
  for (int k = 0; k < 1000; ++k) {
    std::ostringstream name;
    name << command << "-" << stamp << "-" << std::setw(3) << std::setfill('0') << k;
    const fs::path p = root / name.str();
    if (fs::create_directory(p, ec)) return {p, name.str()};
    if (ec) throw IoError("cannot create " + p.string() + ": " + ec.message());
  }
  throw IoError("no free run directory under " + root.string());
}

// ---- bodies ----------------------------------------------------------------------------

OrderedJson body_to_json(const SupportPolytope& k, const std::string& description) {
  OrderedJson j;
  j["format"] = "dualmink-body";
  j["version"] = 1;
  j["dim"] = k.dim();
  j["count"] = k.size();
  j["description"] = description;
  OrderedJson normals = OrderedJson::array();
  for (const auto& v : k.normals()) normals.push_back(vec_json(v));
  j["normals"] = std::move(normals);
  j["support"] = vec_json(k.support_numbers());
  return j;
}

SupportPolytope body_from_json(const Json& j) {
  const std::string where = "body";
  if (string_or(j, "format", "", where) != "dualmink-body") throw SchemaError("body.format: expected dualmink-body");
  const int n = as_int(require(j, "dim", where), "body.dim");
  const Json& normals = require(j, "normals", where);
  if (!normals.is_array()) throw SchemaError("body.normals: expected an array");
  std::vector<Vec> vs;
  for (std::size_t i = 0; i < normals.size(); ++i) {
    Vec v = as_vec(normals[i], "body.normals[" + std::to_string(i) + "]");
    if (v.size() != n) throw SchemaError("body.normals: wrong dimension");
    vs.push_back(v / v.norm());
  }
  Vec h = as_vec(require(j, "support", where), "body.support");
  if (static_cast<std::size_t>(h.size()) != vs.size()) throw SchemaError("body.support: count mismatch");
  return {std::move(vs), std::move(h)};
}

std::string mesh_obj(const SupportPolytope& k) {
  if (k.dim() != 3) throw DomainError("mesh export requires n = 3, body has n = " + std::to_string(k.dim()));
  const FacetComplex& fc = k.facets();
  std::ostringstream os;
  os << std::setprecision(17);
  os << "# dualmink mesh: " << fc.vertices.size() << " vertices\n";
  for (const auto& v : fc.vertices) os << "v " << v[0] << " " << v[1] << " " << v[2] << "\n";
  for (const auto& ids : fc.facet_vertex_ids) {
    if (ids.size() < 3) continue;
    os << "f";
    for (int id : ids) os << " " << id + 1;
    os << "\n";
  }
  return os.str();
}

// ---- config pieces -----------------------------------------------------------------------

GridChoice parse_grid(const Json& j, int n, std::size_t default_nodes) {
  const std::string where = "grid";
  const Json empty = Json::object();
  const Json& g = j.is_null() ? empty : j;
  const GridScheme scheme = g.contains("scheme")
                                ? grid_scheme_from_string(as_string(g["scheme"], where + ".scheme"))
                                : default_scheme(n);
  const int nodes = int_or(g, "nodes", static_cast<int>(default_nodes), where);
  const int seed = int_or(g, "seed", 1, where);
  if (nodes < 1) throw SchemaError("grid.nodes: must be positive");
  if (seed < 0) throw SchemaError("grid.seed: must be nonnegative");
  GridChoice out;
  out.grid = std::make_shared<const SphericalGrid>(build_grid(n, nodes, scheme, static_cast<std::uint64_t>(seed)));
  out.resolved = grid_json(*out.grid);
  return out;
}

std::vector<Vec> parse_directions(const Json& j, int n, const OrthogonalGroup* group, OrderedJson& resolved) {
  const std::string where = "directions";
  const std::string type = as_string(require(j, "type", where), where + ".type");
  resolved["type"] = type;
  if (type == "octahedral") {
    if (n != 3) throw SchemaError("directions.type octahedral needs n = 3");
    const int k = int_or(j, "k", 13, where);
    resolved["k"] = k;
    return octahedral_directions(k);
  }
  if (type == "icosahedral") {
    if (n != 3) throw SchemaError("directions.type icosahedral needs n = 3");
    const int f = int_or(j, "frequency", 8, where);
    resolved["frequency"] = f;
    return icosahedral_directions(f);
  }
  if (type == "fibonacci") {
    if (n != 3) throw SchemaError("directions.type fibonacci needs n = 3");
    const int c = int_or(j, "count", 500, where);
    resolved["count"] = c;
    return fibonacci_points(c);
  }
  if (type == "circle") {
    if (n != 2) throw SchemaError("directions.type circle needs n = 2");
    const int c = int_or(j, "count", 96, where);
    const double off = number_or(j, "offset", 0.0, where);
    resolved["count"] = c;
    resolved["offset"] = off;
    return circle_points(c, off);
  }
  if (type == "orbits") {
    if (group == nullptr) throw SchemaError("directions.type orbits needs a group");
    const int c = int_or(j, "count", 20, where);
    const int seed = int_or(j, "seed", 1, where);
    resolved["count"] = c;
    resolved["seed"] = seed;
    Rng rng(static_cast<std::uint64_t>(seed));
    PointHash index(n, 1e-9);
    std::vector<Vec> out;
    for (int s = 0; s < c; ++s) {
      const Vec z = rng.unit_vector(n);
      for (const auto& g : group->elements()) {
        Vec v = g * z;
        v /= v.norm();
        if (index.find(v) >= 0) continue;
        index.insert(v);
        out.push_back(std::move(v));
      }
    }
    return out;
  }
  throw SchemaError("directions.type: unknown '" + type + "' (octahedral, icosahedral, fibonacci, circle, orbits)");
}

std::shared_ptr<const StarBodySpec> parse_star_body(const Json& j, int n, const OrthogonalGroup& group,
                                                    OrderedJson& resolved) {
  const std::string where = "Q";
  const std::string type = string_or(j, "type", "ball", where);
  resolved["type"] = type;
  if (type == "ball") {
    const double r = number_or(j, "radius", 1.0, where);
    if (!(r > 0.0)) throw SchemaError("Q.radius: must be positive");
    resolved["radius"] = r;
    return std::make_shared<const StarBodySpec>(StarBodySpec::ball(n, r));
  }
  if (type == "ellipsoid" || type == "symmetrized-ellipsoid") {
    const Vec axes = as_vec(require(j, "axes", where), "Q.axes");
    if (axes.size() != n || (axes.array() <= 0.0).any()) throw SchemaError("Q.axes: need n positive numbers");
    resolved["axes"] = vec_json(axes);
    StarBodySpec e = StarBodySpec::ellipsoid(axes.asDiagonal().toDenseMatrix());
    if (type == "ellipsoid") return std::make_shared<const StarBodySpec>(std::move(e));
    return std::make_shared<const StarBodySpec>(StarBodySpec::symmetrized(e, group));
  }
  throw SchemaError("Q.type: unknown '" + type + "' (ball, ellipsoid, symmetrized-ellipsoid)");
}

std::function<double(const Vec&)> parse_density(const Json& j, int n, const OrthogonalGroup& group,
                                                OrderedJson& resolved) {
  const std::string where = "density";
  const std::string type = as_string(require(j, "type", where), where + ".type");
  resolved["type"] = type;
  if (type == "constant") {
    const double c = as_number(require(j, "value", where), "density.value");
    if (!(c > 0.0)) throw SchemaError("density.value: must be positive");
    resolved["value"] = c;
    return [c](const Vec&) { return c; };
  }
  if (type == "symmetrized-bump") {
    const Vec center = as_vec(require(j, "center", where), "density.center");
    if (center.size() != n) throw SchemaError("density.center: wrong dimension");
    const double base = number_or(j, "base", 0.2, where);
    const double amp = number_or(j, "amplitude", 1.0, where);
    const double width = number_or(j, "width", 0.5, where);
    if (!(base >= 0.0) || !(amp >= 0.0) || !(width > 0.0)) throw SchemaError("density: base, amplitude >= 0, width > 0");
    resolved["center"] = vec_json(center);
    resolved["base"] = base;
    resolved["amplitude"] = amp;
    resolved["width"] = width;
    const Vec c = center / center.norm();
    auto bump = [c, base, amp, width](const Vec& u) {
      return base + amp * std::exp(-(u - c).squaredNorm() / (width * width));
    };
    return symmetrize_density(group, bump);
  }
  throw SchemaError("density.type: unknown '" + type + "' (constant, symmetrized-bump)");
}

OrthogonalGroup parse_group(const Json& j, int n) {
  const std::string text = as_string(j, "group");
  return standard_group(parse_group_spec(text), n);
}

OrderedJson group_certificate_json(const GroupCertificate& c, const OrthogonalGroup& g) {
  OrderedJson j;
  j["label"] = g.label();
  j["order"] = c.order;
  j["has_nonzero_fixed_point"] = c.has_nonzero_fixed_point;
  j["contains_negation"] = c.contains_negation;
  j["averaging_norm"] = c.averaging_norm;
  return j;
}

SolveSetup parse_solve_config(const Json& j) {
  const std::string where = "config";
  const int n = as_int(require(j, "n", where), "config.n");
  if (n < 2) throw SchemaError("config.n: must be at least 2");
  const double p = as_number(require(j, "p", where), "config.p");
  const double q = as_number(require(j, "q", where), "config.q");
  if (!(q > 0.0)) throw SchemaError("config.q: must be positive");
  const bool unsupported = bool_or(j, "unsupported_regime", false, where);
  auto group = std::make_shared<const OrthogonalGroup>(parse_group(require(j, "group", where), n));

  OrderedJson resolved;
  resolved["n"] = n;
  resolved["p"] = p;
  resolved["q"] = q;
  resolved["group"] = group->label();
  resolved["unsupported_regime"] = unsupported;

  OrderedJson q_res;
  const Json q_cfg = j.contains("Q") ? j["Q"] : Json::object();
  auto q_body = parse_star_body(q_cfg, n, *group, q_res);
  resolved["Q"] = q_res;

  OrderedJson d_res;
  auto density = parse_density(require(j, "density", where), n, *group, d_res);
  resolved["density"] = d_res;

  OrderedJson dir_res;
  Json dir_cfg = j.contains("directions") ? j["directions"] : Json();
  if (dir_cfg.is_null()) {
    dir_cfg = n == 3 ? Json{{"type", "octahedral"}, {"k", 13}}
                     : (n == 2 ? Json{{"type", "circle"}, {"count", 96}} : Json{{"type", "orbits"}, {"count", 20}});
  }
  auto dirs = parse_directions(dir_cfg, n, group.get(), dir_res);
  resolved["directions"] = dir_res;

  GridChoice grid = parse_grid(j.contains("grid") ? j["grid"] : Json(), n);
  resolved["grid"] = grid.resolved;

  SolveSetup setup{make_problem(n, p, q, group, q_body, density, std::move(dirs), grid.grid, unsupported),
                   {}, {}, false};
  const Json s_cfg = j.contains("solver") ? j["solver"] : Json::object();
  SolverConfig& c = setup.config;
  c.max_iters = int_or(s_cfg, "max_iters", c.max_iters, "solver");
  c.gradient_tolerance = number_or(s_cfg, "gradient_tolerance", c.gradient_tolerance, "solver");
  c.initial_step = number_or(s_cfg, "initial_step", c.initial_step, "solver");
  c.shrink = number_or(s_cfg, "shrink", c.shrink, "solver");
  c.armijo = number_or(s_cfg, "armijo", c.armijo, "solver");
  c.max_log_step = number_or(s_cfg, "max_log_step", c.max_log_step, "solver");
  c.h_floor_factor = number_or(s_cfg, "h_floor_factor", c.h_floor_factor, "solver");
  c.diameter_growth_limit = number_or(s_cfg, "diameter_growth_limit", c.diameter_growth_limit, "solver");
  c.trace_residual = bool_or(s_cfg, "trace_residual", c.trace_residual, "solver");
  c.engine = engine_kind_from_string(string_or(s_cfg, "engine", "auto", "solver"));
  c.boundary_rtol = number_or(s_cfg, "boundary_rtol", c.boundary_rtol, "solver");
  c.seed = static_cast<std::uint64_t>(int_or(s_cfg, "seed", 0, "solver"));
  if (c.max_iters < 0 || !(c.gradient_tolerance > 0.0) || !(c.initial_step > 0.0) || !(c.shrink > 0.0 && c.shrink < 1.0) ||
      !(c.armijo > 0.0 && c.armijo < 1.0) || !(c.max_log_step > 0.0) || !(c.h_floor_factor > 0.0) ||
      !(c.boundary_rtol > 0.0))
    throw SchemaError("solver: tolerances and step parameters must be positive (shrink, armijo in (0,1))");
  OrderedJson s_res;
  s_res["max_iters"] = c.max_iters;
  s_res["gradient_tolerance"] = c.gradient_tolerance;
  s_res["initial_step"] = c.initial_step;
  s_res["shrink"] = c.shrink;
  s_res["armijo"] = c.armijo;
  s_res["max_log_step"] = c.max_log_step;
  s_res["h_floor_factor"] = c.h_floor_factor;
  s_res["diameter_growth_limit"] = c.diameter_growth_limit;
  s_res["trace_residual"] = c.trace_residual;
  s_res["engine"] = to_string(c.engine);
  s_res["boundary_rtol"] = c.boundary_rtol;
  s_res["seed"] = c.seed;
  resolved["solver"] = s_res;
  setup.mesh = bool_or(j, "mesh", false, where);
  resolved["mesh"] = setup.mesh;
  setup.resolved = std::move(resolved);
  return setup;
}

// ---- commands --------------------------------------------------------------------------

CommandResult run_solve(const Json& config, const fs::path& out_root, std::ostream& log) {
  SolveSetup setup = parse_solve_config(config);
  const ProblemSpec& spec = setup.spec;
  RunDir dir = create_run_dir(out_root, "solve");
  log << "solve: " << spec.directions->size() << " directions, " << spec.partition.orbits.size()
      << " orbits, grid " << spec.grid->size() << " nodes\n";
  const SolutionReport rep = solve(spec, setup.config);
  const EulerLagrangeReport el = euler_lagrange_check(rep.normalized, rep.lambda, spec, setup.config);

  OrderedJson files = OrderedJson::array();
  {
    CsvWriter csv(dir.path / "convergence.csv", {"iter", "phi", "grad_norm", "diameter", "residual"});
    for (std::size_t i = 0; i < rep.phi_trace.size(); ++i)
      csv.row({std::to_string(i), csv_number(rep.phi_trace[i]), csv_number(rep.gradient_trace[i]),
               csv_number(rep.diameter_trace[i]),
               i < rep.residual_trace.size() ? csv_number(rep.residual_trace[i]) : std::string("")});
    files.push_back("convergence.csv");
  }
  write_json_file(dir.path / "body.json", body_to_json(rep.body, "solution"));
  files.push_back("body.json");
  write_json_file(dir.path / "normalized_body.json", body_to_json(rep.normalized, "normalized minimizer"));
  files.push_back("normalized_body.json");
  if (setup.mesh) {
    write_text_file(dir.path / "body.obj", mesh_obj(rep.body));
    files.push_back("body.obj");
  }

  OrderedJson m = manifest_head("solve", dir);
  m["config"] = setup.resolved;
  m["group_certificate"] = group_certificate_json(spec.group_certificate, *spec.group);
  m["exponents"] = spec.unsupported_regime ? OrderedJson("unsupported regime") : exponents_json(spec.p, spec.q, spec.n);
  m["grids"] = OrderedJson::array({grid_json(*spec.grid)});
  OrderedJson out;
  out["engine"] = rep.engine_label;
  out["converged"] = rep.converged;
  out["iterations"] = rep.iterations;
  out["phi"] = rep.phi_trace.back();
  out["gradient_norm"] = rep.gradient_norm;
  out["lambda"] = rep.lambda;
  out["scale"] = rep.scale;
  out["residual"] = rep.residual;
  out["euler_lagrange_gap"] = el.max_gap;
  out["euler_lagrange_pass"] = el.pass;
  out["floor_hit"] = rep.floor_hit;
  out["diameter_flag"] = rep.diameter_flag;
  out["line_search_failed"] = rep.line_search_failed;
  m["outcome"] = out;
  m["wall_time_s"] = rep.wall_time;
  m["files"] = files;
  write_json_file(dir.path / "manifest.json", m);
  log << "solve: " << (rep.converged ? "converged" : "not converged") << " after " << rep.iterations
      << " iterations, lambda " << rep.lambda << ", residual " << rep.residual << "\n";
  log << "run directory: " << dir.path.string() << "\n";
  return {rep.converged ? kExitOk : kExitNonConvergence, dir.path};
}

namespace {

struct SweepOutcome {
  OrderedJson summary;
  bool violation = false;
};

SweepOutcome sweep_box(const Json& s, const fs::path& dir, OrderedJson& grids) {
  const std::string where = "sweeps.box";
  const std::vector<int> dims = s.contains("dims") ? as_int_list(s["dims"], where + ".dims") : std::vector<int>{2, 3, 4};
  const int boxes = int_or(s, "boxes", 100, where);
  const std::vector<double> qs = s.contains("q") ? as_number_list(s["q"], where + ".q")
                                                 : std::vector<double>{0.5, 1, 1.5, 2, 2.5, 3, 3.5};
  const double max_aspect = number_or(s, "max_aspect", 200.0, where);
  const int nodes = int_or(s, "nodes", 20000, where);
  const int seed = int_or(s, "seed", 1, where);
  if (boxes < 1 || !(max_aspect >= 1.0) || nodes < 1) throw SchemaError(where + ": boxes, nodes >= 1, max_aspect >= 1");
  CsvWriter csv(dir / "box_bounds.csv", {"n", "box", "half_axes", "q", "branch", "lower", "observed", "upper", "pass"});
  Rng rng(static_cast<std::uint64_t>(seed));
  int total = 0;
  int passed = 0;
  OrderedJson per_dim = OrderedJson::object();
  for (int n : dims) {
    const SphericalGrid grid = build_grid(n, nodes, default_scheme(n), static_cast<std::uint64_t>(seed));
    grids.push_back(grid_json(grid));
    int dim_pass = 0;
    int dim_total = 0;
    for (int b = 0; b < boxes; ++b) {
      Vec a(n);
      for (int i = 0; i < n; ++i) a[i] = std::exp(rng.uniform(0.0, std::log(max_aspect)));
      const BoxSpec box = BoxSpec::sorted(a);
      std::ostringstream axes;
      for (int i = 0; i < n; ++i) axes << (i ? ";" : "") << std::setprecision(17) << box.a[i];
      for (double q : qs) {
        const BoundsReport r = check_box_bounds(box, q, box_dual_volume_mc(box, q, grid));
        csv.row({std::to_string(n), std::to_string(b), axes.str(), csv_number(q), r.branch, csv_number(r.lower),
                 csv_number(r.observed), csv_number(r.upper), r.pass ? "1" : "0"});
        ++dim_total;
        if (r.pass) ++dim_pass;
      }
    }
    per_dim[std::to_string(n)] = static_cast<double>(dim_pass) / dim_total;
    total += dim_total;
    passed += dim_pass;
  }
  SweepOutcome out;
  out.summary["kind"] = "box";
  out.summary["cases"] = total;
  out.summary["pass_rate"] = static_cast<double>(passed) / total;
  out.summary["pass_rate_by_dim"] = per_dim;
  out.summary["file"] = "box_bounds.csv";
  out.violation = passed != total;
  return out;
}

SweepOutcome sweep_santalo(const Json& s, const fs::path& dir, OrderedJson& grids) {
  const std::string where = "sweeps.santalo";
  const std::vector<int> dims = s.contains("dims") ? as_int_list(s["dims"], where + ".dims") : std::vector<int>{2, 3};
  const int bodies = int_or(s, "bodies", 100, where);
  const int fmin = int_or(s, "min_facets", 6, where);
  const int fmax = int_or(s, "max_facets", 40, where);
  const int nodes = int_or(s, "nodes", 20000, where);
  const int seed = int_or(s, "seed", 2, where);
  if (bodies < 1 || nodes < 1 || fmax < fmin) throw SchemaError(where + ": bodies, nodes >= 1, max_facets >= min_facets");
  CsvWriter csv(dir / "santalo.csv",
                {"n", "body", "facets", "volume", "polar_volume", "product", "kappa_sq", "floor", "centered", "pass"});
  Rng rng(static_cast<std::uint64_t>(seed));
  int total = 0;
  int passed = 0;
  double lo = std::numeric_limits<double>::infinity();
  double hi = 0.0;
  for (int n : dims) {
    if (n > 3) throw SchemaError(where + ".dims: centering needs n <= 3");
    const SphericalGrid grid = build_grid(n, nodes, default_scheme(n), static_cast<std::uint64_t>(seed));
    grids.push_back(grid_json(grid));
    for (int b = 0; b < bodies; ++b) {
      const int facets = std::max(fmin, n + 1) + rng.uniform_int(0, std::max(0, fmax - std::max(fmin, n + 1)));
      const SupportPolytope k = centered(random_polytope(n, facets, rng));
      const SantaloReport r = santalo_product(k, grid);
      const bool ok = r.floor_ok && r.forward_ok;
      csv.row({std::to_string(n), std::to_string(b), std::to_string(facets), csv_number(r.volume),
               csv_number(r.polar_volume), csv_number(r.forward), csv_number(r.kappa_sq),
               csv_number(r.kuperberg_floor), r.centered ? "1" : "0", ok ? "1" : "0"});
      ++total;
      if (ok) ++passed;
      lo = std::min(lo, r.forward / r.kappa_sq);
      hi = std::max(hi, r.forward / r.kappa_sq);
    }
  }
  SweepOutcome out;
  out.summary["kind"] = "santalo";
  out.summary["cases"] = total;
  out.summary["pass_rate"] = static_cast<double>(passed) / total;
  out.summary["product_over_kappa_sq_min"] = lo;
  out.summary["product_over_kappa_sq_max"] = hi;
  out.summary["file"] = "santalo.csv";
  out.violation = passed != total;
  return out;
}

SweepOutcome sweep_dual_product(const Json& s, const fs::path& dir) {
  const std::string where = "sweeps.dual-product";
  const double q = number_or(s, "q", 2.0, where);
  const double r = number_or(s, "r", 4.0, where);
  const int decades = int_or(s, "decades", 3, where);
  if (decades < 0) throw SchemaError(where + ".decades: must be nonnegative");
  const int n = 3;
  const StarBodySpec ball = StarBodySpec::ball(n);
  const MeasureEngine engine = MeasureEngine::boundary();
  CsvWriter csv(dir / "dual_product.csv", {"family", "aspect", "vq", "vr", "product", "scale_gap"});
  double lo = std::numeric_limits<double>::infinity();
  double hi = 0.0;
  double worst_scale = 0.0;
  for (const std::string family : {"needle", "plate"}) {
    for (int k = 0; k <= decades; ++k) {
      const double a = std::pow(10.0, k);
      Vec axes(n);
      if (family == "needle") axes << 1.0, 1.0, a;
      else axes << 1.0, a, a;
      const SupportPolytope box = box_polytope(axes);
      const DualProduct d = bs_dual_product(box, ball, ball, q, r, engine);
      double gap = 0.0;
      for (double lam : {0.5, 2.0})
        gap = std::max(gap, std::abs(bs_dual_product(box.scaled(lam), ball, ball, q, r, engine).product / d.product - 1.0));
      csv.row({family, csv_number(a), csv_number(d.vq), csv_number(d.vr), csv_number(d.product), csv_number(gap)});
      lo = std::min(lo, d.product);
      hi = std::max(hi, d.product);
      worst_scale = std::max(worst_scale, gap);
    }
  }
  SweepOutcome out;
  out.summary["kind"] = "dual-product";
  out.summary["q"] = q;
  out.summary["r"] = r;
  out.summary["product_min"] = lo;
  out.summary["product_max"] = hi;
  out.summary["theta_hat"] = std::max(hi, 1.0 / lo);
  out.summary["scale_invariance_gap"] = worst_scale;
  out.summary["file"] = "dual_product.csv";
  out.violation = worst_scale > 1e-10;
  return out;
}

SweepOutcome sweep_inradius(const Json& s, const fs::path& dir, OrderedJson& grids) {
  const std::string where = "sweeps.inradius";
  const double q = number_or(s, "q", 2.0, where);
  const std::vector<double> eps =
      s.contains("eps") ? as_number_list(s["eps"], where + ".eps") : std::vector<double>{1.0, 0.3, 0.1, 0.03, 0.01};
  const int n = 3;
  const SphericalGrid grid = build_grid(n, 2000, default_scheme(n), 1);
  grids.push_back(grid_json(grid));
  CsvWriter csv(dir / "inradius.csv", {"eps", "inradius", "t", "ratio", "linear_ratio"});
  double floor = std::numeric_limits<double>::infinity();
  for (double e : eps) {
    if (!(e > 0.0)) throw SchemaError(where + ".eps: must be positive");
    Vec a(n);
    a << e, 1.0, 1.0;
    const BoxSpec box = BoxSpec::sorted(a);
    const InradiusReport r = inradius_diagnostic(box_polytope(a), q, box_dual_volume_reference(box, q), grid);
    csv.row({csv_number(e), csv_number(r.inradius), csv_number(r.t), csv_number(r.ratio), csv_number(r.linear_ratio)});
    floor = std::min(floor, r.ratio);
  }
  SweepOutcome out;
  out.summary["kind"] = "inradius";
  out.summary["q"] = q;
  out.summary["xi_hat"] = floor;
  out.summary["file"] = "inradius.csv";
  return out;
}

}  // namespace

CommandResult run_verify_bounds(const Json& config, const fs::path& out_root, std::ostream& log) {
  const Json& sweeps = require(config, "sweeps", "config");
  if (!sweeps.is_array() || sweeps.empty()) throw SchemaError("config.sweeps: expected a non-empty array");
  for (std::size_t i = 0; i < sweeps.size(); ++i) {
    const std::string kind = as_string(require(sweeps[i], "kind", "sweeps[" + std::to_string(i) + "]"), "kind");
    if (kind != "box" && kind != "santalo" && kind != "dual-product" && kind != "inradius")
      throw SchemaError("sweeps[" + std::to_string(i) + "].kind: unknown '" + kind +
                        "' (box, santalo, dual-product, inradius)");
  }
  RunDir dir = create_run_dir(out_root, "verify-bounds");
  const auto t0 = std::chrono::steady_clock::now();
  OrderedJson grids = OrderedJson::array();
  OrderedJson outcomes = OrderedJson::array();
  OrderedJson files = OrderedJson::array();
  bool violation = false;
  for (const auto& s : sweeps) {
    const std::string kind = s["kind"].get<std::string>();
    SweepOutcome o;
    if (kind == "box") o = sweep_box(s, dir.path, grids);
    else if (kind == "santalo") o = sweep_santalo(s, dir.path, grids);
    else if (kind == "dual-product") o = sweep_dual_product(s, dir.path);
    else o = sweep_inradius(s, dir.path, grids);
    log << "verify-bounds: " << o.summary.dump() << "\n";
    files.push_back(o.summary["file"]);
    outcomes.push_back(o.summary);
    violation = violation || o.violation;
  }
  OrderedJson m = manifest_head("verify-bounds", dir);
  m["config"] = OrderedJson::parse(config.dump());
  m["grids"] = grids;
  m["outcome"] = outcomes;
  m["bound_violation"] = violation;
  m["wall_time_s"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  m["files"] = files;
  write_json_file(dir.path / "manifest.json", m);
  log << "run directory: " << dir.path.string() << "\n";
  return {violation ? kExitBoundViolation : kExitOk, dir.path};
}

namespace {

SupportPolytope parse_base_body(const Json& j, int n, OrderedJson& resolved) {
  const std::string where = "base";
  const std::string type = as_string(require(j, "type", where), where + ".type");
  resolved["type"] = type;
  if (type == "shifted-ball") {
    const Vec center = as_vec(require(j, "center", where), "base.center");
    if (center.size() != n) throw SchemaError("base.center: wrong dimension");
    const double radius = number_or(j, "radius", 1.0, where);
    if (!(radius > center.norm())) throw HypothesisError("base body must contain the origin in its interior");
    OrderedJson dir_res;
    const Json dir_cfg = j.contains("directions") ? j["directions"]
                                                  : (n == 3 ? Json{{"type", "octahedral"}, {"k", 5}}
                                                            : Json{{"type", "circle"}, {"count", 64}, {"offset", 0.013}});
    const auto dirs = parse_directions(dir_cfg, n, nullptr, dir_res);
    resolved["center"] = vec_json(center);
    resolved["radius"] = radius;
    resolved["directions"] = dir_res;
    return shifted_ball_polytope(dirs, center, radius);
  }
  if (type == "file") {
    const std::string path = as_string(require(j, "path", where), "base.path");
    resolved["path"] = path;
    SupportPolytope k = body_from_json(read_json_file(path));
    if (k.dim() != n) throw SchemaError("base body dimension does not match the group");
    return k;
  }
  throw SchemaError("base.type: unknown '" + type + "' (shifted-ball, file)");
}

OrderedJson certificate_json(const AsymmetryCertificate& c) {
  OrderedJson j;
  j["max_gap"] = c.max_gap;
  j["witness"] = vec_json(c.witness);
  j["invariance_deviation"] = c.invariance_deviation;
  j["non_symmetric"] = c.non_symmetric;
  return j;
}

}  // namespace

CommandResult run_construct(const Json& config, const fs::path& out_root, std::ostream& log) {
  const std::string where = "config";
  const std::string kind = as_string(require(config, "construction", where), "config.construction");
  if (kind != "intersection" && kind != "circum" && kind != "dirichlet-voronoi")
    throw SchemaError("config.construction: unknown '" + kind + "' (intersection, circum, dirichlet-voronoi)");
  const std::string gtext = as_string(require(config, "group", where), "config.group");
  const GroupSpec gspec = parse_group_spec(gtext);
  const int n = gspec.dim();
  const OrthogonalGroup group = standard_group(gspec, n);
  const int seed = int_or(config, "seed", 1, where);
  if (seed < 0) throw SchemaError("config.seed: must be nonnegative");

  OrderedJson resolved;
  resolved["construction"] = kind;
  resolved["group"] = group.label();
  resolved["seed"] = seed;
  OrderedJson outcome;
  OrderedJson files = OrderedJson::array();
  OrderedJson grids = OrderedJson::array();
  int code = kExitOk;

  if (kind == "dirichlet-voronoi") {
    const Vec z = as_vec(require(config, "z", where), "config.z");
    if (z.size() != n) throw SchemaError("config.z: wrong dimension");
    const int samples = int_or(config, "samples", 10000, where);
    if (samples < 1) throw SchemaError("config.samples: must be positive");
    resolved["z"] = vec_json(z);
    resolved["samples"] = samples;
    const DirichletCone cone = dirichlet_voronoi_cone(group, z);
    const CoverageReport cov = voronoi_coverage(group, cone, samples, static_cast<std::uint64_t>(seed));
    RunDir dir = create_run_dir(out_root, "construct");
    OrderedJson cone_json;
    cone_json["seed_direction"] = vec_json(cone.seed_direction);
    OrderedJson cons = OrderedJson::array();
    for (const auto& a : cone.constraints) cons.push_back(vec_json(a));
    cone_json["constraints"] = cons;
    write_json_file(dir.path / "cone.json", cone_json);
    files.push_back("cone.json");
    outcome["constraints"] = cone.constraints.size();
    outcome["samples"] = cov.samples;
    outcome["covered"] = cov.covered;
    outcome["overlaps"] = cov.overlaps;
    outcome["coverage_pass"] = cov.pass();
    if (!cov.pass()) code = kExitBoundViolation;
    OrderedJson m = manifest_head("construct", dir);
    m["config"] = resolved;
    m["group_certificate"] = group_certificate_json(certify(group), group);
    m["outcome"] = outcome;
    m["files"] = files;
    write_json_file(dir.path / "manifest.json", m);
    log << "construct: coverage " << cov.covered << "/" << cov.samples << ", overlaps " << cov.overlaps << "\n";
    log << "run directory: " << dir.path.string() << "\n";
    return {code, dir.path};
  }

  OrderedJson base_res;
  const SupportPolytope base = parse_base_body(require(config, "base", where), n, base_res);
  resolved["base"] = base_res;
  const int probe_nodes = int_or(config, "probe_nodes", 500, where);
  if (probe_nodes < 1) throw SchemaError("config.probe_nodes: must be positive");
  resolved["probe_nodes"] = probe_nodes;
  const SphericalGrid probe = build_grid(n, probe_nodes, default_scheme(n), static_cast<std::uint64_t>(seed));
  grids.push_back(grid_json(probe));
  Mat rot;
  const Mat* rot_ptr = nullptr;
  if (config.contains("rotation")) {
    rot = as_mat(config["rotation"], "config.rotation");
    if (rot.rows() != n || rot.cols() != n) throw SchemaError("config.rotation: must be n x n");
    if ((rot.transpose() * rot - Mat::Identity(n, n)).norm() > 1e-10) throw SchemaError("config.rotation: not orthogonal");
    resolved["rotation"] = mat_json(rot);
    rot_ptr = &rot;
  }
  const ConstructionResult res = kind == "intersection"
                                     ? orbit_intersection_body(group, base, probe, static_cast<std::uint64_t>(seed), rot_ptr)
                                     : orbit_intersection_body_circum(group, base, probe, static_cast<std::uint64_t>(seed), rot_ptr);
  const bool mesh = bool_or(config, "mesh", false, where);
  resolved["mesh"] = mesh;
  RunDir dir = create_run_dir(out_root, "construct");
  write_json_file(dir.path / "body.json", body_to_json(res.body, kind + " construction"));
  files.push_back("body.json");
  OrderedJson cert = certificate_json(res.certificate);
  write_json_file(dir.path / "certificate.json", cert);
  files.push_back("certificate.json");
  if (mesh) {
    write_text_file(dir.path / "body.obj", mesh_obj(res.body));
    files.push_back("body.obj");
  }
  outcome["facets"] = res.body.size();
  outcome["rotation"] = mat_json(res.rotation);
  outcome["extremal_direction"] = vec_json(res.extremal_direction);
  outcome["extremal_radius"] = res.extremal_radius;
  outcome["unique_extremum"] = res.unique_extremum;
  outcome["rho_at_hz"] = res.rho_at_hz;
  outcome["rho_at_minus_hz"] = res.rho_at_minus_hz;
  outcome["boundary_check"] = res.boundary_check;
  outcome["certificate"] = cert;
  if (n <= 3) {
    const GeometryStats st = geometry_stats(res.body, probe);
    outcome["centroid_norm"] = st.centroid.norm();
    outcome["circumradius"] = st.circumradius;
  }
  OrderedJson m = manifest_head("construct", dir);
  m["config"] = resolved;
  m["group_certificate"] = group_certificate_json(certify(group), group);
  m["grids"] = grids;
  m["outcome"] = outcome;
  m["files"] = files;
  write_json_file(dir.path / "manifest.json", m);
  log << "construct: " << res.body.size() << " facets, max_gap " << res.certificate.max_gap << ", "
      << (res.certificate.non_symmetric ? "non-symmetric" : "symmetric within tolerance") << "\n";
  log << "run directory: " << dir.path.string() << "\n";
  return {code, dir.path};
}

CommandResult run_selftest(const fs::path& out_root, std::ostream& log) {
  struct Check {
    std::string name;
    std::function<std::pair<bool, std::string>()> run;
  };
  auto fmt = [](double x) {
    std::ostringstream os;
    os << std::setprecision(10) << x;
    return os.str();
  };
  std::vector<Check> checks;
  checks.push_back({"q_star_at_n", [&] {
                      const double v = q_star(3.0, 3);
                      return std::make_pair(v == 3.0, fmt(v));
                    }});
  checks.push_back({"q_star_infinite_below_one", [&] {
                      return std::make_pair(std::isinf(q_star(0.5, 3)), std::string("inf"));
                    }});
  checks.push_back({"s_at_midpoint", [&] {
                      const double s = admissible_exponent_s(-2.0, 2.0, 3).s;
                      return std::make_pair(std::abs(s - 2.0) < 1e-12, fmt(s));
                    }});
  checks.push_back({"p_gate_rejects_minus_q_star", [&] {
                      try {
                        admissible_exponent_s(-4.0, 2.0, 3);
                      } catch (const HypothesisError&) {
                        return std::make_pair(true, std::string("rejected"));
                      }
                      return std::make_pair(false, std::string("accepted"));
                    }});
  checks.push_back({"grid_total_weight", [&] {
                      const SphericalGrid g = build_grid(3, 2000, GridScheme::fibonacci_sphere, 1);
                      const double w = integrate(g, [](const Vec&) { return 1.0; });
                      return std::make_pair(std::abs(w - 4.0 * M_PI) < 1e-10, fmt(w));
                    }});
  checks.push_back({"cube_bracket_contains_volume", [&] {
                      const BoundsReport r = check_box_bounds(BoxSpec(Vec::Ones(3)), 3.0, 8.0);
                      return std::make_pair(r.pass, fmt(r.lower) + " <= 8 <= " + fmt(r.upper));
                    }});
  checks.push_back({"cube_monte_carlo_volume", [&] {
                      const SphericalGrid g = build_grid(3, 20000, GridScheme::fibonacci_sphere, 1);
                      const double v = box_dual_volume_mc(BoxSpec(Vec::Ones(3)), 3.0, g);
                      return std::make_pair(std::abs(v / 8.0 - 1.0) < 0.01, fmt(v));
                    }});
  checks.push_back({"box_volume_homogeneity", [&] {
                      const SphericalGrid g = build_grid(3, 5000, GridScheme::fibonacci_sphere, 1);
                      Vec a(3);
                      a << 1.0, 2.0, 5.0;
                      const double v1 = box_dual_volume_mc(BoxSpec(a), 2.5, g);
                      const double v2 = box_dual_volume_mc(BoxSpec(2.0 * a), 2.5, g);
                      const double gap = std::abs(v2 / v1 / std::pow(2.0, 2.5) - 1.0);
                      return std::make_pair(gap < 1e-12, fmt(gap));
                    }});
  checks.push_back({"santalo_ball_like", [&] {
                      const SphericalGrid g = build_grid(3, 20000, GridScheme::fibonacci_sphere, 1);
                      const SantaloReport r = santalo_product(ball_polytope(octahedral_directions(13)), g);
                      return std::make_pair(r.forward_ok && std::abs(r.forward / r.kappa_sq - 1.0) < 0.02,
                                            fmt(r.forward / r.kappa_sq));
                    }});
  checks.push_back({"dual_product_scale_invariance", [&] {
                      Vec a(3);
                      a << 1.0, 2.0, 3.0;
                      const SupportPolytope k = box_polytope(a);
                      const StarBodySpec b = StarBodySpec::ball(3);
                      const MeasureEngine e = MeasureEngine::boundary();
                      const double p1 = bs_dual_product(k, b, b, 2.0, 4.0, e).product;
                      const double p2 = bs_dual_product(k.scaled(2.0), b, b, 2.0, 4.0, e).product;
                      return std::make_pair(std::abs(p2 / p1 - 1.0) < 1e-10, fmt(p2 / p1 - 1.0));
                    }});
  checks.push_back({"cube_is_symmetric", [&] {
                      const SphericalGrid g = build_grid(3, 500, GridScheme::fibonacci_sphere, 1);
                      const AsymmetryCertificate c = certify_asymmetry(box_polytope(Vec::Ones(3)), g);
                      return std::make_pair(c.max_gap <= 1e-10 && !c.non_symmetric, fmt(c.max_gap));
                    }});
  checks.push_back({"trivial_group_cone", [&] {
                      const OrthogonalGroup id(2, {Mat::Identity(2, 2)}, {}, "trivial");
                      Vec z(2);
                      z << 1.0, 0.0;
                      const DirichletCone d = dirichlet_voronoi_cone(id, z);
                      const CoverageReport c = voronoi_coverage(id, d, 1000, 1);
                      return std::make_pair(d.constraints.empty() && c.pass(), std::to_string(c.covered));
                    }});
  checks.push_back({"rotation_seed_determinism", [&] {
                      const OrthogonalGroup g = standard_group(GroupSpec::cyclic(3), 2);
                      Vec z(2);
                      z << 1.0, 0.0;
                      const Mat a = random_generic_rotation(g, z, 7);
                      const Mat b = random_generic_rotation(g, z, 7);
                      return std::make_pair((a - b).norm() == 0.0, std::string("same"));
                    }});
  checks.push_back({"mesh_needs_three_dimensions", [&] {
                      try {
                        (void)mesh_obj(box_polytope(Vec::Ones(2)));
                      } catch (const DomainError&) {
                        return std::make_pair(true, std::string("rejected"));
                      }
                      return std::make_pair(false, std::string("accepted"));
                    }});
  checks.push_back({"ball_fixed_point_small", [&] {
                      auto g = std::make_shared<const OrthogonalGroup>(standard_group(GroupSpec::simplex_symmetry(3), 3));
                      auto grid = std::make_shared<const SphericalGrid>(build_grid(3, 5000, GridScheme::fibonacci_sphere, 1));
                      auto b = std::make_shared<const StarBodySpec>(StarBodySpec::ball(3));
                      const ProblemSpec spec = make_problem(3, -1.0, 2.0, g, b, [](const Vec&) { return 1.0 / 3.0; },
                                                            octahedral_directions(5), grid);
                      SolverConfig cfg;
                      cfg.trace_residual = false;
                      const SolutionReport rep = solve(spec, cfg);
                      const FacetComplex& fc = rep.body.facets();
                      double rmin = std::numeric_limits<double>::infinity();
                      double rmax = 0.0;
                      for (const auto& v : fc.vertices) rmax = std::max(rmax, v.norm());
                      for (std::size_t i = 0; i < rep.body.size(); ++i) rmin = std::min(rmin, rep.body.h(i));
                      return std::make_pair(rep.converged && std::abs(rmin - 1.0) < 0.05 && std::abs(rmax - 1.0) < 0.1,
                                            "inradius " + fmt(rmin) + " circumradius " + fmt(rmax));
                    }});

  RunDir dir = create_run_dir(out_root, "selftest");
  CsvWriter csv(dir.path / "selftest.csv", {"check", "pass", "detail"});
  int failed = 0;
  OrderedJson results = OrderedJson::array();
  for (const auto& c : checks) {
    bool ok = false;
    std::string detail;
    try {
      std::tie(ok, detail) = c.run();
    } catch (const std::exception& e) {
      detail = std::string("exception: ") + e.what();
    }
    if (!ok) ++failed;
    log << (ok ? "PASS " : "FAIL ") << c.name << " (" << detail << ")\n";
    csv.row({c.name, ok ? "1" : "0", "\"" + detail + "\""});
    OrderedJson r;
    r["check"] = c.name;
    r["pass"] = ok;
    r["detail"] = detail;
    results.push_back(r);
  }
  OrderedJson m = manifest_head("selftest", dir);
  m["outcome"] = results;
  m["failed"] = failed;
  m["files"] = OrderedJson::array({"selftest.csv"});
  write_json_file(dir.path / "manifest.json", m);
  log << checks.size() - static_cast<std::size_t>(failed) << "/" << checks.size() << " checks passed\n";
  return {failed == 0 ? kExitOk : kExitBoundViolation, dir.path};
}

CommandResult run_export(const fs::path& body_path, bool mesh, bool vertices_csv, const fs::path& out_root,
                         std::ostream& log) {
  const SupportPolytope k = body_from_json(read_json_file(body_path));
  if (!mesh && !vertices_csv) throw SchemaError("export: choose --mesh and/or --vertices");
  if (mesh && k.dim() != 3) throw DomainError("mesh export requires n = 3, body has n = " + std::to_string(k.dim()));
  if (vertices_csv && k.dim() > 3) throw DomainError("vertex export requires n <= 3");
  RunDir dir = create_run_dir(out_root, "export");
  OrderedJson files = OrderedJson::array();
  if (mesh) {
    write_text_file(dir.path / "body.obj", mesh_obj(k));
    files.push_back("body.obj");
  }
  if (vertices_csv) {
    std::vector<std::string> header;
    for (int i = 0; i < k.dim(); ++i) header.push_back("x" + std::to_string(i + 1));
    CsvWriter csv(dir.path / "vertices.csv", header);
    for (const auto& v : k.facets().vertices) {
      std::vector<std::string> row;
      for (Eigen::Index i = 0; i < v.size(); ++i) row.push_back(csv_number(v[i]));
      csv.row(row);
    }
    files.push_back("vertices.csv");
  }
  OrderedJson m = manifest_head("export", dir);
  OrderedJson cfg;
  cfg["body"] = body_path.string();
  cfg["mesh"] = mesh;
  cfg["vertices"] = vertices_csv;
  m["config"] = cfg;
  m["outcome"] = OrderedJson{{"dim", k.dim()}, {"facets", k.size()}};
  m["files"] = files;
  write_json_file(dir.path / "manifest.json", m);
  log << "run directory: " << dir.path.string() << "\n";
  return {kExitOk, dir.path};
}

}  // namespace dualmink
