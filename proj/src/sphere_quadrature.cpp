#include "dualmink/sphere_quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <sstream>
#include <tuple>

namespace dualmink {

double kappa(int n) {
  if (n < 0) throw DomainError("kappa: negative dimension");
  return std::pow(M_PI, 0.5 * n) / std::tgamma(0.5 * n + 1.0);
}

double alpha(int k) {
  if (k < 0) throw DomainError("alpha: negative dimension");
  if (k == 0) return 1.0;
  return k * kappa(k);
}

std::string to_string(GridScheme scheme) {
  switch (scheme) {
    case GridScheme::fibonacci_sphere: return "fibonacci-sphere";
    case GridScheme::uniform_angle: return "uniform-angle";
    case GridScheme::monte_carlo: return "monte-carlo";
  }
  return "unknown";
}

GridScheme grid_scheme_from_string(const std::string& name) {
  if (name == "fibonacci-sphere") return GridScheme::fibonacci_sphere;
  if (name == "uniform-angle") return GridScheme::uniform_angle;
  if (name == "monte-carlo") return GridScheme::monte_carlo;
  throw DomainError("unknown grid scheme '" + name + "'");
}

SphericalGrid::SphericalGrid(int dim, std::vector<Vec> nodes, Vec weights, GridScheme scheme,
                             std::uint64_t seed, std::string label)
    : dim_(dim),
      nodes_(std::move(nodes)),
      weights_(std::move(weights)),
      scheme_(scheme),
      seed_(seed),
      label_(std::move(label)) {
  if (dim_ < 2) throw DomainError("SphericalGrid: dimension must be >= 2");
  if (static_cast<Eigen::Index>(nodes_.size()) != weights_.size())
    throw DomainError("SphericalGrid: node/weight count mismatch");
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    if (nodes_[i].size() != dim_) throw DomainError("SphericalGrid: node of wrong dimension");
    if (std::abs(nodes_[i].norm() - 1.0) > 1e-12)
      throw DomainError("SphericalGrid: node " + std::to_string(i) + " is not a unit vector");
    if (!(weights_[static_cast<Eigen::Index>(i)] > 0.0))
      throw DomainError("SphericalGrid: weight " + std::to_string(i) + " is not positive");
  }
}

double SphericalGrid::total_weight() const { return compensated_total(weights_); }

GridScheme default_scheme(int n) {
  if (n == 2) return GridScheme::uniform_angle;
  if (n == 3) return GridScheme::fibonacci_sphere;
  return GridScheme::monte_carlo;
}

std::vector<Vec> fibonacci_points(int count) {
  std::vector<Vec> pts;
  pts.reserve(static_cast<std::size_t>(count));
  const double golden = M_PI * (3.0 - std::sqrt(5.0));
  for (int i = 0; i < count; ++i) {
    const double z = 1.0 - (2.0 * i + 1.0) / count;
    const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
    const double th = golden * i;
    Vec p(3);
    p << r * std::cos(th), r * std::sin(th), z;
    pts.push_back(p / p.norm());
  }
  return pts;
}

std::vector<Vec> circle_points(int count, double offset) {
  std::vector<Vec> pts;
  pts.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    const double th = offset + 2.0 * M_PI * i / count;
    Vec p(2);
    p << std::cos(th), std::sin(th);
    pts.push_back(p);
  }
  return pts;
}

SphericalGrid build_grid(int n, int node_count, GridScheme scheme, std::uint64_t seed) {
  if (n < 2) throw DomainError("build_grid: n must be >= 2");
  if (node_count < 8) throw DomainError("build_grid: node_count must be >= 8");
  std::vector<Vec> nodes;
  std::ostringstream label;
  label << to_string(scheme) << " n=" << n << " N=" << node_count;
  switch (scheme) {
    case GridScheme::fibonacci_sphere:
      if (n != 3) throw DomainError("build_grid: fibonacci-sphere requires n = 3");
      nodes = fibonacci_points(node_count);
      break;
    case GridScheme::uniform_angle:
      if (n != 2) throw DomainError("build_grid: uniform-angle requires n = 2");
      nodes = circle_points(node_count);
      break;
    case GridScheme::monte_carlo: {
      Rng rng(seed);
      nodes.reserve(static_cast<std::size_t>(node_count));
      for (int i = 0; i < node_count; ++i) nodes.push_back(rng.unit_vector(n));
      label << " seed=" << seed;
      break;
    }
  }
  Vec w = Vec::Constant(node_count, alpha(n) / node_count);
  return {n, std::move(nodes), std::move(w), scheme, seed, label.str()};
}

double integrate_values(const SphericalGrid& grid, const Vec& values) {
  if (values.size() != static_cast<Eigen::Index>(grid.size()))
    throw DomainError("integrate_values: value count does not match grid");
  CompensatedSum s;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double v = values[static_cast<Eigen::Index>(i)];
    if (!std::isfinite(v))
      throw DomainError("integrate: non-finite integrand at node " + std::to_string(i));
    s.add(grid.weight(i) * v);
  }
  return s.value();
}

double integrate(const SphericalGrid& grid, const std::function<double(const Vec&)>& f) {
  CompensatedSum s;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double v = f(grid.node(i));
    if (!std::isfinite(v))
      throw DomainError("integrate: non-finite integrand at node " + std::to_string(i));
    s.add(grid.weight(i) * v);
  }
  return s.value();
}

SphericalGrid rotate_grid(const SphericalGrid& grid, const Mat& rotation) {
  std::vector<Vec> nodes;
  nodes.reserve(grid.size());
  for (const auto& u : grid.nodes()) {
    Vec v = rotation * u;
    nodes.push_back(v / v.norm());
  }
  return {grid.dim(), std::move(nodes), grid.weights(), grid.scheme(), grid.seed(),
          "rotated(" + grid.label() + ")"};
}

double monte_carlo_standard_error(const SphericalGrid& grid, const Vec& values) {
  const auto n = values.size();
  if (n < 2) return 0.0;
  const double a = alpha(grid.dim());
  CompensatedSum s1;
  CompensatedSum s2;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double x = a * values[i];
    s1.add(x);
    s2.add(x * x);
  }
  const double mean = s1.value() / n;
  const double var = std::max(0.0, (s2.value() / n - mean * mean)) * n / (n - 1);
  return std::sqrt(var / n);
}

namespace {

// Merge points that coincide up to rounding.
std::vector<Vec> dedupe(const std::vector<Vec>& pts, double tol) {
  std::map<std::array<long long, 3>, std::size_t> seen;
  std::vector<Vec> out;
  const double scale = 1.0 / tol;
  for (const auto& p : pts) {
    std::array<long long, 3> key{};
    for (int i = 0; i < 3; ++i) key[static_cast<std::size_t>(i)] = std::llround(p[i] * scale);
    bool found = false;
    // neighbouring cells guard against keys split by rounding
    for (long long dx = -1; dx <= 1 && !found; ++dx)
      for (long long dy = -1; dy <= 1 && !found; ++dy)
        for (long long dz = -1; dz <= 1 && !found; ++dz) {
          auto it = seen.find({key[0] + dx, key[1] + dy, key[2] + dz});
          if (it != seen.end() && (out[it->second] - p).norm() < 2 * tol) found = true;
        }
    if (!found) {
      seen.emplace(key, out.size());
      out.push_back(p);
    }
  }
  return out;
}

}  // namespace

std::vector<Vec> octahedral_directions(int k) {
  if (k < 1) throw DomainError("octahedral_directions: k must be >= 1");
  std::vector<Vec> pts;
  for (int a = -k; a <= k; ++a) {
    for (int b = -(k - std::abs(a)); b <= k - std::abs(a); ++b) {
      const int rest = k - std::abs(a) - std::abs(b);
      for (int c : {rest, -rest}) {
        Vec p(3);
        p << a, b, c;
        pts.push_back(p / p.norm());
        if (rest == 0) break;
      }
    }
  }
  return pts;
}

std::vector<Vec> icosahedral_directions(int frequency) {
  if (frequency < 1) throw DomainError("icosahedral_directions: frequency must be >= 1");
  const double phi = 0.5 * (1.0 + std::sqrt(5.0));
  std::vector<Vec> v;
  for (double s1 : {-1.0, 1.0})
    for (double s2 : {-1.0, 1.0}) {
      Vec a(3), b(3), c(3);
      a << 0, s1, s2 * phi;
      b << s1, s2 * phi, 0;
      c << s2 * phi, 0, s1;
      v.push_back(a.normalized());
      v.push_back(b.normalized());
      v.push_back(c.normalized());
    }
  // faces: triples of mutually nearest vertices
  double edge = 10.0;
  for (std::size_t i = 0; i < v.size(); ++i)
    for (std::size_t j = i + 1; j < v.size(); ++j) edge = std::min(edge, (v[i] - v[j]).norm());
  std::vector<Vec> pts;
  for (std::size_t i = 0; i < v.size(); ++i)
    for (std::size_t j = i + 1; j < v.size(); ++j)
      for (std::size_t l = j + 1; l < v.size(); ++l) {
        const double tol = edge * 1.01;
        if ((v[i] - v[j]).norm() > tol || (v[i] - v[l]).norm() > tol || (v[j] - v[l]).norm() > tol)
          continue;
        for (int a = 0; a <= frequency; ++a)
          for (int b = 0; a + b <= frequency; ++b) {
            const int c = frequency - a - b;
            Vec p = (a * v[i] + b * v[j] + c * v[l]) / frequency;
            pts.push_back(p / p.norm());
          }
      }
  return dedupe(pts, 1e-9);
}

double covering_angle(const std::vector<Vec>& directions, const SphericalGrid& probe) {
  double worst = 0.0;
  for (const auto& u : probe.nodes()) {
    double best = -2.0;
    for (const auto& d : directions) best = std::max(best, u.dot(d));
    worst = std::max(worst, std::acos(std::clamp(best, -1.0, 1.0)));
  }
  return worst;
}

}  // namespace dualmink
