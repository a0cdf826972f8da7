#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "dualmink/core.hpp"

namespace dualmink {

/// Volume of the unit ball in R^n.
double kappa(int n);

/// Surface area of the unit sphere in R^k. alpha(1) = 2 (two points) and
/// alpha(0) = 1, the counting conventions used by the box estimates.
double alpha(int k);

enum class GridScheme { fibonacci_sphere, uniform_angle, monte_carlo };

std::string to_string(GridScheme scheme);
GridScheme grid_scheme_from_string(const std::string& name);

/// Quadrature rule on S^{n-1}: unit nodes with positive weights whose sum
/// approximates the surface area alpha(n). Immutable after construction.
class SphericalGrid {
 public:
  SphericalGrid(int dim, std::vector<Vec> nodes, Vec weights, GridScheme scheme,
                std::uint64_t seed, std::string label = {});

  [[nodiscard]] int dim() const { return dim_; }
  [[nodiscard]] std::size_t size() const { return nodes_.size(); }
  [[nodiscard]] const std::vector<Vec>& nodes() const { return nodes_; }
  [[nodiscard]] const Vec& node(std::size_t i) const { return nodes_[i]; }
  [[nodiscard]] const Vec& weights() const { return weights_; }
  [[nodiscard]] double weight(std::size_t i) const { return weights_[static_cast<Eigen::Index>(i)]; }
  [[nodiscard]] GridScheme scheme() const { return scheme_; }
  [[nodiscard]] std::uint64_t seed() const { return seed_; }
  /// Free-form provenance, e.g. "fibonacci-sphere N=20000" or "rotated(...)".
  [[nodiscard]] const std::string& label() const { return label_; }
  [[nodiscard]] double total_weight() const;

 private:
  int dim_;
  std::vector<Vec> nodes_;
  Vec weights_;
  GridScheme scheme_;
  std::uint64_t seed_;
  std::string label_;
};

/// Deterministic grid for a (scheme, node_count, seed) triple.
///   fibonacci-sphere: n = 3 only, equal weights 4*pi/N.
///   uniform-angle:    n = 2 only, equal weights 2*pi/N.
///   monte-carlo:      any n, seeded uniform nodes, weights alpha(n)/N.
SphericalGrid build_grid(int n, int node_count, GridScheme scheme, std::uint64_t seed = 0);

/// Default scheme for a dimension (uniform-angle, fibonacci-sphere, monte-carlo).
GridScheme default_scheme(int n);

/// Sum of w_i * values_i with compensated summation.
double integrate_values(const SphericalGrid& grid, const Vec& values);

/// Sum of w_i f(u_i). Throws DomainError naming the first node whose value is
/// not finite.
double integrate(const SphericalGrid& grid, const std::function<double(const Vec&)>& f);

/// Same weights, nodes mapped by an orthogonal matrix.
SphericalGrid rotate_grid(const SphericalGrid& grid, const Mat& rotation);

/// Standard error of integrate(grid, f) for a monte-carlo grid, estimated from
/// the sample variance of alpha(n) f(u_i).
double monte_carlo_standard_error(const SphericalGrid& grid, const Vec& values);

// ---- direction sets -------------------------------------------------------

/// Golden-spiral points on S^2.
std::vector<Vec> fibonacci_points(int count);

/// count equally spaced unit vectors in R^2 starting at angle offset.
std::vector<Vec> circle_points(int count, double offset = 0.0);

/// Normalized integer points of the l1-sphere of radius k in R^3: 4k^2+2
/// directions, stable under every signed permutation of coordinates.
std::vector<Vec> octahedral_directions(int k);

/// Class-I geodesic subdivision of the icosahedron with the given frequency:
/// 10 f^2 + 2 directions (12, 42, 92, 162, ..., 642 for f = 8).
std::vector<Vec> icosahedral_directions(int frequency);

/// Largest angle between a probe node and its nearest direction.
double covering_angle(const std::vector<Vec>& directions, const SphericalGrid& probe);

}  // namespace dualmink
