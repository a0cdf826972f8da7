#pragma once

#include <functional>
#include <unordered_map>
#include <string>
#include <vector>

#include "dualmink/core.hpp"

namespace dualmink {

/// Finite subgroup of O(n) held as an explicit element list. Element 0 is the
/// identity.
class OrthogonalGroup {
 public:
  OrthogonalGroup(int dim, std::vector<Mat> elements, std::vector<int> generator_indices,
                  std::string label);

  [[nodiscard]] int dim() const { return dim_; }
  [[nodiscard]] std::size_t order() const { return elements_.size(); }
  [[nodiscard]] const std::vector<Mat>& elements() const { return elements_; }
  [[nodiscard]] const Mat& element(std::size_t i) const { return elements_[i]; }
  [[nodiscard]] const std::vector<int>& generator_indices() const { return generators_; }
  [[nodiscard]] const std::string& label() const { return label_; }

  /// Index of the element equal to m within tol (max-norm), or -1.
  [[nodiscard]] int find(const Mat& m, double tol = 1e-8) const;

 private:
  int dim_;
  std::vector<Mat> elements_;
  std::vector<int> generators_;
  std::string label_;
};

struct GroupCertificate {
  bool has_nonzero_fixed_point = false;
  bool contains_negation = false;
  std::size_t order = 0;
  double averaging_norm = 0.0;
};

/// Breadth-first closure of the generators. Throws NumericalError when more
/// than max_order elements appear.
OrthogonalGroup enumerate_group(const std::vector<Mat>& generators, std::size_t max_order,
                                const std::string& label = "explicit");

/// Parameters of a standard group. The dimension follows from the kind:
///   simplex_symmetry(m), simplex_rotation(m): n = m (symmetric/alternating
///     group of a centred regular simplex, m >= 2);
///   cube_rotation(m): n = m, rotations of the cube, m >= 3 odd;
///   cyclic(l): n = 2, rotation by 2 pi / l, l >= 3 odd;
///   direct_sum(parts): block-diagonal product.
struct GroupSpec {
  enum class Kind { simplex_symmetry, simplex_rotation, cube_rotation, cyclic, direct_sum };
  Kind kind = Kind::cyclic;
  int param = 3;
  std::vector<GroupSpec> parts;

  static GroupSpec simplex_symmetry(int m) { return {Kind::simplex_symmetry, m, {}}; }
  static GroupSpec simplex_rotation(int m) { return {Kind::simplex_rotation, m, {}}; }
  static GroupSpec cube_rotation(int m) { return {Kind::cube_rotation, m, {}}; }
  static GroupSpec cyclic(int l) { return {Kind::cyclic, l, {}}; }
  static GroupSpec direct_sum(std::vector<GroupSpec> parts) {
    return {Kind::direct_sum, 0, std::move(parts)};
  }

  [[nodiscard]] int dim() const;
  [[nodiscard]] std::string name() const;
};

/// Parses names such as "cyclic(5)", "simplex-symmetry(3)" or
/// "direct-sum(cyclic(3),cyclic(3))".
GroupSpec parse_group_spec(const std::string& text);

/// Builds a standard group; n must equal spec.dim(). Parameters outside the
/// admissible ranges are rejected with DomainError, and the result is
/// certified fixed-point free without -I.
OrthogonalGroup standard_group(const GroupSpec& spec, int n);

/// Orthonormal basis (columns, (m+1) x m) of the sum-zero hyperplane used to
/// realize the simplex groups. For m = 3 this is the Hadamard basis, in which
/// the tetrahedral group acts by signed permutations.
Mat simplex_basis(int m);

GroupCertificate certify(const OrthogonalGroup& g);

struct OrbitPartition {
  std::vector<std::vector<int>> orbits;  // sorted index lists
  std::vector<int> representatives;      // smallest index of each orbit
  std::vector<int> orbit_of;             // direction index -> orbit index
  bool stable = true;  // every g u_i matched some u_j
};

/// Union-find partition of directions under G. Throws DomainError when two
/// distinct directions lie closer than merge_tol.
OrbitPartition orbits(const OrthogonalGroup& g, const std::vector<Vec>& directions,
                      double merge_tol = 1e-8);

/// u -> |G|^{-1} sum_g f(g u).
std::function<double(const Vec&)> symmetrize_density(const OrthogonalGroup& g,
                                                     std::function<double(const Vec&)> f);

/// Exact-match lookup of points up to a Euclidean tolerance. Points are
/// bucketed by a fixed random projection, so lookups cost O(1) on average in
/// any dimension.
class PointHash {
 public:
  PointHash(int dim, double tol);
  /// Stores x under id = size() before the call.
  void insert(const Vec& x);
  /// Id of a stored point within tol of x (smallest id on ties), or -1.
  [[nodiscard]] int find(const Vec& x) const;
  [[nodiscard]] std::size_t size() const { return points_.size(); }

 private:
  [[nodiscard]] long long bucket(const Vec& x) const;
  double tol_;
  double cell_;
  Vec proj_;
  std::vector<Vec> points_;
  std::unordered_multimap<long long, int> table_;
};

}  // namespace dualmink
