#include "dualmink/groups.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <deque>
#include <numeric>

namespace dualmink {

namespace {

Vec flatten(const Mat& m) { return Eigen::Map<const Vec>(m.data(), m.size()); }

double max_abs(const Mat& m) { return m.cwiseAbs().maxCoeff(); }

void check_orthogonal(const Mat& g, const std::string& what) {
  if (g.rows() != g.cols()) throw DomainError(what + ": matrix is not square");
  const double err = max_abs(g.transpose() * g - Mat::Identity(g.rows(), g.cols()));
  if (err > 1e-10)
    throw DomainError(what + ": matrix is not orthogonal (|g^T g - I|_max = " +
                      std::to_string(err) + ")");
}

Mat permutation_matrix(const std::vector<int>& perm) {
  const auto m = static_cast<Eigen::Index>(perm.size());
  Mat p = Mat::Zero(m, m);
  for (Eigen::Index i = 0; i < m; ++i) p(perm[static_cast<std::size_t>(i)], i) = 1.0;
  return p;
}

Mat block_diag(const Mat& a, const Mat& b) {
  Mat out = Mat::Zero(a.rows() + b.rows(), a.cols() + b.cols());
  out.topLeftCorner(a.rows(), a.cols()) = a;
  out.bottomRightCorner(b.rows(), b.cols()) = b;
  return out;
}

}  // namespace

// ---- PointHash ---------------------------------------------------------------

PointHash::PointHash(int dim, double tol) : tol_(tol), cell_(4.0 * tol), proj_(dim) {
  if (!(tol > 0.0)) throw DomainError("PointHash: tolerance must be positive");
  Rng rng(0x5EEDF00DULL + static_cast<std::uint64_t>(dim));
  proj_ = rng.unit_vector(dim);
}

long long PointHash::bucket(const Vec& x) const {
  return static_cast<long long>(std::floor(proj_.dot(x) / cell_));
}

void PointHash::insert(const Vec& x) {
  table_.emplace(bucket(x), static_cast<int>(points_.size()));
  points_.push_back(x);
}

int PointHash::find(const Vec& x) const {
  const long long b = bucket(x);
  int best = -1;
  for (long long k = b - 1; k <= b + 1; ++k) {
    auto [lo, hi] = table_.equal_range(k);
    for (auto it = lo; it != hi; ++it) {
      if ((points_[static_cast<std::size_t>(it->second)] - x).norm() <= tol_ &&
          (best < 0 || it->second < best))
        best = it->second;
    }
  }
  return best;
}

// ---- OrthogonalGroup ---------------------------------------------------------

OrthogonalGroup::OrthogonalGroup(int dim, std::vector<Mat> elements,
                                 std::vector<int> generator_indices, std::string label)
    : dim_(dim),
      elements_(std::move(elements)),
      generators_(std::move(generator_indices)),
      label_(std::move(label)) {
  if (elements_.empty()) throw DomainError("OrthogonalGroup: empty element list");
  for (const auto& g : elements_) {
    if (g.rows() != dim_) throw DomainError("OrthogonalGroup: element of wrong dimension");
    check_orthogonal(g, "OrthogonalGroup");
  }
  if (max_abs(elements_[0] - Mat::Identity(dim_, dim_)) > 1e-8)
    throw DomainError("OrthogonalGroup: element 0 must be the identity");
}

int OrthogonalGroup::find(const Mat& m, double tol) const {
  for (std::size_t i = 0; i < elements_.size(); ++i)
    if (max_abs(elements_[i] - m) <= tol) return static_cast<int>(i);
  return -1;
}

OrthogonalGroup enumerate_group(const std::vector<Mat>& generators, std::size_t max_order,
                                const std::string& label) {
  if (generators.empty()) throw DomainError("enumerate_group: no generators");
  if (max_order < 1) throw DomainError("enumerate_group: max_order must be >= 1");
  const auto n = generators.front().rows();
  for (const auto& g : generators) {
    if (g.rows() != n) throw DomainError("enumerate_group: generators of mixed dimension");
    check_orthogonal(g, "enumerate_group");
  }
  const double tol = 1e-8;
  // Euclidean lookup radius covering a max-norm distance of tol
  PointHash index(static_cast<int>(n * n), tol * static_cast<double>(n));
  std::vector<Mat> elems;
  auto lookup = [&](const Mat& m) {
    const int id = index.find(flatten(m));
    if (id >= 0 && max_abs(elems[static_cast<std::size_t>(id)] - m) <= tol) return id;
    return -1;
  };
  elems.push_back(Mat::Identity(n, n));
  index.insert(flatten(elems.back()));
  std::deque<std::size_t> queue{0};
  while (!queue.empty()) {
    const Mat cur = elems[queue.front()];
    queue.pop_front();
    for (const auto& g : generators) {
      Mat prod = g * cur;
      if (lookup(prod) >= 0) continue;
      if (elems.size() >= max_order)
        throw NumericalError("enumerate_group: closure not reached within " +
                             std::to_string(max_order) + " elements");
      elems.push_back(prod);
      index.insert(flatten(prod));
      queue.push_back(elems.size() - 1);
    }
  }
  std::vector<int> gen_idx;
  for (const auto& g : generators) gen_idx.push_back(lookup(g));
  return {static_cast<int>(n), std::move(elems), std::move(gen_idx), label};
}

// ---- standard groups ---------------------------------------------------------

int GroupSpec::dim() const {
  switch (kind) {
    case Kind::simplex_symmetry:
    case Kind::simplex_rotation:
    case Kind::cube_rotation: return param;
    case Kind::cyclic: return 2;
    case Kind::direct_sum: {
      int d = 0;
      for (const auto& p : parts) d += p.dim();
      return d;
    }
  }
  return 0;
}

std::string GroupSpec::name() const {
  switch (kind) {
    case Kind::simplex_symmetry: return "simplex-symmetry(" + std::to_string(param) + ")";
    case Kind::simplex_rotation: return "simplex-rotation(" + std::to_string(param) + ")";
    case Kind::cube_rotation: return "cube-rotation(" + std::to_string(param) + ")";
    case Kind::cyclic: return "cyclic(" + std::to_string(param) + ")";
    case Kind::direct_sum: {
      std::string s = "direct-sum(";
      for (std::size_t i = 0; i < parts.size(); ++i) s += (i ? "," : "") + parts[i].name();
      return s + ")";
    }
  }
  return "?";
}

namespace {

struct SpecParser {
  std::string s;
  std::size_t pos = 0;

  void skip_ws() {
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
  }
  [[noreturn]] void fail(const std::string& why) const {
    throw DomainError("group spec '" + s + "': " + why + " at position " + std::to_string(pos));
  }
  void expect(char c) {
    skip_ws();
    if (pos >= s.size() || s[pos] != c) fail(std::string("expected '") + c + "'");
    ++pos;
  }
  GroupSpec parse() {
    skip_ws();
    std::size_t start = pos;
    while (pos < s.size() && (std::isalpha(static_cast<unsigned char>(s[pos])) || s[pos] == '-' ||
                              s[pos] == '_'))
      ++pos;
    std::string word = s.substr(start, pos - start);
    std::replace(word.begin(), word.end(), '_', '-');
    expect('(');
    if (word == "direct-sum") {
      std::vector<GroupSpec> parts;
      parts.push_back(parse());
      skip_ws();
      while (pos < s.size() && s[pos] == ',') {
        ++pos;
        parts.push_back(parse());
        skip_ws();
      }
      expect(')');
      return GroupSpec::direct_sum(std::move(parts));
    }
    skip_ws();
    start = pos;
    while (pos < s.size() && (std::isdigit(static_cast<unsigned char>(s[pos])) || s[pos] == '-'))
      ++pos;
    if (start == pos) fail("expected integer parameter");
    const int v = std::stoi(s.substr(start, pos - start));
    expect(')');
    if (word == "simplex-symmetry") return GroupSpec::simplex_symmetry(v);
    if (word == "simplex-rotation") return GroupSpec::simplex_rotation(v);
    if (word == "cube-rotation") return GroupSpec::cube_rotation(v);
    if (word == "cyclic") return GroupSpec::cyclic(v);
    fail("unknown group '" + word + "'");
  }
};

}  // namespace

GroupSpec parse_group_spec(const std::string& text) {
  SpecParser p{text};
  GroupSpec g = p.parse();
  p.skip_ws();
  if (p.pos != text.size()) p.fail("trailing characters");
  return g;
}

Mat simplex_basis(int m) {
  if (m < 2) throw DomainError("simplex_basis: m must be >= 2");
  if (m == 3) {
    Mat b(4, 3);
    b << 1, 1, 1,
         1, -1, -1,
         -1, 1, -1,
         -1, -1, 1;
    return 0.5 * b;
  }
  return orthogonal_complement(Vec::Ones(m + 1));
}

namespace {

std::vector<Mat> standard_generators(const GroupSpec& spec) {
  using Kind = GroupSpec::Kind;
  std::vector<Mat> gens;
  const int m = spec.param;
  switch (spec.kind) {
    case Kind::simplex_symmetry:
    case Kind::simplex_rotation: {
      if (m < 2) throw DomainError(spec.name() + ": simplex groups need m >= 2");
      const Mat b = simplex_basis(m);
      std::vector<int> perm(static_cast<std::size_t>(m + 1));
      if (spec.kind == Kind::simplex_symmetry) {
        for (int k = 0; k < m; ++k) {
          std::iota(perm.begin(), perm.end(), 0);
          std::swap(perm[static_cast<std::size_t>(k)], perm[static_cast<std::size_t>(k + 1)]);
          gens.push_back(b.transpose() * permutation_matrix(perm) * b);
        }
      } else {
        for (int k = 2; k <= m; ++k) {
          std::iota(perm.begin(), perm.end(), 0);
          perm[0] = 1;
          perm[1] = k;
          perm[static_cast<std::size_t>(k)] = 0;
          gens.push_back(b.transpose() * permutation_matrix(perm) * b);
        }
      }
      break;
    }
    case Kind::cube_rotation: {
      if (m < 3 || m % 2 == 0)
        throw DomainError(spec.name() + ": cube rotations need odd m >= 3");
      for (int k = 0; k + 1 < m; ++k) {
        Mat g = Mat::Identity(m, m);
        g(k, k) = 0;
        g(k + 1, k + 1) = 0;
        g(k + 1, k) = 1;
        g(k, k + 1) = -1;
        gens.push_back(g);
      }
      break;
    }
    case Kind::cyclic: {
      if (m < 3 || m % 2 == 0)
        throw DomainError(spec.name() + ": cyclic groups need odd order >= 3");
      const double th = 2.0 * M_PI / m;
      Mat g(2, 2);
      g << std::cos(th), -std::sin(th), std::sin(th), std::cos(th);
      gens.push_back(g);
      break;
    }
    case Kind::direct_sum:
      break;
  }
  return gens;
}

OrthogonalGroup build_standard(const GroupSpec& spec) {
  if (spec.kind != GroupSpec::Kind::direct_sum) {
    std::size_t cap = 1;
    for (int k = 2; k <= spec.param + 1 && cap < 10'000'000; ++k) cap *= static_cast<std::size_t>(k);
    cap = std::max<std::size_t>(cap * (1u << std::min(spec.param, 20)), 64);
    return enumerate_group(standard_generators(spec), cap, spec.name());
  }
  if (spec.parts.empty()) throw DomainError("direct-sum: no summands");
  OrthogonalGroup acc = build_standard(spec.parts.front());
  for (std::size_t k = 1; k < spec.parts.size(); ++k) {
    const OrthogonalGroup next = build_standard(spec.parts[k]);
    std::vector<Mat> elems;
    elems.reserve(acc.order() * next.order());
    for (const auto& a : acc.elements())
      for (const auto& b : next.elements()) elems.push_back(block_diag(a, b));
    std::vector<int> gens;
    for (int gi : acc.generator_indices()) gens.push_back(gi * static_cast<int>(next.order()));
    for (int gi : next.generator_indices()) gens.push_back(gi);
    acc = OrthogonalGroup(acc.dim() + next.dim(), std::move(elems), std::move(gens), spec.name());
  }
  return acc;
}

}  // namespace

OrthogonalGroup standard_group(const GroupSpec& spec, int n) {
  if (spec.dim() != n)
    throw DomainError(spec.name() + " acts on R^" + std::to_string(spec.dim()) + ", not R^" +
                      std::to_string(n));
  OrthogonalGroup g = build_standard(spec);
  const GroupCertificate c = certify(g);
  if (c.has_nonzero_fixed_point || c.contains_negation)
    throw DomainError(spec.name() + ": certificate failed (fixed point or -I present)");
  return g;
}

GroupCertificate certify(const OrthogonalGroup& g) {
  const int n = g.dim();
  Mat avg = Mat::Zero(n, n);
  bool neg = false;
  const Mat minus_i = -Mat::Identity(n, n);
  for (const auto& e : g.elements()) {
    avg += e;
    if (max_abs(e - minus_i) <= 1e-8) neg = true;
  }
  avg /= static_cast<double>(g.order());
  GroupCertificate c;
  c.order = g.order();
  c.contains_negation = neg;
  // induced max-norm (largest absolute row sum)
  c.averaging_norm = avg.cwiseAbs().rowwise().sum().maxCoeff();
  c.has_nonzero_fixed_point = c.averaging_norm > 1e-8;
  return c;
}

OrbitPartition orbits(const OrthogonalGroup& g, const std::vector<Vec>& directions,
                      double merge_tol) {
  const auto n = directions.size();
  PointHash index(g.dim(), merge_tol);
  for (std::size_t i = 0; i < n; ++i) {
    if (directions[i].size() != g.dim()) throw DomainError("orbits: direction of wrong dimension");
    if (std::abs(directions[i].norm() - 1.0) > 1e-10)
      throw DomainError("orbits: direction " + std::to_string(i) + " is not a unit vector");
    const int other = index.find(directions[i]);
    if (other >= 0)
      throw DomainError("orbits: directions " + std::to_string(other) + " and " +
                        std::to_string(i) + " collide at merge_tol");
    index.insert(directions[i]);
  }
  std::vector<int> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto root = [&](int x) {
    while (parent[static_cast<std::size_t>(x)] != x) {
      parent[static_cast<std::size_t>(x)] =
          parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
      x = parent[static_cast<std::size_t>(x)];
    }
    return x;
  };
  OrbitPartition out;
  for (const auto& e : g.elements()) {
    for (std::size_t i = 0; i < n; ++i) {
      const int j = index.find(e * directions[i]);
      if (j < 0) {
        out.stable = false;
        continue;
      }
      const int a = root(static_cast<int>(i));
      const int b = root(j);
      if (a != b) parent[static_cast<std::size_t>(std::max(a, b))] = std::min(a, b);
    }
  }
  out.orbit_of.assign(n, -1);
  for (std::size_t i = 0; i < n; ++i) {
    const auto r = static_cast<std::size_t>(root(static_cast<int>(i)));
    if (out.orbit_of[r] < 0) {
      out.orbit_of[r] = static_cast<int>(out.orbits.size());
      out.orbits.emplace_back();
      out.representatives.push_back(static_cast<int>(r));
    }
    out.orbit_of[i] = out.orbit_of[r];
    out.orbits[static_cast<std::size_t>(out.orbit_of[i])].push_back(static_cast<int>(i));
  }
  return out;
}

std::function<double(const Vec&)> symmetrize_density(const OrthogonalGroup& g,
                                                     std::function<double(const Vec&)> f) {
  return [elems = g.elements(), f = std::move(f)](const Vec& u) {
    // sorting the summands makes the value identical at g u and u
    std::vector<double> vals;
    vals.reserve(elems.size());
    for (const auto& e : elems) vals.push_back(f(e * u));
    std::sort(vals.begin(), vals.end());
    CompensatedSum s;
    for (double v : vals) s.add(v);
    return s.value() / static_cast<double>(elems.size());
  };
}

}  // namespace dualmink
