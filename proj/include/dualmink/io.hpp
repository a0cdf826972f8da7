#pragma once

#include <filesystem>
#include <functional>
#include <iosfwd>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "dualmink/solver.hpp"

namespace dualmink {

using Json = nlohmann::json;
using OrderedJson = nlohmann::ordered_json;

inline constexpr const char* kToolVersion = "0.3.0";

enum ExitCode : int {
  kExitOk = 0,
  kExitIo = 1,
  kExitSchema = 2,
  kExitHypothesis = 3,
  kExitNonConvergence = 4,
  kExitBoundViolation = 5,
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or missing config field.
class SchemaError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// Maps an exception to an exit code; unknown exceptions count as I/O.
int exit_code_for(const std::exception& e);

Json read_json_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);
void write_json_file(const std::filesystem::path& path, const OrderedJson& j);

struct RunDir {
  std::filesystem::path path;
  std::string name;
};

/// <root>/<command>-<UTC timestamp>-<NNN>, NNN the first free counter.
RunDir create_run_dir(const std::filesystem::path& root, const std::string& command);

// ---- bodies ----------------------------------------------------------------------------

/// Fixed field order: format, version, dim, count, description, normals, support.
OrderedJson body_to_json(const SupportPolytope& k, const std::string& description);
SupportPolytope body_from_json(const Json& j);

/// Wavefront OBJ of the facet complex; n = 3 only.
std::string mesh_obj(const SupportPolytope& k);

// ---- config pieces -----------------------------------------------------------------------

struct GridChoice {
  std::shared_ptr<const SphericalGrid> grid;
  OrderedJson resolved;
};

GridChoice parse_grid(const Json& j, int n, std::size_t default_nodes = 20000);
std::vector<Vec> parse_directions(const Json& j, int n, const OrthogonalGroup* group, OrderedJson& resolved);
std::shared_ptr<const StarBodySpec> parse_star_body(const Json& j, int n, const OrthogonalGroup& group,
                                                    OrderedJson& resolved);
std::function<double(const Vec&)> parse_density(const Json& j, int n, const OrthogonalGroup& group,
                                                OrderedJson& resolved);
OrthogonalGroup parse_group(const Json& j, int n);

struct SolveSetup {
  ProblemSpec spec;
  SolverConfig config;
  OrderedJson resolved;
  bool mesh = false;
};

/// Fully resolved solve configuration; hypothesis checks run eagerly.
SolveSetup parse_solve_config(const Json& j);

OrderedJson group_certificate_json(const GroupCertificate& c, const OrthogonalGroup& g);

// ---- commands --------------------------------------------------------------------------

struct CommandResult {
  int exit_code = kExitOk;
  std::filesystem::path run_dir;
};

CommandResult run_solve(const Json& config, const std::filesystem::path& out_root, std::ostream& log);
CommandResult run_verify_bounds(const Json& config, const std::filesystem::path& out_root, std::ostream& log);
CommandResult run_construct(const Json& config, const std::filesystem::path& out_root, std::ostream& log);
CommandResult run_selftest(const std::filesystem::path& out_root, std::ostream& log);
CommandResult run_export(const std::filesystem::path& body_path, bool mesh, bool vertices_csv,
                         const std::filesystem::path& out_root, std::ostream& log);

}  // namespace dualmink
