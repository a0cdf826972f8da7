#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "dualmink/io.hpp"

int main(int argc, char** argv) {
  using namespace dualmink;
  CLI::App app{"Dual Minkowski problems for G-invariant convex bodies"};
  app.set_version_flag("--version", std::string(kToolVersion));
  app.require_subcommand(1);

  std::string config_path;
  std::string out_root = "runs";
  std::string body_path;
  bool mesh = false;
  bool vertices = false;

  auto* solve = app.add_subcommand("solve", "Solve the measure equation for a symmetric problem");
  auto* bounds = app.add_subcommand("verify-bounds", "Run box, Santalo, dual-product and inradius sweeps");
  auto* construct = app.add_subcommand("construct", "Build a non-symmetric G-invariant body");
  for (auto* sub : {solve, bounds, construct}) {
    sub->add_option("--config", config_path, "JSON config file")->required();
    sub->add_option("--out", out_root, "Root for run directories");
  }
  auto* selftest = app.add_subcommand("selftest", "Quick internal consistency checks");
  selftest->add_option("--out", out_root, "Root for run directories");
  auto* exp = app.add_subcommand("export", "Export a stored body");
  exp->add_option("--body", body_path, "body.json written by solve or construct")->required();
  exp->add_flag("--mesh", mesh, "Write an OBJ mesh (n = 3)");
  exp->add_flag("--vertices", vertices, "Write vertex coordinates as CSV");
  exp->add_option("--out", out_root, "Root for run directories");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitSchema;
  }

  try {
    CommandResult r;
    if (*solve) r = run_solve(read_json_file(config_path), out_root, std::cout);
    else if (*bounds) r = run_verify_bounds(read_json_file(config_path), out_root, std::cout);
    else if (*construct) r = run_construct(read_json_file(config_path), out_root, std::cout);
    else if (*selftest) r = run_selftest(out_root, std::cout);
    else r = run_export(body_path, mesh, vertices, out_root, std::cout);
    return r.exit_code;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e);
  }
}
