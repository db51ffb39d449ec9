#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

namespace hedmatch::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitTolerance = 1;
inline constexpr int kExitInput = 2;

struct RunReport {
  std::string command;
  std::string instance_path;
  std::map<std::string, double> scalars;
  std::vector<std::filesystem::path> outputs;
  int exit_code = kExitOk;
};

struct SolveOptions {
  std::filesystem::path instance;
  double tol = 1e-6;
  int max_iters = 5000;
  double epsilon = 0.0;
  std::filesystem::path out_dir = ".";
};

struct OracleOptions {
  std::filesystem::path instance;
  std::int64_t mass_scale = 1;
  std::filesystem::path out_dir = ".";
};

struct CheckOptions {
  std::filesystem::path instance;
  std::uint64_t seed = 0;
  int trials = 100;
};

struct ResidualOptions {
  SolveOptions solve{.instance = {}, .tol = 1e-6, .max_iters = 5000, .epsilon = 1e-3,
                     .out_dir = "."};
  double residual_tol = 1e-2;
};

struct GenOptions {
  std::string kind;
  std::filesystem::path out_path;
  std::uint64_t seed = 0;
  std::size_t nx = 6;
  std::size_t ny = 6;
  std::size_t nz = 5;
  std::size_t n = 65;  // uniform-shift atoms per side
  double alpha = 1.0;
};

RunReport cmd_solve(const SolveOptions& opts, std::ostream& out, std::ostream& err);
RunReport cmd_oracle(const OracleOptions& opts, std::ostream& out, std::ostream& err);
RunReport cmd_check(const CheckOptions& opts, std::ostream& out, std::ostream& err);
RunReport cmd_residual(const ResidualOptions& opts, std::ostream& out, std::ostream& err);
RunReport cmd_gen(const GenOptions& opts, std::ostream& out, std::ostream& err);

// Full command line dispatch (argv[0] is the program name).
int run(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace hedmatch::cli
