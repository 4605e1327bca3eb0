#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "randfem/solver.hpp"

namespace randfem {

// Parsed CLI/config-file state for one invocation. Flags override config
// file values; the RANDFEM_SEED environment variable is the seed fallback.
struct RunConfig {
  enum class Command { mesh, solve, study, table1 };

  Command command = Command::study;
  Estimator estimator = Estimator::mc;
  std::string forcing = "f2"; // f1 | f1eps | f2 | const
  std::string sigma = "unit"; // unit | sine
  int n_min = 2;
  int n_max = 6;
  int replications = 200;
  std::uint64_t seed = 42;
  double tol = 1e-10;
  std::string out;
  std::string mesh_in;
  std::string cache_dir;
  bool validate = false;
  bool timing = false;
  bool full_scale = false;
  int threads = 0; // 0 = hardware concurrency
};

// Parses "<command> [flags...]" with optional `--config file` (flat
// "key = value" lines). Throws param_error with a message naming the
// offending key on any violation. `env_seed` stands in for RANDFEM_SEED
// (pass nullptr to read the real environment).
RunConfig parse_config(const std::vector<std::string>& args, const char* env_seed = nullptr);

ForcingTerm forcing_by_name(const std::string& name);
CoefficientField sigma_by_name(const std::string& name);

std::string usage_text();

} // namespace randfem
