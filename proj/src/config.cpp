#include "randfem/config.hpp"

#include <cstdlib>
#include <fstream>
#include <map>
#include <set>

#include "randfem/errors.hpp"

namespace randfem {

namespace {

const std::set<std::string> kKnownKeys = {
    "estimator", "forcing", "sigma",   "n",       "M",          "seed",   "tol",
    "out",       "threads", "timing",  "validate", "full-scale", "in",     "cache-dir"};

bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1" || value == "yes") return true;
  if (value == "false" || value == "0" || value == "no") return false;
  throw param_error("key '" + key + "': expected a boolean, got '" + value + "'");
}

std::uint64_t parse_u64(const std::string& key, const std::string& value) {
  try {
    if (value.empty() || value[0] == '-') throw std::invalid_argument(value);
    std::size_t pos = 0;
    const std::uint64_t v = std::stoull(value, &pos);
    if (pos != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw param_error("key '" + key + "': expected an unsigned integer, got '" + value + "'");
  }
}

int parse_int(const std::string& key, const std::string& value) {
  try {
    std::size_t pos = 0;
    const int v = std::stoi(value, &pos);
    if (pos != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw param_error("key '" + key + "': expected an integer, got '" + value + "'");
  }
}

double parse_double(const std::string& key, const std::string& value) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(value, &pos);
    if (pos != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw param_error("key '" + key + "': expected a number, got '" + value + "'");
  }
}

void apply_key(RunConfig& config, const std::string& key, const std::string& value) {
  if (key == "estimator") {
    if (value == "mc") config.estimator = Estimator::mc;
    else if (value == "is") config.estimator = Estimator::is;
    else if (value == "barycentric") config.estimator = Estimator::barycentric;
    else throw param_error("key 'estimator': expected mc, is or barycentric, got '" + value + "'");
  } else if (key == "forcing") {
    if (value != "f1" && value != "f1eps" && value != "f2" && value != "const")
      throw param_error("key 'forcing': expected f1, f1eps, f2 or const, got '" + value + "'");
    config.forcing = value;
  } else if (key == "sigma") {
    if (value != "unit" && value != "sine")
      throw param_error("key 'sigma': expected unit or sine, got '" + value + "'");
    config.sigma = value;
  } else if (key == "n") {
    const auto dots = value.find("..");
    if (dots == std::string::npos) {
      config.n_min = config.n_max = parse_int(key, value);
    } else {
      config.n_min = parse_int(key, value.substr(0, dots));
      config.n_max = parse_int(key, value.substr(dots + 2));
    }
  } else if (key == "M") {
    config.replications = parse_int(key, value);
  } else if (key == "seed") {
    config.seed = parse_u64(key, value);
  } else if (key == "tol") {
    config.tol = parse_double(key, value);
  } else if (key == "out") {
    config.out = value;
  } else if (key == "in") {
    config.mesh_in = value;
  } else if (key == "cache-dir") {
    config.cache_dir = value;
  } else if (key == "threads") {
    config.threads = parse_int(key, value);
  } else if (key == "timing") {
    config.timing = parse_bool(key, value);
  } else if (key == "validate") {
    config.validate = parse_bool(key, value);
  } else if (key == "full-scale") {
    config.full_scale = parse_bool(key, value);
  } else {
    throw param_error("unknown key '" + key + "'");
  }
}

std::map<std::string, std::string> read_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw param_error("cannot read config file '" + path + "'");
  std::map<std::string, std::string> values;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const auto strip = [](std::string s) {
      const auto b = s.find_first_not_of(" \t\r");
      if (b == std::string::npos) return std::string();
      const auto e = s.find_last_not_of(" \t\r");
      return s.substr(b, e - b + 1);
    };
    const std::string stripped = strip(line);
    if (stripped.empty()) continue;
    const auto eq = stripped.find('=');
    if (eq == std::string::npos)
      throw param_error("config file '" + path + "' line " + std::to_string(lineno) +
                        ": expected key = value");
    const std::string key = strip(stripped.substr(0, eq));
    const std::string value = strip(stripped.substr(eq + 1));
    if (kKnownKeys.find(key) == kKnownKeys.end())
      throw param_error("unknown key '" + key + "' in config file '" + path + "'");
    values[key] = value;
  }
  return values;
}

} // namespace

RunConfig parse_config(const std::vector<std::string>& args, const char* env_seed) {
  if (args.empty())
    throw param_error("missing command; expected mesh, solve, study or table1");

  RunConfig config;
  if (args[0] == "mesh") config.command = RunConfig::Command::mesh;
  else if (args[0] == "solve") config.command = RunConfig::Command::solve;
  else if (args[0] == "study") config.command = RunConfig::Command::study;
  else if (args[0] == "table1") config.command = RunConfig::Command::table1;
  else throw param_error("unknown command '" + args[0] + "'");

  // Command-specific defaults; explicit keys override below.
  if (config.command == RunConfig::Command::table1) {
    config.n_min = 3;
    config.n_max = 8;
    config.replications = 10000;
  } else if (config.command == RunConfig::Command::mesh ||
             config.command == RunConfig::Command::solve) {
    config.n_min = config.n_max = 2;
  }

  std::set<std::string> flag_keys; // keys set explicitly, by flag or by file
  std::string config_path;
  for (std::size_t i = 1; i < args.size(); ++i) {
    std::string token = args[i];
    if (token.rfind("--", 0) != 0)
      throw param_error("unexpected argument '" + token + "'");
    token.erase(0, 2);
    std::string value;
    bool has_value = false;
    const auto eq = token.find('=');
    if (eq != std::string::npos) {
      value = token.substr(eq + 1);
      token.erase(eq);
      has_value = true;
    }
    if (token == "config") {
      if (!has_value) {
        if (++i >= args.size()) throw param_error("flag --config needs a file path");
        value = args[i];
      }
      config_path = value;
      continue;
    }
    if (kKnownKeys.find(token) == kKnownKeys.end())
      throw param_error("unknown flag '--" + token + "'");
    if (!has_value) {
      const bool boolean = token == "timing" || token == "validate" || token == "full-scale";
      if (boolean && (i + 1 >= args.size() || args[i + 1].rfind("--", 0) == 0)) {
        value = "true";
      } else {
        if (++i >= args.size()) throw param_error("flag '--" + token + "' needs a value");
        value = args[i];
      }
    }
    apply_key(config, token, value);
    flag_keys.insert(token);
  }

  if (!config_path.empty()) {
    const auto file_values = read_config_file(config_path);
    for (const auto& [key, value] : file_values)
      if (flag_keys.find(key) == flag_keys.end()) {
        apply_key(config, key, value);
        flag_keys.insert(key);
      }
  }

  if (flag_keys.find("seed") == flag_keys.end()) {
    const char* env = env_seed != nullptr ? env_seed : std::getenv("RANDFEM_SEED");
    if (env != nullptr && env[0] != '\0') config.seed = parse_u64("RANDFEM_SEED", env);
  }

  if (config.full_scale) {
    if (flag_keys.find("M") == flag_keys.end() &&
        config.command != RunConfig::Command::table1)
      config.replications = 10000;
    if (flag_keys.find("n") == flag_keys.end()) {
      config.n_min = config.command == RunConfig::Command::table1 ? 3 : 2;
      config.n_max = 8;
    }
  }

  if (config.n_min < 1 || config.n_max > 12 || config.n_min > config.n_max)
    throw param_error("key 'n': levels must satisfy 1 <= n_min <= n_max <= 12");
  if (config.replications < 1) throw param_error("key 'M': must be at least 1");
  if (!(config.tol > 0.0 && config.tol < 1.0))
    throw param_error("key 'tol': must lie in (0, 1)");
  if (config.threads < 0) throw param_error("key 'threads': must be nonnegative");
  if ((config.estimator == Estimator::is || config.estimator == Estimator::barycentric) &&
      config.sigma != "unit")
    throw param_error(std::string("estimator=") + estimator_name(config.estimator) +
                      " requires sigma=unit");
  return config;
}

ForcingTerm forcing_by_name(const std::string& name) {
  if (name == "f1") return forcing_f1();
  if (name == "f1eps") return forcing_f1_eps();
  if (name == "f2") return forcing_f2();
  if (name == "const") return forcing_constant(1.0);
  throw param_error("unknown forcing '" + name + "'");
}

CoefficientField sigma_by_name(const std::string& name) {
  if (name == "unit") return sigma_unit();
  if (name == "sine") return sigma_sine();
  throw param_error("unknown sigma '" + name + "'");
}

std::string usage_text() {
  return "usage: randfem <command> [flags]\n"
         "\n"
         "commands:\n"
         "  mesh    build or import a mesh, report counts, optionally validate/export\n"
         "  solve   one realization of the randomized FEM solution\n"
         "  study   convergence study over mesh levels, CSV output\n"
         "  table1  barycentric-rule robustness errors against an MC-mean reference\n"
         "\n"
         "flags:\n"
         "  --estimator mc|is|barycentric   load-vector estimator (default mc)\n"
         "  --forcing f1|f1eps|f2|const     forcing term (default f2)\n"
         "  --sigma unit|sine               diffusion coefficient (default unit)\n"
         "  --n A..B or --n A               mesh level range (default per command)\n"
         "  --M <count>                     replications per level\n"
         "  --seed <uint64>                 RNG seed (env RANDFEM_SEED as fallback)\n"
         "  --tol <real>                    CG relative tolerance in (0,1)\n"
         "  --out <path>                    output file (stdout when omitted)\n"
         "  --in <path>                     mesh file to import (mesh command)\n"
         "  --validate                      validate the mesh (mesh command)\n"
         "  --threads <count>               worker threads (0 = hardware)\n"
         "  --timing                        record real load-assembly times in CSVs\n"
         "  --full-scale                    full-scale defaults (M=10^4, n up to 8)\n"
         "  --cache-dir <path>              cache table1 reference loads\n"
         "  --config <path>                 flat key = value file; flags win\n";
}

} // namespace randfem
