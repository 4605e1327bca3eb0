#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "randfem/config.hpp"
#include "randfem/errors.hpp"
#include "randfem/experiments.hpp"
#include "randfem/mesh.hpp"

namespace {

using namespace randfem;

// Writes through a temp file and renames on success, so failed runs leave no
// partial artifact behind.
void write_file_atomically(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) throw data_error("cannot write to '" + tmp + "'");
    out << content;
    if (!out) {
      std::filesystem::remove(tmp);
      throw data_error("write failed for '" + tmp + "'");
    }
  }
  std::filesystem::rename(tmp, path);
}

void emit(const std::string& out_path, const std::string& content) {
  if (out_path.empty())
    std::cout << content;
  else
    write_file_atomically(out_path, content);
}

int effective_threads(int requested) {
  if (requested > 0) return requested;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

int cmd_mesh(const RunConfig& config) {
  TriangleMesh mesh;
  if (!config.mesh_in.empty()) {
    std::ifstream in(config.mesh_in);
    if (!in) throw data_error("cannot read mesh file '" + config.mesh_in + "'");
    mesh = read_mesh(in);
  } else {
    mesh = build_structured_mesh(config.n_min);
  }
  if (config.validate) {
    const MeshValidationReport report = validate_mesh(mesh);
    std::printf("vertices %d triangles %d interior %d\n", report.vertices, report.triangles,
                report.interior);
    std::printf("max_edge %.17g total_area %.17g quasi_uniformity %.17g\n", report.max_edge,
                report.total_area, report.quasi_uniformity_constant);
  } else {
    std::printf("vertices %d triangles %d interior %d\n", mesh.num_vertices(),
                mesh.num_triangles(), mesh.num_interior());
  }
  if (!config.out.empty()) {
    std::ostringstream text;
    write_mesh(text, mesh);
    write_file_atomically(config.out, text.str());
  }
  return 0;
}

int cmd_solve(const RunConfig& config) {
  const TriangleMesh mesh = build_structured_mesh(config.n_min);
  const RealizationResult result =
      run_realization(mesh, sigma_by_name(config.sigma), forcing_by_name(config.forcing),
                      config.estimator, config.seed, 0, nullptr, config.tol);
  if (!result.report.converged)
    throw numeric_error("solver did not converge (" +
                        std::to_string(result.report.iterations) + " iterations, residual " +
                        std::to_string(result.report.relative_residual) + ")");
  // Coefficient per interior node, row-major interior numbering.
  std::ostringstream text;
  char buf[32];
  for (double x : result.coefficients) {
    std::snprintf(buf, sizeof(buf), "%.17g\n", x);
    text << buf;
  }
  emit(config.out, text.str());
  std::fprintf(stderr, "solved n=%d dofs=%zu iterations=%d residual=%.3e load_s=%.6f\n",
               config.n_min, result.coefficients.size(), result.report.iterations,
               result.report.relative_residual, result.load_seconds);
  return 0;
}

int cmd_study(const RunConfig& config) {
  StudyConfig study;
  study.estimator = config.estimator;
  study.forcing = forcing_by_name(config.forcing);
  study.sigma = sigma_by_name(config.sigma);
  study.n_min = config.n_min;
  study.n_max = config.n_max;
  study.replications = config.replications;
  study.seed = config.seed;
  study.tol = config.tol;
  study.threads = effective_threads(config.threads);
  study.record_timing = config.timing;
  const std::vector<ExperimentRecord> records = run_convergence_study(study);
  std::ostringstream csv;
  write_records_csv(csv, records);
  emit(config.out, csv.str());
  return 0;
}

int cmd_table1(const RunConfig& config) {
  const std::vector<Table1Row> rows =
      run_table1(config.n_min, config.n_max, config.replications, config.seed,
                 effective_threads(config.threads), config.cache_dir);
  std::ostringstream csv;
  write_table1_csv(csv, rows, config.seed);
  emit(config.out, csv.str());
  return 0;
}

} // namespace

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  if (args.empty() || args[0] == "--help" || args[0] == "-h" || args[0] == "help") {
    std::cout << usage_text();
    return args.empty() ? 2 : 0;
  }
  try {
    const RunConfig config = parse_config(args);
    switch (config.command) {
      case RunConfig::Command::mesh: return cmd_mesh(config);
      case RunConfig::Command::solve: return cmd_solve(config);
      case RunConfig::Command::study: return cmd_study(config);
      case RunConfig::Command::table1: return cmd_table1(config);
    }
    return 0;
  } catch (const param_error& e) {
    std::cerr << "error: " << e.what() << "\n\n" << usage_text();
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}
