// Acceptance suite: runs the headline experiment checks end to end and
// prints one pass/fail line per criterion. Criteria can be selected with
// --criterion N; --cli <path> points at the command-line binary used by the
// determinism check; --cache-dir speeds up repeated table1 runs.

#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <thread>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "randfem/assembly.hpp"
#include "randfem/experiments.hpp"
#include "randfem/forcing.hpp"
#include "randfem/quadrature.hpp"
#include "randfem/sampling.hpp"
#include "randfem/solver.hpp"

using namespace randfem;

namespace {

constexpr std::uint64_t kSeed = 42;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string cli_path;
std::string cache_dir;

std::string format(const char* fmt, ...) {
  char buf[512];
  va_list args;
  va_start(args, fmt);
  std::vsnprintf(buf, sizeof(buf), fmt, args);
  va_end(args);
  return buf;
}

// Studies shared between criteria, keyed by estimator and forcing.
const std::vector<ExperimentRecord>& study(Estimator estimator, const ForcingTerm& forcing) {
  static std::map<std::string, std::vector<ExperimentRecord>> cache;
  const std::string key = std::string(estimator_name(estimator)) + "/" + forcing.name;
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;

  StudyConfig config;
  config.estimator = estimator;
  config.forcing = forcing;
  config.sigma = sigma_unit();
  config.n_min = 2;
  config.n_max = 6;
  config.replications = 200;
  config.seed = kSeed;
  // One worker per core; oversubscription would inflate the per-replication
  // wall times that criterion 4 compares.
  config.threads = std::max(1u, std::thread::hardware_concurrency());
  config.record_timing = true;
  return cache.emplace(key, run_convergence_study(config)).first->second;
}

double slope_of(const std::vector<ExperimentRecord>& records, bool h1) {
  std::vector<double> hs, errs;
  for (const auto& r : records) {
    hs.push_back(r.grid_h);
    errs.push_back(h1 ? r.err_h1 : r.err_l2);
  }
  return fit_convergence_order(hs, errs);
}

Outcome criterion_mc_smooth() {
  const double slope = slope_of(study(Estimator::mc, forcing_f2()), true);
  return {slope >= 0.75 && slope <= 1.25,
          format("H1 slope %.3f in [0.75, 1.25], f2, M=200, n=2..6", slope)};
}

Outcome criterion_mc_singular() {
  const double slope = slope_of(study(Estimator::mc, forcing_f1()), true);
  return {slope >= 0.6 && slope <= 1.1,
          format("H1 slope %.3f in [0.60, 1.10], f1, M=200, n=2..6", slope)};
}

Outcome criterion_is_smooth() {
  const auto& records = study(Estimator::is, forcing_f2());
  const double l2 = slope_of(records, false);
  const double h1 = slope_of(records, true);
  return {l2 >= 1.7 && l2 <= 2.3 && h1 >= 1.5,
          format("L2 slope %.3f in [1.70, 2.30], H1 slope %.3f >= 1.50, f2", l2, h1)};
}

Outcome criterion_is_beats_mc() {
  const auto& mc = study(Estimator::mc, forcing_f2());
  const auto& is = study(Estimator::is, forcing_f2());
  bool ordered = true;
  for (std::size_t i = 0; i < mc.size(); ++i) {
    if (mc[i].level < 3) continue;
    ordered = ordered && is[i].err_h1 < mc[i].err_h1;
  }
  const double time_ratio = is.back().time_load_s / mc.back().time_load_s;
  return {ordered && time_ratio <= 10.0,
          format("IS H1 error below MC at n=3..6: %s; IS/MC load time at n=6: %.2fx (<= 10x)",
                 ordered ? "yes" : "no", time_ratio)};
}

Outcome criterion_table1() {
  const std::vector<double> reference = {1.4e6, 7.7e5, 4.0e5, 2.1e5, 1.0e5, 5.2e4};
  const auto rows = run_table1(3, 8, 10000, kSeed, 4, cache_dir);
  bool in_band = true;
  bool ratios_ok = true;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const double rel = rows[i].err_h1 / reference[i];
    in_band = in_band && rel > 0.1 && rel < 10.0;
    if (i > 0) {
      const double ratio = rows[i - 1].err_h1 / rows[i].err_h1;
      ratios_ok = ratios_ok && ratio >= 1.5 && ratio <= 2.5;
    }
  }
  return {in_band && ratios_ok,
          format("errors %.2e..%.2e within 10x of the reference magnitudes: %s; level ratios in "
                 "[1.5, 2.5]: %s",
                 rows.front().err_h1, rows.back().err_h1, in_band ? "yes" : "no",
                 ratios_ok ? "yes" : "no")};
}

Outcome criterion_unbiased_loads() {
  const TriangleMesh mesh = build_structured_mesh(3);
  const int dofs = mesh.num_interior();
  const std::vector<int> nodes = {0, dofs / 4, dofs / 2, (3 * dofs) / 4, dofs - 1};
  const std::vector<Integrand> forcings = {[](Point2) { return 1.0; },
                                           [](Point2 p) { return p.x; },
                                           forcing_f2().evaluate};
  const int m = 10000;
  int checked = 0, within = 0;
  for (const Integrand& f : forcings) {
    const FemCoefficients oracle = testing::quadrature_load(mesh, f, 8);
    std::vector<double> s_mc(nodes.size(), 0.0), ss_mc(nodes.size(), 0.0);
    std::vector<double> s_is(nodes.size(), 0.0), ss_is(nodes.size(), 0.0);
    for (int rep = 0; rep < m; ++rep) {
      const QuadratureDraw uni = draw_uniform_points(mesh, kSeed, rep, StreamPurpose::load_mc);
      const FemCoefficients mc = assemble_load_monte_carlo(mesh, f, uni);
      const QuadratureDraw hat = draw_hat_points(mesh, kSeed, rep);
      const FemCoefficients is = assemble_load_importance(mesh, f, hat);
      for (std::size_t k = 0; k < nodes.size(); ++k) {
        s_mc[k] += mc[nodes[k]];
        ss_mc[k] += mc[nodes[k]] * mc[nodes[k]];
        s_is[k] += is[nodes[k]];
        ss_is[k] += is[nodes[k]] * is[nodes[k]];
      }
    }
    for (std::size_t k = 0; k < nodes.size(); ++k) {
      const auto check = [&](double s, double ss) {
        const double mean = s / m;
        const double se = std::sqrt(std::max(0.0, ss / m - mean * mean) / m);
        ++checked;
        if (std::abs(mean - oracle[nodes[k]]) <= 4.0 * se + 1e-12) ++within;
      };
      check(s_mc[k], ss_mc[k]);
      check(s_is[k], ss_is[k]);
    }
  }
  return {checked == within,
          format("%d/%d load-entry means within 4 standard errors of quadrature values",
                 within, checked)};
}

Outcome criterion_quadrature_rates() {
  const ForcingTerm f1 = forcing_f1();
  const ForcingTerm f2 = forcing_f2();
  const double ref_f1 = testing::diagonal_power_integral(0.49, 48) +
                        testing::sine_interface_integral(10.0, 8);
  const double ref_f2 = 2.0 / 9.0;
  const int m = 2000;
  std::vector<double> hs, rms_f1, rms_f2;
  for (int n = 2; n <= 6; ++n) {
    const TriangleMesh mesh = build_structured_mesh(n);
    double se1 = 0.0, se2 = 0.0;
    for (int rep = 0; rep < m; ++rep) {
      const QuadratureDraw draw =
          draw_uniform_points(mesh, kSeed, rep, StreamPurpose::quadrature);
      const double q1 = monte_carlo_quadrature(f1.evaluate, mesh, draw);
      const double q2 = monte_carlo_quadrature(f2.evaluate, mesh, draw);
      se1 += (q1 - ref_f1) * (q1 - ref_f1);
      se2 += (q2 - ref_f2) * (q2 - ref_f2);
    }
    hs.push_back(mesh.grid_spacing);
    rms_f1.push_back(std::sqrt(se1 / m));
    rms_f2.push_back(std::sqrt(se2 / m));
  }
  const double slope1 = fit_convergence_order(hs, rms_f1);
  const double slope2 = fit_convergence_order(hs, rms_f2);
  return {slope2 >= 1.8 && slope1 >= 0.9,
          format("RMS slopes: f2 %.3f >= 1.80, f1 %.3f >= 0.90 (M=2000, n=2..6)", slope2,
                 slope1)};
}

Outcome criterion_sampler_statistics() {
  RngStream rng(kSeed, 271828);
  const long proposals = 100000;
  long accepts = 0;
  double sa = 0.0, sb = 0.0, saa = 0.0, sbb = 0.0;
  testing::SimplexBinning bins;
  for (long i = 0; i < proposals; ++i) {
    const SimplexPoint z = sample_uniform_simplex(rng);
    const double y = kRejectionEnvelope * rng.next_u01();
    if (!hat_accept(0, z, y)) continue;
    ++accepts;
    sa += z.alpha;
    sb += z.beta;
    saa += z.alpha * z.alpha;
    sbb += z.beta * z.beta;
    bins.add(z.alpha, z.beta);
  }
  const double rate = static_cast<double>(accepts) / proposals;
  const double chi2 = testing::chi_square_hat_vertex0(bins);
  const double mean_a = sa / accepts;
  const double mean_b = sb / accepts;
  const double se_a = std::sqrt((saa / accepts - mean_a * mean_a) / accepts);
  const double se_b = std::sqrt((sbb / accepts - mean_b * mean_b) / accepts);
  const bool rate_ok = std::abs(rate - 1.0 / 3.0) < 0.02;
  const bool chi_ok = chi2 < testing::kChiSquare999Dof54;
  const bool mean_ok =
      std::abs(mean_a - 0.25) < 4.0 * se_a && std::abs(mean_b - 0.25) < 4.0 * se_b;
  return {rate_ok && chi_ok && mean_ok,
          format("acceptance rate %.4f (1/3 +- 0.02), chi-square %.1f < %.1f, mean "
                 "(%.4f, %.4f) near (1/4, 1/4)",
                 rate, chi2, testing::kChiSquare999Dof54, mean_a, mean_b)};
}

Outcome criterion_exactness() {
  const TriangleMesh mesh = build_structured_mesh(3);
  const SparseSpdMatrix exact = assemble_stiffness_exact(mesh);
  double worst = 0.0;
  for (std::uint64_t seed : {1ULL, 42ULL, 31415926ULL}) {
    const QuadratureDraw draw = draw_uniform_points(mesh, seed, 0, StreamPurpose::stiffness);
    const SparseSpdMatrix mc = assemble_stiffness_mc(mesh, sigma_unit(), draw);
    for (int i = 0; i < exact.dimension(); ++i)
      for (int j = 0; j < exact.dimension(); ++j)
        worst = std::max(worst, std::abs(mc.entry(i, j) - exact.entry(i, j)));
  }
  const bool identity_ok = worst <= 1e-12;

  const double h2 = mesh.grid_spacing * mesh.grid_spacing;
  const FemCoefficients load_a =
      assemble_load_importance(mesh, [](Point2) { return 1.0; }, draw_hat_points(mesh, 1, 0));
  const FemCoefficients load_b =
      assemble_load_importance(mesh, [](Point2) { return 1.0; }, draw_hat_points(mesh, 2, 9));
  bool draw_free = load_a == load_b;
  double load_err = 0.0;
  for (double x : load_a) load_err = std::max(load_err, std::abs(x - h2));
  draw_free = draw_free && load_err <= 1e-15;

  const TriangleMesh coarse = build_structured_mesh(2);
  const SparseSpdMatrix a2 = assemble_stiffness_exact(coarse);
  const SparseSpdMatrix oracle = testing::cotangent_stiffness(coarse);
  const int center = 4;
  double stencil_err = 0.0;
  for (int j = 0; j < a2.dimension(); ++j)
    stencil_err = std::max(stencil_err, std::abs(a2.entry(center, j) - oracle.entry(center, j)));
  const bool stencil_ok =
      stencil_err <= 1e-12 && a2.entry(center, center) == 4.0 && a2.entry(center, 1) == -1.0 &&
      a2.entry(center, 3) == -1.0 && a2.entry(center, 5) == -1.0 && a2.entry(center, 7) == -1.0 &&
      a2.entry(center, 2) == 0.0 && a2.entry(center, 6) == 0.0;

  return {identity_ok && draw_free && stencil_ok,
          format("unit-sigma stiffness gap %.1e <= 1e-12; constant-f IS load draw-free with "
                 "entry gap %.1e; center stencil (4, -1, 0) oracle gap %.1e",
                 worst, load_err, stencil_err)};
}

Outcome criterion_cli_determinism() {
  if (cli_path.empty()) return {false, "no --cli path supplied"};
  const auto dir = std::filesystem::temp_directory_path() / "randfem_acceptance";
  std::filesystem::create_directories(dir);
  const auto read_file = [](const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
  };
  bool all_ok = true;
  std::string note;
  for (const std::string& invocation :
       {std::string("study --estimator mc --forcing f1 --n 2..4 --M 50"),
        std::string("study --estimator is --forcing f2 --n 2..4 --M 50")}) {
    const auto out1 = dir / "run1.csv";
    const auto out2 = dir / "run2.csv";
    const std::string base = "\"" + cli_path + "\" " + invocation + " --seed 42";
    const int rc1 =
        std::system((base + " --threads 1 --out " + out1.string() + " >/dev/null 2>&1").c_str());
    const int rc2 =
        std::system((base + " --threads 4 --out " + out2.string() + " >/dev/null 2>&1").c_str());
    const bool same = rc1 == 0 && rc2 == 0 && read_file(out1) == read_file(out2);
    all_ok = all_ok && same;
    note += (note.empty() ? "" : "; ") + invocation.substr(17, 5) + (same ? ": identical" : ": DIFFER");
  }
  std::filesystem::remove_all(dir);
  return {all_ok, "threads 1 vs 4, byte compare: " + note};
}

} // namespace

int main(int argc, char** argv) {
  int selected = 0;
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--cli" && i + 1 < argc) cli_path = argv[++i];
    else if (arg == "--cache-dir" && i + 1 < argc) cache_dir = argv[++i];
    else if (arg == "--criterion" && i + 1 < argc) selected = std::atoi(argv[++i]);
  }

  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"MC convergence, smooth forcing", criterion_mc_smooth},
      {"MC convergence, singular forcing", criterion_mc_singular},
      {"IS convergence, smooth forcing", criterion_is_smooth},
      {"IS error below MC error and bounded cost", criterion_is_beats_mc},
      {"barycentric-rule robustness magnitudes", criterion_table1},
      {"load estimators are unbiased", criterion_unbiased_loads},
      {"randomized quadrature error rates", criterion_quadrature_rates},
      {"rejection sampler statistics", criterion_sampler_statistics},
      {"exactness identities", criterion_exactness},
      {"CLI determinism across thread counts", criterion_cli_determinism},
  };

  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int number = static_cast<int>(i) + 1;
    if (selected != 0 && selected != number) continue;
    Outcome outcome;
    try {
      outcome = criteria[i].second();
    } catch (const std::exception& e) {
      outcome = {false, std::string("exception: ") + e.what()};
    }
    if (!outcome.pass) ++failures;
    std::printf("criterion %2d [%s] %s: %s\n", number, outcome.pass ? "PASS" : "FAIL",
                criteria[i].first.c_str(), outcome.detail.c_str());
    std::fflush(stdout);
  }
  return failures;
}
