#include "randfem/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <thread>

#include "randfem/errors.hpp"
#include "randfem/mesh.hpp"

namespace randfem {

namespace {

constexpr double kNegativeFormTol = -1e-12;

// Fixed slot count for replication partitioning. Slot s owns replications
// s, s + kSlots, s + 2 kSlots, ...; merging slots in index order makes the
// aggregate independent of how threads pick up slots.
constexpr int kSlots = 64;

double checked_sqrt_form(const SparseSpdMatrix& matrix, const FemCoefficients& v) {
  double q = matrix.quadratic_form(v);
  if (q < kNegativeFormTol)
    throw numeric_error("quadratic form is negative (" + std::to_string(q) +
                        "); matrix is not positive semidefinite");
  if (q < 0.0) q = 0.0;
  return std::sqrt(q);
}

// Runs fn(slot) for slot = 0..kSlots-1 on `threads` workers. Exceptions are
// collected and the one from the lowest slot is rethrown.
void run_slots(int threads, const std::function<void(int)>& fn) {
  threads = std::max(1, std::min(threads, kSlots));
  std::atomic<int> next{0};
  std::vector<std::exception_ptr> errors(kSlots);
  auto worker = [&]() {
    for (;;) {
      const int slot = next.fetch_add(1);
      if (slot >= kSlots) return;
      try {
        fn(slot);
      } catch (...) {
        errors[slot] = std::current_exception();
      }
    }
  };
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (int i = 0; i < threads; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  for (int slot = 0; slot < kSlots; ++slot)
    if (errors[slot]) std::rethrow_exception(errors[slot]);
}

double median_of(std::vector<double> values) {
  if (values.empty()) return 0.0;
  const std::size_t mid = values.size() / 2;
  std::nth_element(values.begin(), values.begin() + mid, values.end());
  double med = values[mid];
  if (values.size() % 2 == 0) {
    std::nth_element(values.begin(), values.begin() + mid - 1, values.begin() + mid);
    med = 0.5 * (med + values[mid - 1]);
  }
  return med;
}

std::string reference_cache_path(const std::string& dir, int level, int replications,
                                 std::uint64_t seed) {
  return dir + "/table1_ref_n" + std::to_string(level) + "_M" + std::to_string(replications) +
         "_seed" + std::to_string(seed) + ".txt";
}

} // namespace

double h1_seminorm(const SparseSpdMatrix& stiffness, const FemCoefficients& v) {
  return checked_sqrt_form(stiffness, v);
}

double l2_norm(const SparseSpdMatrix& mass, const FemCoefficients& v) {
  return checked_sqrt_form(mass, v);
}

double empirical_error(const std::vector<FemCoefficients>& samples,
                       const SparseSpdMatrix& quad_form) {
  const std::size_t m = samples.size();
  if (m < 2) throw param_error("empirical_error needs at least two samples");
  const std::size_t n = samples[0].size();
  // Welford in the inner product induced by quad_form; identical samples
  // yield an exact zero.
  FemCoefficients mean(n, 0.0);
  FemCoefficients delta_old(n), delta_new(n), product;
  double m2 = 0.0;
  std::size_t count = 0;
  for (const auto& u : samples) {
    if (u.size() != n) throw param_error("samples have mismatched lengths");
    ++count;
    const double inv = 1.0 / static_cast<double>(count);
    for (std::size_t i = 0; i < n; ++i) {
      delta_old[i] = u[i] - mean[i];
      mean[i] += delta_old[i] * inv;
      delta_new[i] = u[i] - mean[i];
    }
    quad_form.multiply(delta_new, product);
    for (std::size_t i = 0; i < n; ++i) m2 += delta_old[i] * product[i];
  }
  if (m2 < 0.0) m2 = 0.0;
  return std::sqrt(m2 / static_cast<double>(m - 1));
}

VarianceAccumulator::VarianceAccumulator(const SparseSpdMatrix* stiffness,
                                         const SparseSpdMatrix* mass)
    : stiffness_(stiffness), mass_(mass) {}

void VarianceAccumulator::add(const FemCoefficients& sample) {
  if (count_ == 0) mean_.assign(sample.size(), 0.0);
  const std::size_t n = mean_.size();
  ++count_;
  scratch_a_.resize(n); // sample - old mean
  scratch_b_.resize(n); // sample - new mean
  const double inv = 1.0 / static_cast<double>(count_);
  for (std::size_t i = 0; i < n; ++i) {
    scratch_a_[i] = sample[i] - mean_[i];
    mean_[i] += scratch_a_[i] * inv;
    scratch_b_[i] = sample[i] - mean_[i];
  }
  FemCoefficients product;
  stiffness_->multiply(scratch_b_, product);
  for (std::size_t i = 0; i < n; ++i) m2_h1_ += scratch_a_[i] * product[i];
  mass_->multiply(scratch_b_, product);
  for (std::size_t i = 0; i < n; ++i) m2_l2_ += scratch_a_[i] * product[i];
}

void VarianceAccumulator::merge(const VarianceAccumulator& other) {
  if (other.count_ == 0) return;
  if (count_ == 0) {
    count_ = other.count_;
    mean_ = other.mean_;
    m2_h1_ = other.m2_h1_;
    m2_l2_ = other.m2_l2_;
    return;
  }
  const std::size_t n = mean_.size();
  const double na = static_cast<double>(count_);
  const double nb = static_cast<double>(other.count_);
  const double factor = na * nb / (na + nb);
  scratch_a_.resize(n);
  for (std::size_t i = 0; i < n; ++i) scratch_a_[i] = other.mean_[i] - mean_[i];
  FemCoefficients product;
  stiffness_->multiply(scratch_a_, product);
  double cross_h1 = 0.0;
  for (std::size_t i = 0; i < n; ++i) cross_h1 += scratch_a_[i] * product[i];
  mass_->multiply(scratch_a_, product);
  double cross_l2 = 0.0;
  for (std::size_t i = 0; i < n; ++i) cross_l2 += scratch_a_[i] * product[i];
  m2_h1_ += other.m2_h1_ + factor * cross_h1;
  m2_l2_ += other.m2_l2_ + factor * cross_l2;
  for (std::size_t i = 0; i < n; ++i)
    mean_[i] += scratch_a_[i] * (nb / (na + nb));
  count_ += other.count_;
}

double VarianceAccumulator::error_h1() const {
  if (count_ < 2) throw param_error("variance needs at least two samples");
  return std::sqrt(std::max(0.0, m2_h1_) / static_cast<double>(count_ - 1));
}

double VarianceAccumulator::error_l2() const {
  if (count_ < 2) throw param_error("variance needs at least two samples");
  return std::sqrt(std::max(0.0, m2_l2_) / static_cast<double>(count_ - 1));
}

double fit_convergence_order(const std::vector<double>& hs,
                             const std::vector<double>& errors) {
  if (hs.size() != errors.size()) throw param_error("mismatched h and error lists");
  if (hs.size() < 3) throw param_error("order fit needs at least three points");
  double sx = 0.0, sy = 0.0;
  for (std::size_t i = 0; i < hs.size(); ++i) {
    if (!(hs[i] > 0.0) || !(errors[i] > 0.0))
      throw param_error("order fit needs strictly positive values");
    sx += std::log(hs[i]);
    sy += std::log(errors[i]);
  }
  const double mx = sx / hs.size();
  const double my = sy / hs.size();
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < hs.size(); ++i) {
    const double dx = std::log(hs[i]) - mx;
    sxx += dx * dx;
    sxy += dx * (std::log(errors[i]) - my);
  }
  return sxy / sxx;
}

std::vector<ExperimentRecord> run_convergence_study(const StudyConfig& config) {
  if (config.n_min < 1 || config.n_max > 12 || config.n_min > config.n_max)
    throw param_error("level range must satisfy 1 <= n_min <= n_max <= 12");
  if (config.replications < 2) throw param_error("study needs at least two replications");

  std::vector<ExperimentRecord> records;
  for (int n = config.n_min; n <= config.n_max; ++n) {
    const TriangleMesh mesh = build_structured_mesh(n);
    const SparseSpdMatrix stiffness = assemble_stiffness_exact(mesh);
    const SparseSpdMatrix mass = assemble_mass(mesh);

    std::vector<VarianceAccumulator> slots(
        kSlots, VarianceAccumulator(&stiffness, &mass));
    std::vector<double> load_times(config.replications, 0.0);

    run_slots(config.threads, [&](int slot) {
      for (int rep = slot; rep < config.replications; rep += kSlots) {
        RealizationResult result =
            run_realization(mesh, config.sigma, config.forcing, config.estimator, config.seed,
                            static_cast<std::uint64_t>(rep),
                            config.sigma.unit ? &stiffness : nullptr, config.tol);
        if (!result.report.converged)
          throw numeric_error("solver did not converge at level " + std::to_string(n) +
                              ", replication " + std::to_string(rep) + ", seed " +
                              std::to_string(config.seed));
        slots[slot].add(result.coefficients);
        load_times[rep] = result.load_seconds;
      }
    });

    VarianceAccumulator total(&stiffness, &mass);
    for (const auto& slot : slots) total.merge(slot);

    ExperimentRecord record;
    record.estimator = config.estimator;
    record.forcing = config.forcing.name;
    record.level = n;
    record.grid_h = std::ldexp(1.0, -n);
    record.replications = config.replications;
    record.err_h1 = total.error_h1();
    record.err_l2 = total.error_l2();
    record.time_load_s = config.record_timing ? median_of(load_times) : 0.0;
    record.seed = config.seed;
    records.push_back(std::move(record));
  }
  return records;
}

std::vector<Table1Row> run_table1(int n_min, int n_max, int reference_replications,
                                  std::uint64_t seed, int threads,
                                  const std::string& cache_dir) {
  if (n_min < 1 || n_max > 12 || n_min > n_max)
    throw param_error("level range must satisfy 1 <= n_min <= n_max <= 12");
  if (reference_replications < 1) throw param_error("table1 needs at least one replication");

  const ForcingTerm singular = forcing_f1();
  const ForcingTerm modified = forcing_f1_eps();

  std::vector<Table1Row> rows;
  for (int n = n_min; n <= n_max; ++n) {
    const TriangleMesh mesh = build_structured_mesh(n);
    const SparseSpdMatrix stiffness = assemble_stiffness_exact(mesh);
    const int dofs = mesh.num_interior();

    FemCoefficients mean_load;
    std::string cache_file;
    if (!cache_dir.empty()) {
      cache_file = reference_cache_path(cache_dir, n, reference_replications, seed);
      std::ifstream in(cache_file);
      if (in) {
        FemCoefficients cached(dofs);
        bool ok = true;
        for (double& x : cached)
          if (!(in >> x)) {
            ok = false;
            break;
          }
        if (ok) mean_load = std::move(cached);
      }
    }

    if (mean_load.empty()) {
      std::vector<FemCoefficients> partial(kSlots);
      run_slots(threads, [&](int slot) {
        FemCoefficients sum(dofs, 0.0);
        for (int rep = slot; rep < reference_replications; rep += kSlots) {
          const QuadratureDraw draw = draw_uniform_points(
              mesh, seed, static_cast<std::uint64_t>(rep), StreamPurpose::load_mc);
          const FemCoefficients load =
              assemble_load_monte_carlo(mesh, singular.evaluate, draw);
          for (int i = 0; i < dofs; ++i) sum[i] += load[i];
        }
        partial[slot] = std::move(sum);
      });
      mean_load.assign(dofs, 0.0);
      for (const auto& sum : partial)
        for (int i = 0; i < dofs; ++i) mean_load[i] += sum[i];
      for (double& x : mean_load) x /= static_cast<double>(reference_replications);
      if (!cache_file.empty()) {
        std::filesystem::create_directories(cache_dir);
        std::ofstream out(cache_file);
        char buf[32];
        for (double x : mean_load) {
          std::snprintf(buf, sizeof(buf), "%.17g\n", x);
          out << buf;
        }
      }
    }

    auto [reference, ref_report] = solve_spd(stiffness, mean_load);
    if (!ref_report.converged)
      throw numeric_error("table1 reference solve did not converge at level " +
                          std::to_string(n));
    const FemCoefficients bar_load = assemble_load_barycentric(mesh, modified.evaluate);
    auto [bar_solution, bar_report] = solve_spd(stiffness, bar_load);
    if (!bar_report.converged)
      throw numeric_error("table1 barycentric solve did not converge at level " +
                          std::to_string(n));

    FemCoefficients diff(dofs);
    for (int i = 0; i < dofs; ++i) diff[i] = bar_solution[i] - reference[i];
    rows.push_back({n, std::ldexp(1.0, -n), h1_seminorm(stiffness, diff)});
  }
  return rows;
}

void write_records_csv(std::ostream& out, const std::vector<ExperimentRecord>& records) {
  out << "estimator,forcing,n,h,M,err_h1,err_l2,time_load_s,seed\n";
  char buf[192];
  for (const auto& r : records) {
    std::snprintf(buf, sizeof(buf), "%s,%s,%d,%.9e,%d,%.9e,%.9e,%.9e,%llu\n",
                  estimator_name(r.estimator), r.forcing.c_str(), r.level, r.grid_h,
                  r.replications, r.err_h1, r.err_l2, r.time_load_s,
                  static_cast<unsigned long long>(r.seed));
    out << buf;
  }
}

std::vector<ExperimentRecord> read_records_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != "estimator,forcing,n,h,M,err_h1,err_l2,time_load_s,seed")
    throw data_error("unexpected CSV header");
  std::vector<ExperimentRecord> records;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string field;
    ExperimentRecord r;
    auto next = [&]() {
      if (!std::getline(ss, field, ',')) throw data_error("truncated CSV row: " + line);
      return field;
    };
    const std::string est = next();
    if (est == "mc") r.estimator = Estimator::mc;
    else if (est == "is") r.estimator = Estimator::is;
    else if (est == "barycentric") r.estimator = Estimator::barycentric;
    else throw data_error("unknown estimator in CSV: " + est);
    r.forcing = next();
    r.level = std::stoi(next());
    r.grid_h = std::stod(next());
    r.replications = std::stoi(next());
    r.err_h1 = std::stod(next());
    r.err_l2 = std::stod(next());
    r.time_load_s = std::stod(next());
    r.seed = std::stoull(next());
    records.push_back(std::move(r));
  }
  return records;
}

void write_table1_csv(std::ostream& out, const std::vector<Table1Row>& rows,
                      std::uint64_t seed) {
  out << "n,h,err_h1,seed\n";
  char buf[96];
  for (const auto& row : rows) {
    std::snprintf(buf, sizeof(buf), "%d,%.9e,%.9e,%llu\n", row.level, row.grid_h, row.err_h1,
                  static_cast<unsigned long long>(seed));
    out << buf;
  }
}

} // namespace randfem
