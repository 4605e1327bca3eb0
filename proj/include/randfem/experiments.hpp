#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "randfem/forcing.hpp"
#include "randfem/solver.hpp"
#include "randfem/sparse.hpp"

namespace randfem {

// sqrt(v^T A v) with A the unit-coefficient stiffness. Quadratic forms below
// -1e-12 raise numeric_error; values in [-1e-12, 0] clamp to zero.
double h1_seminorm(const SparseSpdMatrix& stiffness, const FemCoefficients& v);

// Same with the mass matrix.
double l2_norm(const SparseSpdMatrix& mass, const FemCoefficients& v);

// Square root of the unbiased empirical variance of the samples in the norm
// induced by quad_form: sqrt( (1/(M-1)) sum ||u_i - mean||^2 ). Needs M >= 2.
double empirical_error(const std::vector<FemCoefficients>& samples,
                       const SparseSpdMatrix& quad_form);

// Streaming variant: Welford updates in the inner products induced by the
// stiffness and mass matrices, with a deterministic pairwise merge. Exact
// zero for identical samples.
class VarianceAccumulator {
public:
  VarianceAccumulator(const SparseSpdMatrix* stiffness, const SparseSpdMatrix* mass);

  void add(const FemCoefficients& sample);
  void merge(const VarianceAccumulator& other);

  std::int64_t count() const { return count_; }
  const FemCoefficients& mean() const { return mean_; }
  double error_h1() const; // sqrt(m2 / (count-1)), needs count >= 2
  double error_l2() const;

private:
  const SparseSpdMatrix* stiffness_;
  const SparseSpdMatrix* mass_;
  std::int64_t count_ = 0;
  FemCoefficients mean_;
  double m2_h1_ = 0.0;
  double m2_l2_ = 0.0;
  mutable FemCoefficients scratch_a_;
  mutable FemCoefficients scratch_b_;
};

// Least-squares slope of log(error) against log(h). Requires at least three
// strictly positive pairs.
double fit_convergence_order(const std::vector<double>& hs, const std::vector<double>& errors);

struct ExperimentRecord {
  Estimator estimator = Estimator::mc;
  std::string forcing = "f2";
  int level = 0;
  double grid_h = 0.0; // 2^-level
  int replications = 0;
  double err_h1 = 0.0;
  double err_l2 = 0.0;
  double time_load_s = 0.0;
  std::uint64_t seed = 0;
};

struct StudyConfig {
  Estimator estimator = Estimator::mc;
  ForcingTerm forcing;
  CoefficientField sigma;
  int n_min = 2;
  int n_max = 6;
  int replications = 200;
  std::uint64_t seed = 42;
  double tol = 1e-10;
  int threads = 1;
  bool record_timing = false; // when false, time_load_s is written as 0
};

// Per level: `replications` independent realizations, empirical errors in
// both norms around the replication mean, and the median load-assembly time.
// Results are deterministic for a fixed seed, independent of thread count.
std::vector<ExperimentRecord> run_convergence_study(const StudyConfig& config);

struct Table1Row {
  int level = 0;
  double grid_h = 0.0;
  double err_h1 = 0.0;
};

// Barycentric rule with the eps-modified singular forcing against a
// reference solution driven by the mean of `reference_replications` Monte
// Carlo load vectors for the unmodified forcing. If cache_dir is non-empty,
// reference loads are cached there keyed by (level, M, seed).
std::vector<Table1Row> run_table1(int n_min, int n_max, int reference_replications,
                                  std::uint64_t seed, int threads,
                                  const std::string& cache_dir = "");

// CSV schema: estimator,forcing,n,h,M,err_h1,err_l2,time_load_s,seed with
// reals in scientific notation, 10 significant digits.
void write_records_csv(std::ostream& out, const std::vector<ExperimentRecord>& records);
std::vector<ExperimentRecord> read_records_csv(std::istream& in);

void write_table1_csv(std::ostream& out, const std::vector<Table1Row>& rows,
                      std::uint64_t seed);

} // namespace randfem
