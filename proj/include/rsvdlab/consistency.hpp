#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "rsvdlab/dense_matrix.hpp"
#include "rsvdlab/rsvd.hpp"
#include "rsvdlab/svd.hpp"

namespace rsvdlab {

// The 3x3 example whose left singular factor is the identity:
// sigma = (3 sqrt 3, 2 sqrt 6, sqrt 2).
DenseMatrix paper3x3();

struct ExperimentConfig {
  DenseMatrix matrix = paper3x3();
  std::string matrix_label = "paper3x3";
  RsvdConfig rsvd{.k = 1, .p = 1};
  std::uint64_t trials = 100000;
  std::size_t worker_count = 0;  // 0 = hardware concurrency
  std::uint64_t checkpoint_every = 0;  // trials; 0 = only when asked to stop
};

// Running sums of one contiguous block of trials. Sample projectors are
// expressed in the oracle basis, T = U^T Q Q^T U, stored row-major m x m.
struct MomentBlock {
  std::vector<double> first;
  std::vector<double> second;
  std::uint64_t trials = 0;
  std::uint64_t rank_deficient = 0;
  std::uint64_t axiom_violations = 0;

  static MomentBlock zeros(std::size_t m);
  MomentBlock& operator+=(const MomentBlock& other);
};

// Trials per block depends on N only, so results do not depend on worker count.
std::uint64_t block_size_for(std::uint64_t trials) noexcept;

struct Checkpoint {
  std::uint64_t master_seed = 0;
  std::uint64_t trials = 0;
  std::uint64_t trials_done = 0;
  SketchDistribution dist = SketchDistribution::StandardGaussian;
  std::uint32_t m = 0;
  std::uint64_t config_hash = 0;
  std::vector<MomentBlock> blocks;  // completed prefix, in block order
};

struct LambdaDiagnostics {
  std::vector<double> lambda_hat;
  double max_offdiag_abs = 0.0;
  std::pair<std::size_t, std::size_t> offdiag_argmax{0, 1};
  double trace = 0.0;
  // Theorem claims judged against the standard errors:
  bool diagonal_within_4se = false;          // (a) max off-diagonal <= 4 * max SE
  bool lambda_in_open_unit_interval = false; // (b) 3 SE away from 0 and 1
  bool diag_strictly_decreasing = false;     // (c) every gap > 3 combined SE
};

struct ConsistencyReport {
  DenseMatrix mean_projector;
  DenseMatrix standard_errors;  // of U^T M U entries
  LambdaDiagnostics diagnostics;
  double corollary_ratio = 0.0;  // corollary_check(mean_projector, A, oracle)
  std::uint64_t rank_deficient_trials = 0;
  std::uint64_t axiom_violations = 0;  // 1-in-1000 projector spot checks
  std::uint64_t trials = 0;
  std::uint64_t seed = 0;
  SketchDistribution dist = SketchDistribution::StandardGaussian;
  std::size_t ell = 0;
  double elapsed_seconds = 0.0;
};

struct RunControl {
  std::optional<std::filesystem::path> checkpoint_path;
  std::optional<Checkpoint> resume;
  // Stop (after checkpointing) once this many trials are done; 0 = run to N.
  std::uint64_t stop_after_trials = 0;
  std::function<void(std::uint64_t done, std::uint64_t total)> progress;
};

// FNV-1a over the matrix shape and entries plus k, p and q.
std::uint64_t experiment_fingerprint(const ExperimentConfig& ec);

// Throws ConfigError for N == 0, TheoremModeViolation unless ell < m <= n, and
// CheckpointMismatch when a resume checkpoint belongs to another experiment.
// Returns nullopt when stopped early through RunControl::stop_after_trials.
std::optional<ConsistencyReport> run_consistency(const ExperimentConfig& ec,
                                                 const RunControl& control);
ConsistencyReport run_consistency(const ExperimentConfig& ec);

// U^T M U diagnostics; `standard_errors` refers to the same basis.
LambdaDiagnostics analyze(const DenseMatrix& mean_projector, const SvdResult& oracle,
                          const DenseMatrix& standard_errors);

// ||M A - U diag(lambda_hat_i sigma_i) V^T||_F / ||A||_F
double corollary_check(const DenseMatrix& mean_projector, const DenseMatrix& a,
                       const SvdResult& oracle);

// sqrt((E[X^2] - E[X]^2) / N) per entry from raw sums. Needs N >= 2.
DenseMatrix estimate_standard_errors(const DenseMatrix& sum, const DenseMatrix& sum_sq,
                                     std::uint64_t trials);

}  // namespace rsvdlab
