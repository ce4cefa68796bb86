#include "rsvdlab/consistency.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <chrono>
#include <cmath>
#include <exception>
#include <mutex>
#include <string>
#include <thread>

#include "rsvdlab/checkpoint.hpp"
#include "rsvdlab/error.hpp"
#include "rsvdlab/qr.hpp"
#include "rsvdlab/rng.hpp"

namespace rsvdlab {

namespace {

constexpr std::uint64_t kBlocksPerRun = 1024;
constexpr std::uint64_t kLeafTrials = 8;
constexpr std::uint64_t kSpotCheckStride = 1000;
constexpr double kAxiomTolerance = 1e-10;

void symmetrize(DenseMatrix& a) {
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = i + 1; j < a.cols(); ++j) {
      const double avg = 0.5 * (a(i, j) + a(j, i));
      a(i, j) = avg;
      a(j, i) = avg;
    }
  }
}

bool projector_axioms_hold(const DenseMatrix& q, std::size_t ell) {
  const DenseMatrix p = matmul(q, transpose(q));
  return frobenius_norm(matmul(p, p) - p) <= kAxiomTolerance &&
         frobenius_norm(p - transpose(p)) <= kAxiomTolerance &&
         std::abs(trace(p) - static_cast<double>(ell)) <= kAxiomTolerance;
}

// Everything a worker needs to evaluate trial i.
struct TrialContext {
  const DenseMatrix& a;
  const DenseMatrix& basis;  // oracle U, m x m
  RsvdConfig cfg;
  std::uint64_t master_seed;

  void add_trial(std::uint64_t index, MomentBlock& acc) const {
    RsvdConfig trial = cfg;
    trial.seed = derive_trial_seed(master_seed, index);
    const QrBasis qr = sketch_basis(a, trial);

    // T = W W^T with W = U^T Q; exactly symmetric by construction.
    const DenseMatrix w = matmul_transposed_left(basis, qr.q);
    const std::size_t m = w.rows();
    for (std::size_t r = 0; r < m; ++r) {
      for (std::size_t c = 0; c < m; ++c) {
        const double t = dot(w.row(r), w.row(c));
        acc.first[r * m + c] += t;
        acc.second[r * m + c] += t * t;
      }
    }
    ++acc.trials;
    if (qr.deficient_columns > 0) ++acc.rank_deficient;
    if (index % kSpotCheckStride == 0 && !projector_axioms_hold(qr.q, trial.ell())) {
      ++acc.axiom_violations;
    }
  }

  // Pairwise summation over [lo, hi).
  MomentBlock sum_range(std::uint64_t lo, std::uint64_t hi, std::size_t m) const {
    MomentBlock acc = MomentBlock::zeros(m);
    if (hi - lo <= kLeafTrials) {
      for (std::uint64_t i = lo; i < hi; ++i) add_trial(i, acc);
      return acc;
    }
    const std::uint64_t mid = lo + (hi - lo) / 2;
    acc += sum_range(lo, mid, m);
    acc += sum_range(mid, hi, m);
    return acc;
  }
};

MomentBlock reduce_blocks(const std::vector<MomentBlock>& blocks, std::size_t lo, std::size_t hi,
                          std::size_t m) {
  if (hi - lo == 1) return blocks[lo];
  const std::size_t mid = lo + (hi - lo) / 2;
  MomentBlock acc = reduce_blocks(blocks, lo, mid, m);
  acc += reduce_blocks(blocks, mid, hi, m);
  return acc;
}

std::size_t resolve_workers(std::size_t requested) {
  if (requested > 0) return requested;
  return std::max(1u, std::thread::hardware_concurrency());
}

// Evaluates blocks [first, last) into out[first..last) using `workers` threads.
void run_blocks(const TrialContext& ctx, std::uint64_t trials, std::uint64_t block_size,
                std::size_t first, std::size_t last, std::size_t workers, std::size_t m,
                std::vector<MomentBlock>& out) {
  std::atomic<std::size_t> next{first};
  std::exception_ptr failure;
  std::mutex failure_mutex;

  auto work = [&] {
    for (;;) {
      const std::size_t b = next.fetch_add(1);
      if (b >= last) return;
      try {
        const std::uint64_t lo = b * block_size;
        const std::uint64_t hi = std::min(trials, lo + block_size);
        out[b] = ctx.sum_range(lo, hi, m);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next.store(last);
        return;
      }
    }
  };

  const std::size_t threads = std::min(workers, last - first);
  if (threads <= 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(work);
  }
  if (failure) std::rethrow_exception(failure);
}

void check_resume(const Checkpoint& ck, const ExperimentConfig& ec, std::uint64_t fingerprint,
                  std::uint64_t block_size, std::size_t block_count) {
  auto mismatch = [](const std::string& what) {
    throw Error(ErrorKind::CheckpointMismatch, "checkpoint does not match this run: " + what);
  };
  if (ck.master_seed != ec.rsvd.seed) mismatch("seed");
  if (ck.trials != ec.trials) mismatch("trial count");
  if (ck.dist != ec.rsvd.dist) mismatch("distribution");
  if (ck.m != ec.matrix.rows()) mismatch("matrix rows");
  if (ck.config_hash != fingerprint) mismatch("matrix or k/p/q");
  if (ck.blocks.size() > block_count) mismatch("block count");
  if (ck.trials_done != std::min<std::uint64_t>(ec.trials, ck.blocks.size() * block_size)) {
    mismatch("trials_done");
  }
  const std::size_t mm = ec.matrix.rows() * ec.matrix.rows();
  for (const auto& b : ck.blocks) {
    if (b.first.size() != mm || b.second.size() != mm) mismatch("block layout");
  }
}

}  // namespace

DenseMatrix paper3x3() {
  return DenseMatrix::from_rows({{3, 3, 3}, {-2, -2, 4}, {1, -1, 0}});
}

MomentBlock MomentBlock::zeros(std::size_t m) {
  return MomentBlock{std::vector<double>(m * m, 0.0), std::vector<double>(m * m, 0.0)};
}

MomentBlock& MomentBlock::operator+=(const MomentBlock& other) {
  for (std::size_t i = 0; i < first.size(); ++i) {
    first[i] += other.first[i];
    second[i] += other.second[i];
  }
  trials += other.trials;
  rank_deficient += other.rank_deficient;
  axiom_violations += other.axiom_violations;
  return *this;
}

std::uint64_t block_size_for(std::uint64_t trials) noexcept {
  return std::max<std::uint64_t>(1, (trials + kBlocksPerRun - 1) / kBlocksPerRun);
}

std::uint64_t experiment_fingerprint(const ExperimentConfig& ec) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto mix = [&h](std::uint64_t word) {
    for (int byte = 0; byte < 8; ++byte) {
      h ^= (word >> (8 * byte)) & 0xffU;
      h *= 0x100000001b3ULL;
    }
  };
  mix(ec.matrix.rows());
  mix(ec.matrix.cols());
  for (double x : ec.matrix.data()) mix(std::bit_cast<std::uint64_t>(x));
  mix(ec.rsvd.k);
  mix(ec.rsvd.p);
  mix(ec.rsvd.q);
  return h;
}

DenseMatrix estimate_standard_errors(const DenseMatrix& sum, const DenseMatrix& sum_sq,
                                     std::uint64_t trials) {
  if (trials < 2) {
    throw Error(ErrorKind::ConfigError, "standard errors need at least 2 trials");
  }
  const double n = static_cast<double>(trials);
  DenseMatrix se(sum.rows(), sum.cols());
  for (std::size_t i = 0; i < se.data().size(); ++i) {
    const double mean = sum.data()[i] / n;
    const double var = std::max(0.0, sum_sq.data()[i] / n - mean * mean);
    se.data()[i] = std::sqrt(var / n);
  }
  return se;
}

LambdaDiagnostics analyze(const DenseMatrix& mean_projector, const SvdResult& oracle,
                          const DenseMatrix& standard_errors) {
  const std::size_t m = mean_projector.rows();
  if (mean_projector.cols() != m || oracle.u.rows() != m || oracle.u.cols() != m ||
      standard_errors.rows() != m || standard_errors.cols() != m) {
    throw Error(ErrorKind::DimensionMismatch,
                "analyze: need an m x m projector, an m x m oracle U and m x m standard errors");
  }
  const DenseMatrix rotated =
      matmul_transposed_left(oracle.u, matmul(mean_projector, oracle.u));

  LambdaDiagnostics d;
  d.lambda_hat.resize(m);
  for (std::size_t i = 0; i < m; ++i) d.lambda_hat[i] = rotated(i, i);
  d.trace = trace(mean_projector);

  double max_se = 0.0;
  for (double s : standard_errors.data()) max_se = std::max(max_se, s);

  d.max_offdiag_abs = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = i + 1; j < m; ++j) {
      if (std::abs(rotated(i, j)) > d.max_offdiag_abs) {
        d.max_offdiag_abs = std::abs(rotated(i, j));
        d.offdiag_argmax = {i, j};
      }
    }
  }
  d.diagonal_within_4se = d.max_offdiag_abs <= 4.0 * max_se;

  d.lambda_in_open_unit_interval = true;
  for (std::size_t i = 0; i < m; ++i) {
    const double margin = 3.0 * standard_errors(i, i);
    if (!(d.lambda_hat[i] - margin > 0.0 && d.lambda_hat[i] + margin < 1.0)) {
      d.lambda_in_open_unit_interval = false;
    }
  }

  d.diag_strictly_decreasing = true;
  for (std::size_t i = 0; i + 1 < m; ++i) {
    const double combined = std::hypot(standard_errors(i, i), standard_errors(i + 1, i + 1));
    if (!(d.lambda_hat[i] - d.lambda_hat[i + 1] > 3.0 * combined)) {
      d.diag_strictly_decreasing = false;
    }
  }
  return d;
}

double corollary_check(const DenseMatrix& mean_projector, const DenseMatrix& a,
                       const SvdResult& oracle) {
  const std::size_t m = a.rows();
  if (mean_projector.rows() != m || mean_projector.cols() != m || oracle.u.rows() != m ||
      oracle.rank() != m || oracle.v.rows() != a.cols()) {
    throw Error(ErrorKind::DimensionMismatch,
                "corollary_check: projector, matrix and oracle SVD shapes disagree");
  }
  const DenseMatrix rotated =
      matmul_transposed_left(oracle.u, matmul(mean_projector, oracle.u));
  SvdResult structured = oracle;
  for (std::size_t i = 0; i < m; ++i) structured.sigma[i] = rotated(i, i) * oracle.sigma[i];
  return frobenius_norm(matmul(mean_projector, a) - reconstruct(structured)) / frobenius_norm(a);
}

std::optional<ConsistencyReport> run_consistency(const ExperimentConfig& ec,
                                                 const RunControl& control) {
  const auto started = std::chrono::steady_clock::now();
  if (ec.trials == 0) throw Error(ErrorKind::ConfigError, "trial count must be at least 1");

  RsvdConfig cfg = ec.rsvd;
  cfg.mode = RsvdMode::Theorem;
  try {
    cfg.validate(ec.matrix.rows(), ec.matrix.cols());
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::TheoremModeViolation) {
      throw Error(ErrorKind::ConfigError, e.what());
    }
    throw;
  }

  const std::size_t m = ec.matrix.rows();
  const SvdResult oracle = jacobi_svd(ec.matrix);
  const std::uint64_t block_size = block_size_for(ec.trials);
  const auto block_count = static_cast<std::size_t>((ec.trials + block_size - 1) / block_size);
  const std::uint64_t fingerprint = experiment_fingerprint(ec);

  std::vector<MomentBlock> blocks(block_count);
  std::size_t done_blocks = 0;
  if (control.resume) {
    check_resume(*control.resume, ec, fingerprint, block_size, block_count);
    done_blocks = control.resume->blocks.size();
    std::copy(control.resume->blocks.begin(), control.resume->blocks.end(), blocks.begin());
  }

  const TrialContext ctx{ec.matrix, oracle.u, cfg, ec.rsvd.seed};
  const std::size_t workers = resolve_workers(ec.worker_count);

  auto trials_through = [&](std::size_t nblocks) {
    return std::min<std::uint64_t>(ec.trials, nblocks * block_size);
  };
  auto blocks_for_trials = [&](std::uint64_t t) {
    return static_cast<std::size_t>(std::min<std::uint64_t>(block_count, (t + block_size - 1) / block_size));
  };

  auto save = [&] {
    if (!control.checkpoint_path) return;
    Checkpoint ck;
    ck.master_seed = ec.rsvd.seed;
    ck.trials = ec.trials;
    ck.trials_done = trials_through(done_blocks);
    ck.dist = ec.rsvd.dist;
    ck.m = static_cast<std::uint32_t>(m);
    ck.config_hash = fingerprint;
    ck.blocks.assign(blocks.begin(), blocks.begin() + static_cast<std::ptrdiff_t>(done_blocks));
    write_checkpoint(*control.checkpoint_path, ck);
  };

  const std::size_t wave = ec.checkpoint_every > 0
                               ? std::max<std::size_t>(1, blocks_for_trials(ec.checkpoint_every))
                               : block_count;
  const std::size_t stop_at =
      control.stop_after_trials > 0 ? blocks_for_trials(control.stop_after_trials) : block_count;

  while (done_blocks < block_count) {
    std::size_t target = std::min(block_count, done_blocks + wave);
    if (done_blocks < stop_at) target = std::min(target, stop_at);
    run_blocks(ctx, ec.trials, block_size, done_blocks, target, workers, m, blocks);
    done_blocks = target;
    if (control.progress) control.progress(trials_through(done_blocks), ec.trials);
    if (done_blocks < block_count && (ec.checkpoint_every > 0 || done_blocks >= stop_at)) save();
    if (done_blocks >= stop_at && done_blocks < block_count) return std::nullopt;
  }
  save();

  const MomentBlock total = reduce_blocks(blocks, 0, block_count, m);
  const double n = static_cast<double>(ec.trials);

  DenseMatrix sum(m, m, total.first);
  DenseMatrix sum_sq(m, m, total.second);
  DenseMatrix mean_rotated = (1.0 / n) * sum;
  symmetrize(mean_rotated);

  DenseMatrix mean_projector = matmul(oracle.u, matmul(mean_rotated, transpose(oracle.u)));
  symmetrize(mean_projector);

  DenseMatrix se = ec.trials >= 2 ? estimate_standard_errors(sum, sum_sq, ec.trials)
                                  : DenseMatrix(m, m);
  symmetrize(se);

  ConsistencyReport report{
      .mean_projector = mean_projector,
      .standard_errors = se,
      .diagnostics = analyze(mean_projector, oracle, se),
      .corollary_ratio = corollary_check(mean_projector, ec.matrix, oracle),
      .rank_deficient_trials = total.rank_deficient,
      .axiom_violations = total.axiom_violations,
      .trials = ec.trials,
      .seed = ec.rsvd.seed,
      .dist = ec.rsvd.dist,
      .ell = cfg.ell(),
      .elapsed_seconds = 0.0,
  };
  report.elapsed_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return report;
}

ConsistencyReport run_consistency(const ExperimentConfig& ec) {
  return *run_consistency(ec, RunControl{});
}

}  // namespace rsvdlab
