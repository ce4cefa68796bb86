#include "rsvdlab/cli.hpp"

#include <cstdlib>
#include <iomanip>
#include <optional>
#include <ostream>

#include <CLI11.hpp>

#include "rsvdlab/checkpoint.hpp"
#include "rsvdlab/consistency.hpp"
#include "rsvdlab/error.hpp"
#include "rsvdlab/matrix_io.hpp"
#include "rsvdlab/report.hpp"

namespace rsvdlab {

namespace {

constexpr std::uint64_t kCliCheckpointEvery = 1'000'000;

struct MatrixOptions {
  std::string path;
  std::string demo;

  void attach(CLI::App& app) {
    auto* file = app.add_option("--matrix", path, "CSV matrix file (no header)");
    auto* builtin = app.add_option("--demo", demo, "Built-in matrix")
                        ->check(CLI::IsMember({"paper3x3"}));
    file->excludes(builtin);
    builtin->excludes(file);
  }

  std::pair<DenseMatrix, std::string> load() const {
    if (!demo.empty()) return {paper3x3(), demo};
    if (path.empty()) throw Error(ErrorKind::ParseError, "one of --matrix or --demo is required");
    return {read_csv_file(path), path};
  }
};

struct SketchOptions {
  std::size_t k = 1;
  std::size_t p = 1;
  std::size_t q = 0;
  std::string dist = "gaussian";
  std::uint64_t seed = 1;

  void attach(CLI::App& app) {
    app.add_option("--k", k, "Target rank")->check(CLI::PositiveNumber);
    app.add_option("--p", p, "Oversampling");
    app.add_option("--q", q, "Power exponent");
    app.add_option("--dist", dist, "Sketch distribution")
        ->check(CLI::IsMember({"gaussian", "uniform", "t3", "shifted-exp", "rademacher"}));
    app.add_option("--seed", seed, "Master seed");
  }

  RsvdConfig config() const {
    return RsvdConfig{.k = k, .p = p, .q = q, .dist = *parse_distribution(dist), .seed = seed};
  }
};

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::ParseError:
      return kExitParse;
    case ErrorKind::DimensionMismatch:
    case ErrorKind::RankTooLarge:
    case ErrorKind::ConfigError:
    case ErrorKind::TheoremModeViolation:
      return kExitConfig;
    case ErrorKind::CheckpointMismatch:
      return kExitCheckpoint;
    default:
      return kExitFailure;
  }
}

std::size_t workers_from_env() {
  const char* env = std::getenv("RSVD_WORKERS");
  if (env == nullptr || *env == '\0') return 0;
  char* end = nullptr;
  const unsigned long long value = std::strtoull(env, &end, 10);
  if (*end != '\0') throw Error(ErrorKind::ParseError, "RSVD_WORKERS is not a number");
  return static_cast<std::size_t>(value);
}

void emit(std::ostream& out, const nlohmann::ordered_json& doc) { out << doc.dump(2) << '\n'; }

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Randomized SVD laboratory: exact SVD, rSVD and sketch consistency experiments",
               "rsvdlab"};
  app.require_subcommand(1);

  MatrixOptions svd_matrix;
  std::optional<std::size_t> svd_k;
  auto* svd_cmd = app.add_subcommand("svd", "Exact truncated SVD (one-sided Jacobi)");
  svd_matrix.attach(*svd_cmd);
  svd_cmd->add_option("--k", svd_k, "Rank (default: min(m, n))")->check(CLI::PositiveNumber);

  MatrixOptions rsvd_matrix;
  SketchOptions rsvd_sketch;
  auto* rsvd_cmd = app.add_subcommand("rsvd", "Randomized SVD with error against the exact SVD");
  rsvd_matrix.attach(*rsvd_cmd);
  rsvd_sketch.attach(*rsvd_cmd);

  MatrixOptions cons_matrix;
  SketchOptions cons_sketch;
  std::uint64_t trials = 100000;
  std::optional<std::size_t> workers;
  std::string checkpoint_path;
  std::string resume_path;
  auto* cons_cmd =
      app.add_subcommand("consistency", "Monte Carlo estimate of E(QQ^T) and its diagnostics");
  cons_matrix.attach(*cons_cmd);
  cons_sketch.attach(*cons_cmd);
  cons_cmd->add_option("--trials", trials, "Number of sketches N")->check(CLI::PositiveNumber);
  cons_cmd->add_option("--workers", workers, "Worker threads (0 = auto; env RSVD_WORKERS)");
  cons_cmd->add_option("--checkpoint", checkpoint_path, "Write resumable checkpoints here");
  cons_cmd->add_option("--resume", resume_path, "Continue from this checkpoint");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitParse;
  }

  try {
    if (svd_cmd->parsed()) {
      const auto [a, label] = svd_matrix.load();
      const SvdResult full = jacobi_svd(a);
      emit(out, svd_report(a, label, truncate(full, svd_k.value_or(full.rank()))));
    } else if (rsvd_cmd->parsed()) {
      const auto [a, label] = rsvd_matrix.load();
      const RsvdConfig cfg = rsvd_sketch.config();
      emit(out, rsvd_report(a, label, cfg, rsvd(a, cfg)));
    } else if (cons_cmd->parsed()) {
      auto [a, label] = cons_matrix.load();
      ExperimentConfig ec{.matrix = std::move(a),
                          .matrix_label = label,
                          .rsvd = cons_sketch.config(),
                          .trials = trials,
                          .worker_count = workers ? *workers : workers_from_env()};

      RunControl control;
      if (!resume_path.empty()) {
        try {
          control.resume = read_checkpoint(std::filesystem::path(resume_path));
        } catch (const Error& e) {
          throw Error(ErrorKind::CheckpointMismatch, e.what());
        }
      }
      if (!checkpoint_path.empty()) {
        control.checkpoint_path = checkpoint_path;
      } else if (!resume_path.empty()) {
        control.checkpoint_path = resume_path;
      }
      if (control.checkpoint_path) ec.checkpoint_every = kCliCheckpointEvery;
      control.progress = [&err](std::uint64_t done, std::uint64_t total) {
        err << "trials " << done << "/" << total << '\n';
      };

      const ConsistencyReport report = *run_consistency(ec, control);
      err << "elapsed " << std::fixed << std::setprecision(3) << report.elapsed_seconds
          << " s\n";
      emit(out, consistency_report(ec, report));
    }
  } catch (const Error& e) {
    err << "error (" << to_string(e.kind()) << "): " << e.what() << '\n';
    return exit_code_for(e.kind());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitOk;
}

}  // namespace rsvdlab
