#include "rsvdlab/report.hpp"

#include <cmath>

namespace rsvdlab {

using nlohmann::ordered_json;

ordered_json matrix_to_json(const DenseMatrix& a) {
  ordered_json rows = ordered_json::array();
  for (std::size_t i = 0; i < a.rows(); ++i) {
    ordered_json row = ordered_json::array();
    for (double x : a.row(i)) row.push_back(x);
    rows.push_back(std::move(row));
  }
  return rows;
}

namespace {

ordered_json header(std::string_view command, std::string_view matrix_label,
                    const DenseMatrix& a) {
  ordered_json doc;
  doc["tool_version"] = kToolVersion;
  doc["command"] = command;
  doc["matrix_source"] = matrix_label;
  doc["matrix"] = matrix_to_json(a);
  return doc;
}

}  // namespace

ordered_json svd_report(const DenseMatrix& a, std::string_view matrix_label,
                        const SvdResult& svd) {
  ordered_json doc = header("svd", matrix_label, a);
  doc["k"] = svd.rank();
  doc["U"] = matrix_to_json(svd.u);
  doc["sigma"] = svd.sigma;
  doc["V"] = matrix_to_json(svd.v);
  return doc;
}

ordered_json rsvd_report(const DenseMatrix& a, std::string_view matrix_label,
                         const RsvdConfig& cfg, const RsvdResult& result) {
  const SvdResult exact = jacobi_svd(a);
  double tail = 0.0;
  for (std::size_t i = cfg.k; i < exact.rank(); ++i) tail += exact.sigma[i] * exact.sigma[i];
  const double error = frobenius_norm(a - reconstruct(result.truncated));
  const double norm_a = frobenius_norm(a);

  ordered_json doc = header("rsvd", matrix_label, a);
  doc["seed"] = cfg.seed;
  doc["dist"] = to_string(cfg.dist);
  doc["k"] = cfg.k;
  doc["p"] = cfg.p;
  doc["q"] = cfg.q;
  doc["ell"] = cfg.ell();
  doc["U"] = matrix_to_json(result.truncated.u);
  doc["sigma"] = result.truncated.sigma;
  doc["V"] = matrix_to_json(result.truncated.v);
  doc["q_basis"] = matrix_to_json(result.q_basis);
  doc["rank_deficient"] = result.rank_deficient;
  doc["exact_sigma"] = exact.sigma;
  doc["frobenius_error"] = error;
  doc["relative_error"] = norm_a > 0.0 ? error / norm_a : 0.0;
  doc["eckart_young_bound"] = std::sqrt(tail);
  return doc;
}

ordered_json consistency_report(const ExperimentConfig& ec, const ConsistencyReport& report) {
  const auto& d = report.diagnostics;
  ordered_json doc = header("consistency", ec.matrix_label, ec.matrix);
  doc["seed"] = report.seed;
  doc["dist"] = to_string(report.dist);
  doc["N"] = report.trials;
  doc["k"] = ec.rsvd.k;
  doc["p"] = ec.rsvd.p;
  doc["q"] = ec.rsvd.q;
  doc["ell"] = report.ell;
  doc["mean_projector"] = matrix_to_json(report.mean_projector);
  doc["lambda_hat"] = d.lambda_hat;
  doc["standard_errors"] = matrix_to_json(report.standard_errors);
  doc["max_offdiag_abs"] = d.max_offdiag_abs;
  doc["offdiag_argmax"] = {d.offdiag_argmax.first, d.offdiag_argmax.second};
  doc["trace"] = d.trace;
  doc["diagonal_within_4se"] = d.diagonal_within_4se;
  doc["lambda_in_open_unit_interval"] = d.lambda_in_open_unit_interval;
  doc["diag_strictly_decreasing"] = d.diag_strictly_decreasing;
  doc["corollary_ratio"] = report.corollary_ratio;
  doc["rank_deficient_trials"] = report.rank_deficient_trials;
  doc["projector_axiom_violations"] = report.axiom_violations;
  return doc;
}

}  // namespace rsvdlab
