#pragma once

#include <string_view>

#include <json.hpp>

#include "rsvdlab/consistency.hpp"
#include "rsvdlab/rsvd.hpp"
#include "rsvdlab/svd.hpp"

namespace rsvdlab {

inline constexpr std::string_view kToolVersion = "1.0.0";

// JSON documents written by the CLI. Matrices are row-major nested arrays and
// numbers use the shortest round-trip representation.
nlohmann::ordered_json matrix_to_json(const DenseMatrix& a);

nlohmann::ordered_json svd_report(const DenseMatrix& a, std::string_view matrix_label,
                                  const SvdResult& svd);

nlohmann::ordered_json rsvd_report(const DenseMatrix& a, std::string_view matrix_label,
                                   const RsvdConfig& cfg, const RsvdResult& result);

// Wall-clock time is deliberately absent so that equal seeds give equal bytes.
nlohmann::ordered_json consistency_report(const ExperimentConfig& ec,
                                          const ConsistencyReport& report);

}  // namespace rsvdlab
