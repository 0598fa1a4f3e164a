#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "json.hpp"

#include "newton_flow/flow.hpp"
#include "newton_flow/gapcheck.hpp"
#include "newton_flow/operators.hpp"

namespace newton_flow::cli {

/// Pretty-printed JSON with sorted keys, integers as integers, floating
/// values with 17 significant digits and non-finite values as null.
void write_json(std::ostream& out, const nlohmann::json& value);
[[nodiscard]] std::string format_double(double x);

[[nodiscard]] nlohmann::json to_json(const gapcheck::GapReport& report);
[[nodiscard]] nlohmann::json to_json(const gapcheck::GaussReport& report);
[[nodiscard]] nlohmann::json to_json(const operators::ConvergenceReport& report);
[[nodiscard]] nlohmann::json to_json(const flow::Diagnostics& d);
[[nodiscard]] nlohmann::json flow_summary(const flow::FlowConfig& config, const flow::FlowResult& result);

/// Header `t,max_residual,homothety_defect,min_radius,dt`, one row per record.
void write_diagnostics_csv(std::ostream& out, const std::vector<flow::Diagnostics>& rows);

}  // namespace newton_flow::cli
