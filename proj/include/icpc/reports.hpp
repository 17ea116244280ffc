#pragma once

#include <nlohmann/json.hpp>
#include <string>

#include "icpc/gmm.hpp"
#include "icpc/meanfield.hpp"
#include "icpc/model.hpp"
#include "icpc/panel.hpp"
#include "icpc/scaling.hpp"

namespace icpc {

// Human tables use fixed 6-decimal formatting; JSON carries full precision.

std::string format_welfare_table(const ModelParams& params,
                                 const WelfareReport& welfare,
                                 const PolicyReport& policy, double lucas_cost);
std::string format_gmm_table(const GmmResult& result);
std::string format_panel_table(const PanelResult& result,
                               double wald_p = -1.0);
std::string format_scaling_table(const ScalingResult& result);
std::string format_convergence_table(const ConvergenceResult& result);
std::string format_consistency_table(const ConsistencyStudy& study);

nlohmann::json to_json(const GmmResult& result);
nlohmann::json to_json(const PanelResult& result);
nlohmann::json to_json(const ScalingResult& result);
nlohmann::json to_json(const ConvergenceResult& result);
nlohmann::json to_json(const ConsistencyStudy& study);
nlohmann::json welfare_to_json(const ModelParams& params,
                               const WelfareReport& welfare,
                               const PolicyReport& policy, double lucas_cost);

}  // namespace icpc
