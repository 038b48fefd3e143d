#pragma once

#include <string>

#include "forksched/schedule.hpp"
#include "json.hpp"

namespace forksched {

// Wire formats:
//   {"family":"shifted_exp","c":8.0,"mu":0.01}
//   {"family":"pareto","xm":0.08,"shape":1.1111111111}
//   {"family":"weibull","scale":16.0,"shape":2.0}
//   {"stages":[[0.0,4],[2.0,5],[4.0,3]]}
// Readers reject unknown keys so typos fail loudly.

nlohmann::json dist_to_json(const ServiceDistribution& dist);
ServiceDistribution dist_from_json(const nlohmann::json& j);

nlohmann::json schedule_to_json(const ForkSchedule& schedule);
ForkSchedule schedule_from_json(const nlohmann::json& j);

// Scenario documents carry K, lambda, distribution, schedule.
nlohmann::json scenario_to_json(const Scenario& scenario);
Scenario scenario_from_json(const nlohmann::json& j);

// Compact stage-vector literal, e.g. "[[0,4],[2,5]]"; used in CSV cells.
std::string stages_json_string(const ForkSchedule& schedule);

}  // namespace forksched
