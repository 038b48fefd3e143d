#include "forksched/json_io.hpp"

#include <cmath>
#include <set>
#include <string>
#include <vector>

#include "forksched/errors.hpp"

namespace forksched {

namespace {

using nlohmann::json;

void require_keys(const json& j, const std::set<std::string>& allowed,
                  const std::set<std::string>& required,
                  const std::string& what) {
  if (!j.is_object())
    throw validation_error(what + " must be a JSON object");
  for (const auto& item : j.items())
    if (!allowed.count(item.key()))
      throw validation_error(what + ": unknown key '" + item.key() + "'");
  for (const std::string& key : required)
    if (!j.contains(key))
      throw validation_error(what + ": missing key '" + key + "'");
}

double number_field(const json& j, const std::string& key,
                    const std::string& what) {
  const json& v = j.at(key);
  if (!v.is_number())
    throw validation_error(what + ": '" + key + "' must be a number");
  return v.get<double>();
}

}  // namespace

nlohmann::json dist_to_json(const ServiceDistribution& dist) {
  return std::visit(
      [](const auto& d) -> json {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, ShiftedExp>)
          return json{{"family", "shifted_exp"}, {"c", d.c}, {"mu", d.mu}};
        else if constexpr (std::is_same_v<T, ParetoDist>)
          return json{{"family", "pareto"}, {"xm", d.xm}, {"shape", d.shape}};
        else
          return json{
              {"family", "weibull"}, {"scale", d.scale}, {"shape", d.shape}};
      },
      dist);
}

ServiceDistribution dist_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("family") || !j.at("family").is_string())
    throw validation_error(
        "distribution must be an object with a 'family' string");
  const std::string family = j.at("family").get<std::string>();
  if (family == "shifted_exp") {
    require_keys(j, {"family", "c", "mu"}, {"c", "mu"}, "shifted_exp");
    return ShiftedExp(number_field(j, "c", "shifted_exp"),
                      number_field(j, "mu", "shifted_exp"));
  }
  if (family == "pareto") {
    require_keys(j, {"family", "xm", "shape"}, {"xm", "shape"}, "pareto");
    return ParetoDist(number_field(j, "xm", "pareto"),
                      number_field(j, "shape", "pareto"));
  }
  if (family == "weibull") {
    require_keys(j, {"family", "scale", "shape"}, {"scale", "shape"},
                 "weibull");
    return WeibullDist(number_field(j, "scale", "weibull"),
                       number_field(j, "shape", "weibull"));
  }
  throw validation_error("unknown distribution family '" + family + "'");
}

nlohmann::json schedule_to_json(const ForkSchedule& schedule) {
  json stages = json::array();
  for (const Stage& st : schedule.stages)
    stages.push_back(json::array({st.t, st.n}));
  return json{{"stages", stages}};
}

ForkSchedule schedule_from_json(const nlohmann::json& j) {
  require_keys(j, {"stages"}, {"stages"}, "schedule");
  const json& arr = j.at("stages");
  if (!arr.is_array() || arr.empty())
    throw validation_error("schedule: 'stages' must be a non-empty array");
  std::vector<Stage> stages;
  stages.reserve(arr.size());
  for (const json& item : arr) {
    if (!item.is_array() || item.size() != 2)
      throw validation_error("schedule: each stage must be a [t, n] pair");
    if (!item[0].is_number())
      throw validation_error("schedule: forking time must be a number");
    double n_raw;
    if (item[1].is_number_integer()) {
      n_raw = item[1].get<double>();
    } else if (item[1].is_number() &&
               std::floor(item[1].get<double>()) == item[1].get<double>()) {
      n_raw = item[1].get<double>();
    } else {
      throw validation_error("schedule: batch size must be an integer");
    }
    if (n_raw < 0.0 || n_raw > 2147483647.0)
      throw validation_error("schedule: batch size out of range");
    stages.push_back({item[0].get<double>(), static_cast<int>(n_raw)});
  }
  return ForkSchedule(std::move(stages));
}

nlohmann::json scenario_to_json(const Scenario& scenario) {
  return json{{"K", scenario.K},
              {"lambda", scenario.lambda},
              {"distribution", dist_to_json(scenario.dist)},
              {"schedule", schedule_to_json(scenario.schedule)}};
}

Scenario scenario_from_json(const nlohmann::json& j) {
  require_keys(j, {"K", "lambda", "distribution", "schedule"},
               {"K", "lambda", "distribution", "schedule"}, "scenario");
  if (!j.at("K").is_number_integer())
    throw validation_error("scenario: K must be an integer");
  const long long k = j.at("K").get<long long>();
  if (k < 1 || k > 2147483647)
    throw validation_error("scenario: K must be a positive 32-bit integer");
  const double lambda = number_field(j, "lambda", "scenario");
  if (!(lambda > 0.0))
    throw validation_error("scenario: lambda must be > 0");
  return Scenario{static_cast<int>(k), lambda,
                  dist_from_json(j.at("distribution")),
                  schedule_from_json(j.at("schedule"))};
}

std::string stages_json_string(const ForkSchedule& schedule) {
  return schedule_to_json(schedule).at("stages").dump();
}

}  // namespace forksched
