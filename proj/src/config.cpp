#include "negmine/config_json.hpp"
#include "negmine/core_types.hpp"

#include <cmath>
#include <string>

namespace negmine {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NonUnitRow: return "NonUnitRow";
    case ErrorCode::LabelCountMismatch: return "LabelCountMismatch";
    case ErrorCode::EmptyMatrix: return "EmptyMatrix";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::AlphaTooLarge: return "AlphaTooLarge";
    case ErrorCode::TooFewRows: return "TooFewRows";
    case ErrorCode::LNotAvailable: return "LNotAvailable";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::ZeroNormResult: return "ZeroNormResult";
    case ErrorCode::EmptyAffinities: return "EmptyAffinities";
    case ErrorCode::EmptyGroups: return "EmptyGroups";
    case ErrorCode::NonPositiveMean: return "NonPositiveMean";
    case ErrorCode::EnumerationTooLarge: return "EnumerationTooLarge";
    case ErrorCode::InvalidDistribution: return "InvalidDistribution";
    case ErrorCode::InsufficientTrials: return "InsufficientTrials";
    case ErrorCode::InfeasibleSeparation: return "InfeasibleSeparation";
    case ErrorCode::EmptyScores: return "EmptyScores";
    case ErrorCode::Io: return "Io";
    case ErrorCode::Format: return "Format";
  }
  return "Unknown";
}

const char* to_string(Method method) {
  switch (method) {
    case Method::MCM: return "mcm";
    case Method::NegLabel: return "neglabel";
    case Method::Debiased: return "debiased";
    case Method::GroupedDebiased: return "grouped";
    case Method::AsymptoticUnbiased: return "asymptotic";
  }
  return "unknown";
}

Method method_from_string(const std::string& name) {
  if (name == "mcm") return Method::MCM;
  if (name == "neglabel") return Method::NegLabel;
  if (name == "debiased") return Method::Debiased;
  if (name == "grouped") return Method::GroupedDebiased;
  if (name == "asymptotic") return Method::AsymptoticUnbiased;
  throw Error(ErrorCode::InvalidConfig, "unknown method '" + name + "'");
}

void validate(const ScoreConfig& c) {
  auto fail = [](const std::string& what) { throw Error(ErrorCode::InvalidConfig, what); };
  if (!(c.kappa > 0.0) || !std::isfinite(c.kappa)) fail("kappa must be > 0");
  if (!(c.tau >= 0.0 && c.tau < 1.0)) fail("tau must lie in [0, 1)");
  if (!(c.sigma >= 0.0) || !std::isfinite(c.sigma)) fail("sigma must be >= 0");
  if (c.B < 1) fail("B must be >= 1");
  if (c.B > c.L) fail("B must not exceed L");
  if (c.alpha < 1) fail("alpha must be >= 1");
  if (!(c.mass_floor > 0.0)) fail("mass_floor must be > 0");
  if (c.lambda_mode == LambdaMode::Fixed && !(c.lambda_value > 0.0)) fail("fixed lambda must be > 0");
}

ScoreConfig score_config_from_json(const nlohmann::json& j) {
  ScoreConfig c;
  c.kappa = j.value("kappa", c.kappa);
  c.tau = j.value("tau", c.tau);
  c.sigma = j.value("sigma", c.sigma);
  c.L = j.value("L", c.L);
  c.B = j.value("B", c.B);
  c.alpha = j.value("alpha", c.alpha);
  c.mass_floor = j.value("mass_floor", c.mass_floor);
  c.seed = j.value("seed", c.seed);
  if (j.contains("lambda")) {
    const auto& l = j.at("lambda");
    if (l.is_string()) {
      if (l.get<std::string>() != "group_size")
        throw Error(ErrorCode::InvalidConfig, "lambda must be \"group_size\" or a number");
      c.lambda_mode = LambdaMode::GroupSize;
    } else {
      c.lambda_mode = LambdaMode::Fixed;
      c.lambda_value = l.get<double>();
    }
  }
  if (j.contains("grouping")) {
    const auto g = j.at("grouping").get<std::string>();
    if (g == "round_robin") c.grouping = GroupingMode::RoundRobin;
    else if (g == "random") c.grouping = GroupingMode::Random;
    else throw Error(ErrorCode::InvalidConfig, "grouping must be round_robin or random");
  }
  return c;
}

nlohmann::json to_json(const ScoreConfig& c) {
  nlohmann::json j{{"kappa", c.kappa},   {"tau", c.tau},     {"sigma", c.sigma},
                   {"L", c.L},           {"B", c.B},         {"alpha", c.alpha},
                   {"mass_floor", c.mass_floor}, {"seed", c.seed},
                   {"grouping", c.grouping == GroupingMode::RoundRobin ? "round_robin" : "random"}};
  if (c.lambda_mode == LambdaMode::GroupSize) j["lambda"] = "group_size";
  else j["lambda"] = c.lambda_value;
  return j;
}

}  // namespace negmine
