#pragma once

#include "json.hpp"
#include "qbat/audit.hpp"
#include "qbat/tolerance.hpp"

namespace qbat {

nlohmann::json to_json(const AuditReport& report);
nlohmann::json to_json(const EpsilonSweep& sweep);
nlohmann::json to_json(const FalsifierReport& report);
nlohmann::json to_json(const VanishingCondition& condition);
nlohmann::json to_json(const ToleranceConfig& tol);

}  // namespace qbat
