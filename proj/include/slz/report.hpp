#pragma once

#include "slz/engine.hpp"
#include "slz/mission.hpp"

#include <nlohmann/json.hpp>

#include <string>
#include <vector>

namespace slz {

// Output float policy: risks, scores, rule aggregates and proof weights print
// with six decimals; per-fact probabilities carry nine so a reader can
// re-multiply them into the printed weights.
double round_to(double v, int decimals);
std::string fixed6(double v);

// {zone, risk, score, passed, rules:[{id, p, proofs:[{weight, facts:[...]}]}]}
nlohmann::ordered_json verdict_to_json(const ZoneVerdict& verdict, const InferResult& inference);

nlohmann::ordered_json ranking_to_json(const std::vector<RankedZone>& ranking);

// The rule-contribution table as printable text: one row per hazard rule with
// its aggregated p and proof count, zero rows included, then proof details.
std::string explain_text(const ZoneVerdict& verdict, const InferResult& inference);

}  // namespace slz
