#include "slz/report.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace slz {

double round_to(double v, int decimals) {
    const double scale = std::pow(10.0, decimals);
    return std::round(v * scale) / scale;
}

std::string fixed6(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6f", v);
    return buf;
}

namespace {

nlohmann::ordered_json fact_to_json(const Fact& fact) {
    nlohmann::ordered_json out;
    out["pred"] = fact.negation ? "not " + fact.predicate : fact.predicate;
    out["args"] = fact.args;
    out["prob"] = round_to(fact.prob, 9);
    return out;
}

nlohmann::ordered_json proof_to_json(const Proof& proof, const InferResult& inference) {
    nlohmann::ordered_json out;
    out["weight"] = round_to(proof.weight, 6);
    auto& facts = out["facts"] = nlohmann::ordered_json::array();
    for (const int id : proof.support) {
        const Fact* fact = inference.fact_by_id(id);
        if (fact) facts.push_back(fact_to_json(*fact));
    }
    return out;
}

}  // namespace

nlohmann::ordered_json verdict_to_json(const ZoneVerdict& verdict, const InferResult& inference) {
    nlohmann::ordered_json out;
    out["zone"] = verdict.zone_id;
    out["risk"] = round_to(verdict.risk, 6);
    out["score"] = round_to(verdict.score, 6);
    out["passed"] = verdict.passed_gate;
    auto& rules = out["rules"] = nlohmann::ordered_json::array();
    for (const auto& contribution : verdict.per_rule) {
        nlohmann::ordered_json jr;
        jr["id"] = contribution.rule_id;
        jr["p"] = round_to(contribution.p, 6);
        auto& proofs = jr["proofs"] = nlohmann::ordered_json::array();
        for (const auto& proof : verdict.proofs)
            if (proof.rule_id == contribution.rule_id)
                proofs.push_back(proof_to_json(proof, inference));
        rules.push_back(std::move(jr));
    }
    return out;
}

nlohmann::ordered_json ranking_to_json(const std::vector<RankedZone>& ranking) {
    nlohmann::ordered_json out = nlohmann::ordered_json::array();
    for (const auto& zone : ranking) {
        nlohmann::ordered_json jz;
        jz["zone"] = zone.zone_id;
        jz["rank"] = zone.rank;
        jz["indicator"] = zone.indicator;
        jz["score"] = round_to(zone.score, 6);
        nlohmann::ordered_json features;
        for (const auto& [name, value] : zone.features) features[name] = round_to(value, 6);
        jz["features"] = std::move(features);
        if (std::isinf(zone.mod))
            jz["mod"] = nullptr;  // unbounded buffer: no obstacle in the scene
        else
            jz["mod"] = round_to(zone.mod, 6);
        jz["tcd"] = round_to(zone.tcd, 6);
        out.push_back(std::move(jz));
    }
    return out;
}

std::string explain_text(const ZoneVerdict& verdict, const InferResult& inference) {
    std::ostringstream out;
    out << "zone " << verdict.zone_id << ": risk " << fixed6(verdict.risk) << ", score "
        << fixed6(verdict.score) << ", gate " << (verdict.passed_gate ? "pass" : "fail") << "\n";
    out << "rule                               p  #proofs\n";
    for (const auto& contribution : verdict.per_rule) {
        char line[96];
        std::snprintf(line, sizeof(line), "%-28s %s  %7d\n", contribution.rule_id.c_str(),
                      fixed6(contribution.p).c_str(), contribution.proof_count);
        out << line;
    }
    for (const auto& proof : verdict.proofs) {
        out << "proof [" << proof.rule_id << "] weight " << fixed6(proof.weight) << ":";
        for (const int id : proof.support) {
            const Fact* fact = inference.fact_by_id(id);
            if (!fact) continue;
            out << ' ' << (fact->negation ? "not " : "") << fact->predicate << '(';
            for (std::size_t i = 0; i < fact->args.size(); ++i) {
                if (i) out << ',';
                out << fact->args[i];
            }
            out << ")[" << fixed6(fact->prob) << ']';
        }
        out << '\n';
    }
    return out.str();
}

}  // namespace slz
