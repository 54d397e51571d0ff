#pragma once

#include "slz/pssg.hpp"
#include "slz/rules.hpp"

#include <compare>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace slz {

struct Fact {
    std::string predicate;
    std::vector<int> args;
    double prob = 1.0;
    int fact_id = 0;
    bool negation = false;  // synthetic `not q(a)` factor created during inference

    friend bool operator==(const Fact&, const Fact&) = default;
};

struct GroundAtom {
    std::string predicate;
    std::vector<int> args;
    auto operator<=>(const GroundAtom&) const = default;
};

// A minimal witness: deduplicated supporting fact ids. The weight is always
// the product of the support probabilities, so a proof can be re-checked from
// the emitted provenance alone.
struct Proof {
    std::vector<int> support;  // sorted, unique fact ids
    double weight = 1.0;
    std::string rule_id;       // rule that derived it (first in pack order on ties)
    int rule_index = -1;
};

struct EngineParams {
    int k = 3;
    double tau_mission = 0.7;
    double fact_floor = 0.01;
    bool deterministic = false;
    double tau_fact = 0.5;  // boolean threshold for deterministic mode
};

// Facts grounded from one scene graph: a class fact per node, attribute facts
// above the floor (is_safe never grounds), derived unary helpers, one fact per
// edge. Fact ids are the emission order, deterministic for a given graph.
std::vector<Fact> ground_facts(const Pssg& pssg, double fact_floor);

struct InferResult {
    std::map<GroundAtom, std::vector<Proof>> atoms;  // derived atoms -> top-k proofs
    std::vector<Fact> facts;                         // the input facts
    std::vector<Fact> synthetic;                     // negation factors, ids after inputs
    const Fact* fact_by_id(int id) const;
    std::span<const Proof> proofs_of(const GroundAtom& atom) const&;
    std::span<const Proof> proofs_of(const GroundAtom& atom) const&& = delete;
};

// Stratified semi-naive evaluation keeping the k highest-weight proofs per
// derived atom. Ties break on the lexicographically smallest sorted support.
// Input facts whose predicate the pack defines are ignored (rules override).
InferResult infer_topk(const RulePack& pack, const std::vector<Fact>& facts, int k);

// 1 - prod(1 - w); identity 0, order-independent.
double noisy_or(std::span<const double> weights);
double noisy_or(std::span<const Proof> proofs);

struct RuleContribution {
    std::string rule_id;
    double p = 0.0;      // noisy-OR over this rule's retained proofs
    int proof_count = 0;
};

struct ZoneVerdict {
    int zone_id = 0;
    double risk = 0.0;       // noisy-OR over hazard's top-k proofs
    double score = 1.0;      // 1 - risk
    bool passed_gate = false;
    std::vector<RuleContribution> per_rule;  // every hazard rule, pack order, zero rows kept
    std::vector<Proof> proofs;               // hazard's top-k
};

// One verdict per region with landable_area support, ordered by zone id.
// Requires the pack to define landable_area, hazard and safe.
std::vector<ZoneVerdict> verdict_from_facts(const RulePack& pack, const std::vector<Fact>& facts,
                                            const EngineParams& params, InferResult* result_out = nullptr);

std::vector<ZoneVerdict> verdict(const Pssg& pssg, const RulePack& pack, const EngineParams& params,
                                 InferResult* result_out = nullptr);

// DetFOL mode: facts at or above tau_fact become boolean, classical stratified
// evaluation, scores in {0,1}.
std::vector<ZoneVerdict> verdict_deterministic(const Pssg& pssg, const RulePack& pack,
                                               const EngineParams& params,
                                               InferResult* result_out = nullptr);

}  // namespace slz
