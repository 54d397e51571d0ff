#pragma once

// Independent reference implementations used to check the engine:
// a world-enumeration probability oracle over a naive boolean evaluator,
// plus random program generators. None of this reuses the proof machinery.

#include "slz/engine.hpp"

#include <random>
#include <set>
#include <string>
#include <vector>

namespace oracles {

// Naive bottom-up boolean evaluation of the positive fragment: ground every
// rule over the constants seen in the facts, iterate to fixpoint.
inline bool holds_in_world(const slz::RulePack& pack, const std::vector<slz::Fact>& facts,
                           const std::vector<bool>& present, const slz::GroundAtom& query) {
    std::set<std::pair<std::string, std::vector<int>>> truths;
    std::set<int> constants;
    for (std::size_t i = 0; i < facts.size(); ++i) {
        for (const int a : facts[i].args) constants.insert(a);
        if (present[i]) truths.insert({facts[i].predicate, facts[i].args});
    }
    if (constants.empty()) constants.insert(0);

    bool changed = true;
    while (changed) {
        changed = false;
        for (const auto& rule : pack.flat) {
            std::vector<std::string> vars;
            for (const auto& lit : rule.body)
                for (const auto& t : lit.atom.args)
                    if (t.is_var && std::find(vars.begin(), vars.end(), t.var) == vars.end())
                        vars.push_back(t.var);

            std::vector<int> domain(constants.begin(), constants.end());
            std::vector<std::size_t> pick(vars.size(), 0);
            while (true) {
                auto value_of = [&](const slz::Term& t) {
                    if (!t.is_var) return t.value;
                    const auto at = std::find(vars.begin(), vars.end(), t.var) - vars.begin();
                    return domain[pick[static_cast<std::size_t>(at)]];
                };
                bool body_ok = true;
                for (const auto& lit : rule.body) {
                    std::vector<int> args;
                    for (const auto& t : lit.atom.args) args.push_back(value_of(t));
                    const bool in = truths.count({lit.atom.predicate, args}) > 0;
                    if (lit.negated ? in : !in) {
                        body_ok = false;
                        break;
                    }
                }
                if (body_ok) {
                    std::vector<int> head_args;
                    for (const auto& t : rule.head.args) head_args.push_back(value_of(t));
                    if (truths.insert({rule.head.predicate, head_args}).second) changed = true;
                }
                std::size_t d = 0;
                while (d < pick.size() && ++pick[d] == domain.size()) pick[d++] = 0;
                if (d == pick.size()) break;
                if (vars.empty()) break;
            }
        }
    }
    return truths.count({query.predicate, query.args}) > 0;
}

// Exact query probability by summing over all 2^n fact worlds.
inline double exact_probability(const slz::RulePack& pack, const std::vector<slz::Fact>& facts,
                                const slz::GroundAtom& query) {
    const std::size_t n = facts.size();
    double total = 0.0;
    for (std::size_t world = 0; world < (1ull << n); ++world) {
        std::vector<bool> present(n);
        double prob = 1.0;
        for (std::size_t i = 0; i < n; ++i) {
            present[i] = (world >> i) & 1;
            prob *= present[i] ? facts[i].prob : 1.0 - facts[i].prob;
        }
        if (prob == 0.0) continue;
        if (holds_in_world(pack, facts, present, query)) total += prob;
    }
    return total;
}

struct GeneratedProgram {
    slz::RulePack pack;
    std::vector<slz::Fact> facts;
    int proof_count = 0;  // number of distinct hazard derivations built in
};

// Programs whose hazard proofs have pairwise-disjoint supports: every rule
// consumes its own private facts, optionally through a private helper.
inline GeneratedProgram disjoint_program(std::mt19937& rng) {
    std::uniform_real_distribution<double> unit(0.05, 0.95);
    GeneratedProgram out;
    std::string text;
    int fact_serial = 0;
    const int rules = 1 + static_cast<int>(rng() % 4);
    int budget = 12;
    for (int r = 0; r < rules && budget > 0; ++r) {
        const int body = 1 + static_cast<int>(rng() % std::min(3, budget));
        std::vector<std::string> preds;
        for (int b = 0; b < body; ++b) {
            preds.push_back("f" + std::to_string(fact_serial));
            out.facts.push_back({preds.back(), {1}, unit(rng), fact_serial});
            ++fact_serial;
            --budget;
        }
        const bool via_helper = body >= 2 && rng() % 2 == 0;
        if (via_helper) {
            std::string helper = "mid" + std::to_string(r);
            text += helper + "(x) :- " + preds[0] + "(x), " + preds[1] + "(x).\n";
            std::string rule = "hazard(x) :- " + helper + "(x)";
            for (int b = 2; b < body; ++b) rule += ", " + preds[static_cast<std::size_t>(b)] + "(x)";
            text += rule + ".\n";
        } else {
            std::string rule = "hazard(x) :- " + preds[0] + "(x)";
            for (int b = 1; b < body; ++b) rule += ", " + preds[static_cast<std::size_t>(b)] + "(x)";
            text += rule + ".\n";
        }
        ++out.proof_count;
    }
    out.pack = slz::parse_rules(text);
    return out;
}

// Programs with shared facts across hazard rules (overlapping supports), a
// landable base and the gate rule; sub-derivations stay single-proof so the
// hazard atom is the only place top-k truncation bites.
inline GeneratedProgram overlapping_program(std::mt19937& rng) {
    std::uniform_real_distribution<double> unit(0.05, 0.95);
    GeneratedProgram out;
    const int pool = 4 + static_cast<int>(rng() % 6);
    for (int i = 0; i < pool; ++i)
        out.facts.push_back({"f" + std::to_string(i), {1}, unit(rng), i});
    out.facts.push_back({"site", {1}, 1.0, pool});

    std::string text = "landable_area(x) :- site(x).\n";
    const int helpers = static_cast<int>(rng() % 3);
    for (int h = 0; h < helpers; ++h) {
        const int a = static_cast<int>(rng() % pool), b = static_cast<int>(rng() % pool);
        text += "mid" + std::to_string(h) + "(x) :- f" + std::to_string(a) + "(x), f" +
                std::to_string(b) + "(x).\n";
    }
    const int rules = 1 + static_cast<int>(rng() % 5);
    for (int r = 0; r < rules; ++r) {
        std::string rule = "hazard(x) :- landable_area(x)";
        const int body = 1 + static_cast<int>(rng() % 3);
        for (int b = 0; b < body; ++b) {
            if (helpers > 0 && rng() % 4 == 0)
                rule += ", mid" + std::to_string(rng() % helpers) + "(x)";
            else
                rule += ", f" + std::to_string(rng() % pool) + "(x)";
        }
        text += rule + ".\n";
        ++out.proof_count;
    }
    text += "safe(x) :- landable_area(x), not hazard(x).\n";
    out.pack = slz::parse_rules(text);
    return out;
}

}  // namespace oracles
