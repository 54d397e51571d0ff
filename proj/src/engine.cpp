#include "slz/engine.hpp"

#include <algorithm>
#include <cmath>

namespace slz {

std::vector<Fact> ground_facts(const Pssg& pssg, double fact_floor) {
    std::vector<Fact> facts;
    const auto& table = ClassTable::instance();
    auto emit = [&](std::string pred, std::vector<int> args, double prob) {
        facts.push_back({std::move(pred), std::move(args), prob, static_cast<int>(facts.size())});
    };
    auto attr = [&](const Region& node, const char* name) {
        const auto it = node.attributes.find(name);
        return it != node.attributes.end() ? it->second : 0.0;
    };

    for (const auto& node : pssg.nodes) {
        const auto& info = table.by_id(node.class_id);
        emit(info.predicate, {node.id}, node.class_prob);
        for (const auto& name : attribute_names()) {
            if (name == "is_safe") continue;  // engine output, never an input fact
            const double p = attr(node, name.c_str());
            if (p > fact_floor) emit(name, {node.id}, p);
        }
        // Derived unary helpers the rule vocabulary expects.
        const double large = attr(node, "is_large_area");
        const double smooth = attr(node, "is_smooth_surface");
        if (large > fact_floor) emit("is_large_object", {node.id}, large);
        if (1.0 - large > fact_floor) emit("area_too_small", {node.id}, 1.0 - large);
        if (1.0 - smooth > fact_floor) emit("rough_surface", {node.id}, 1.0 - smooth);
        const auto& cname = info.name;
        if (cname == "roof" || cname == "wall" || cname == "window" || cname == "door") {
            if (node.class_prob > fact_floor) emit("building", {node.id}, node.class_prob);
        }
        if (cname == "tree") {
            if (node.class_prob > fact_floor) emit("vegetation", {node.id}, node.class_prob);
        } else if (cname == "grass") {
            const double p = node.class_prob * (1.0 - smooth);
            if (p > fact_floor) emit("vegetation", {node.id}, p);
        }
    }
    for (const auto& e : pssg.edges) emit(e.relation, {e.src, e.dst}, e.prob);
    return facts;
}

double noisy_or(std::span<const double> weights) {
    double keep = 1.0;
    for (const double w : weights) keep *= 1.0 - w;
    return 1.0 - keep;
}

double noisy_or(std::span<const Proof> proofs) {
    double keep = 1.0;
    for (const auto& proof : proofs) keep *= 1.0 - proof.weight;
    return 1.0 - keep;
}

const Fact* InferResult::fact_by_id(int id) const {
    for (const auto& f : facts)
        if (f.fact_id == id) return &f;
    for (const auto& f : synthetic)
        if (f.fact_id == id) return &f;
    return nullptr;
}

std::span<const Proof> InferResult::proofs_of(const GroundAtom& atom) const& {
    const auto it = atoms.find(atom);
    if (it == atoms.end()) return {};
    return it->second;
}

namespace {

// Proof ordering used everywhere: weight descending, then lexicographically
// smallest sorted support. Keeps top-k stable across runs and platforms.
bool proof_before(const Proof& a, const Proof& b) {
    if (a.weight != b.weight) return a.weight > b.weight;
    return a.support < b.support;
}

class Evaluator {
public:
    Evaluator(const RulePack& pack, const std::vector<Fact>& facts, int k)
        : pack_(pack), k_(std::max(1, k)) {
        result_.facts = facts;
        int max_id = -1;
        for (const auto& f : facts) max_id = std::max(max_id, f.fact_id);
        next_synthetic_id_ = max_id + 1;
        for (const auto& f : facts) {
            prob_of_[f.fact_id] = f.prob;
            if (pack_.defines(f.predicate)) continue;  // rules override grounded inputs
            Proof unit;
            unit.support = {f.fact_id};
            unit.weight = f.prob;
            insert_proof(edb_[f.predicate], f.args, std::move(unit));
        }
    }

    InferResult run() {
        for (std::size_t s = 0; s < pack_.strata.size(); ++s) {
            // Fixpoint within the stratum; handles positive recursion.
            bool changed = true;
            while (changed) {
                changed = false;
                for (const auto& fr : pack_.flat) {
                    if (pack_.stratum_of.at(fr.head.predicate) != static_cast<int>(s)) continue;
                    if (apply_rule(fr)) changed = true;
                }
            }
        }
        for (const auto& [pred, entries] : idb_)
            for (const auto& [args, proofs] : entries)
                result_.atoms[{pred, args}] = proofs;
        return std::move(result_);
    }

private:
    using AtomTable = std::map<std::vector<int>, std::vector<Proof>>;

    // Returns true if the table changed. Deduplicates by support set; ties are
    // resolved toward the earlier insertion, which keeps the first deriving
    // rule (pack order) as the attribution.
    bool insert_proof(AtomTable& table, const std::vector<int>& args, Proof proof) {
        auto& proofs = table[args];
        for (const auto& existing : proofs)
            if (existing.support == proof.support) return false;
        const auto pos = std::upper_bound(proofs.begin(), proofs.end(), proof, proof_before);
        if (proofs.size() >= static_cast<std::size_t>(k_) && pos == proofs.end()) return false;
        proofs.insert(pos, std::move(proof));
        if (proofs.size() > static_cast<std::size_t>(k_)) proofs.pop_back();
        return true;
    }

    double fact_prob(int id) const { return prob_of_.at(id); }

    Proof merge(const Proof& a, const Proof& b) const {
        Proof out;
        out.support.reserve(a.support.size() + b.support.size());
        std::set_union(a.support.begin(), a.support.end(), b.support.begin(), b.support.end(),
                       std::back_inserter(out.support));
        double w = 1.0;
        for (const int id : out.support) w *= fact_prob(id);
        out.weight = w;
        return out;
    }

    // All current proofs for `predicate` ground atoms matching `args` under
    // the binding; yields (full args, proofs).
    template <typename Fn>
    void for_matches(const std::string& predicate, const std::vector<Term>& args,
                     const std::map<std::string, int>& binding, Fn&& fn) const {
        auto scan = [&](const AtomTable& table) {
            // Fully bound pattern: direct lookup.
            std::vector<int> exact;
            exact.reserve(args.size());
            bool all_bound = true;
            for (const auto& t : args) {
                if (!t.is_var) { exact.push_back(t.value); continue; }
                const auto it = binding.find(t.var);
                if (it == binding.end()) { all_bound = false; break; }
                exact.push_back(it->second);
            }
            if (all_bound) {
                const auto it = table.find(exact);
                if (it != table.end()) fn(it->first, it->second);
                return;
            }
            for (const auto& [ground, proofs] : table) {
                std::map<std::string, int> local;  // repeated-variable consistency
                bool match = true;
                for (std::size_t i = 0; i < args.size() && match; ++i) {
                    const auto& t = args[i];
                    if (!t.is_var) {
                        match = t.value == ground[i];
                    } else if (const auto it = binding.find(t.var); it != binding.end()) {
                        match = it->second == ground[i];
                    } else if (const auto it2 = local.find(t.var); it2 != local.end()) {
                        match = it2->second == ground[i];
                    } else {
                        local[t.var] = ground[i];
                    }
                }
                if (match) fn(ground, proofs);
            }
        };
        if (const auto it = edb_.find(predicate); it != edb_.end()) scan(it->second);
        if (const auto it = idb_.find(predicate); it != idb_.end()) scan(it->second);
    }

    // Negation factor for a closed lower-stratum atom, memoized as a synthetic
    // fact so proof weights stay pure support products.
    int negation_fact(const std::string& predicate, const std::vector<int>& args) {
        const GroundAtom key{predicate, args};
        if (const auto it = negation_ids_.find(key); it != negation_ids_.end()) return it->second;
        double risk = 0.0;
        if (const auto it = idb_.find(predicate); it != idb_.end())
            if (const auto entry = it->second.find(args); entry != it->second.end())
                risk = noisy_or(std::span<const Proof>(entry->second));
        Fact syn;
        syn.predicate = predicate;
        syn.args = args;
        syn.prob = 1.0 - risk;
        syn.fact_id = next_synthetic_id_++;
        syn.negation = true;
        prob_of_[syn.fact_id] = syn.prob;
        negation_ids_[key] = syn.fact_id;
        result_.synthetic.push_back(std::move(syn));
        return negation_ids_[key];
    }

    bool apply_rule(const FlatRule& fr) {
        // Negated literals run last so their arguments are bound.
        std::vector<const Literal*> order;
        for (const auto& lit : fr.body)
            if (!lit.negated) order.push_back(&lit);
        for (const auto& lit : fr.body)
            if (lit.negated) order.push_back(&lit);

        bool changed = false;
        std::map<std::string, int> binding;
        std::vector<Proof> partial{Proof{}};  // empty support, weight 1

        auto emit_head = [&](const std::vector<Proof>& completed) {
            std::vector<int> head_args;
            head_args.reserve(fr.head.args.size());
            for (const auto& t : fr.head.args)
                head_args.push_back(t.is_var ? binding.at(t.var) : t.value);
            for (const auto& p : completed) {
                Proof with_rule = p;
                with_rule.rule_id = fr.id;
                with_rule.rule_index = fr.rule_index;
                if (insert_proof(idb_[fr.head.predicate], head_args, std::move(with_rule)))
                    changed = true;
            }
        };

        // Depth-first join over the literal order; the proof frontier is the
        // cross product of chosen sub-proofs, deduplicated supports included.
        auto join = [&](auto&& self, std::size_t idx, std::vector<Proof> frontier) -> void {
            if (idx == order.size()) {
                emit_head(frontier);
                return;
            }
            const Literal& lit = *order[idx];
            if (lit.negated) {
                std::vector<int> ground;
                ground.reserve(lit.atom.args.size());
                for (const auto& t : lit.atom.args)
                    ground.push_back(t.is_var ? binding.at(t.var) : t.value);
                const int syn_id = negation_fact(lit.atom.predicate, ground);
                Proof neg;
                neg.support = {syn_id};
                neg.weight = prob_of_.at(syn_id);
                std::vector<Proof> grown;
                grown.reserve(frontier.size());
                for (const auto& p : frontier) grown.push_back(merge(p, neg));
                self(self, idx + 1, std::move(grown));
                return;
            }
            for_matches(lit.atom.predicate, lit.atom.args, binding,
                        [&](const std::vector<int>& ground, const std::vector<Proof>& proofs) {
                            std::vector<std::string> bound_here;
                            for (std::size_t i = 0; i < lit.atom.args.size(); ++i) {
                                const auto& t = lit.atom.args[i];
                                if (t.is_var && !binding.count(t.var)) {
                                    binding[t.var] = ground[i];
                                    bound_here.push_back(t.var);
                                }
                            }
                            std::vector<Proof> grown;
                            grown.reserve(frontier.size() * proofs.size());
                            for (const auto& p : frontier)
                                for (const auto& q : proofs) grown.push_back(merge(p, q));
                            self(self, idx + 1, std::move(grown));
                            for (const auto& var : bound_here) binding.erase(var);
                        });
        };
        join(join, 0, std::move(partial));
        return changed;
    }

    const RulePack& pack_;
    const int k_;
    std::map<std::string, AtomTable> edb_;
    std::map<std::string, AtomTable> idb_;
    std::map<int, double> prob_of_;
    std::map<GroundAtom, int> negation_ids_;
    int next_synthetic_id_ = 0;
    InferResult result_;
};

}  // namespace

InferResult infer_topk(const RulePack& pack, const std::vector<Fact>& facts, int k) {
    return Evaluator(pack, facts, k).run();
}

namespace {

std::vector<ZoneVerdict> verdicts_from_result(const RulePack& pack, const InferResult& result,
                                              const EngineParams& params) {
    for (const char* required : {"landable_area", "hazard", "safe"})
        if (!pack.defines(required))
            throw Error(std::string("rule pack does not define required predicate ") + required);

    std::vector<ZoneVerdict> verdicts;
    for (const auto& [atom, landable_proofs] : result.atoms) {
        if (atom.predicate != "landable_area" || atom.args.size() != 1) continue;
        if (landable_proofs.empty()) continue;
        ZoneVerdict v;
        v.zone_id = atom.args[0];
        const auto hazard_proofs = result.proofs_of({"hazard", atom.args});
        v.proofs.assign(hazard_proofs.begin(), hazard_proofs.end());
        v.risk = noisy_or(hazard_proofs);
        v.score = 1.0 - v.risk;
        v.passed_gate = v.score >= params.tau_mission;
        for (const auto& rule : pack.rules) {
            if (rule.head.predicate != "hazard") continue;
            RuleContribution contribution;
            contribution.rule_id = rule.id;
            std::vector<double> weights;
            for (const auto& proof : hazard_proofs)
                if (proof.rule_id == rule.id) weights.push_back(proof.weight);
            contribution.p = noisy_or(weights);
            contribution.proof_count = static_cast<int>(weights.size());
            v.per_rule.push_back(std::move(contribution));
        }
        verdicts.push_back(std::move(v));
    }
    std::sort(verdicts.begin(), verdicts.end(),
              [](const ZoneVerdict& a, const ZoneVerdict& b) { return a.zone_id < b.zone_id; });
    return verdicts;
}

}  // namespace

std::vector<ZoneVerdict> verdict_from_facts(const RulePack& pack, const std::vector<Fact>& facts,
                                            const EngineParams& params, InferResult* result_out) {
    InferResult result = infer_topk(pack, facts, params.k);
    auto verdicts = verdicts_from_result(pack, result, params);
    if (result_out) *result_out = std::move(result);
    return verdicts;
}

std::vector<ZoneVerdict> verdict(const Pssg& pssg, const RulePack& pack, const EngineParams& params,
                                 InferResult* result_out) {
    return verdict_from_facts(pack, ground_facts(pssg, params.fact_floor), params, result_out);
}

std::vector<ZoneVerdict> verdict_deterministic(const Pssg& pssg, const RulePack& pack,
                                               const EngineParams& params, InferResult* result_out) {
    std::vector<Fact> booleans;
    for (auto fact : ground_facts(pssg, params.fact_floor)) {
        if (fact.prob < params.tau_fact) continue;
        fact.prob = 1.0;
        fact.fact_id = static_cast<int>(booleans.size());
        booleans.push_back(std::move(fact));
    }
    return verdict_from_facts(pack, booleans, params, result_out);
}

}  // namespace slz
