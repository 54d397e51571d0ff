#pragma once

#include "slz/types.hpp"

#include <map>
#include <set>
#include <string>
#include <vector>

namespace slz {

struct Term {
    bool is_var = true;
    std::string var;  // identifier, when is_var
    int value = 0;    // region-id constant, otherwise

    static Term variable(std::string name) { return {true, std::move(name), 0}; }
    static Term constant(int v) { return {false, {}, v}; }
    friend bool operator==(const Term&, const Term&) = default;
};

struct Atom {
    std::string predicate;
    std::vector<Term> args;
    friend bool operator==(const Atom&, const Atom&) = default;
};

struct Literal {
    Atom atom;
    bool negated = false;
    friend bool operator==(const Literal&, const Literal&) = default;
};

// One body conjunct: a (possibly negated) atom, or a top-level disjunction of
// plain atoms. options.size() > 1 implies negated == false.
struct Conjunct {
    std::vector<Atom> options;
    bool negated = false;
    friend bool operator==(const Conjunct&, const Conjunct&) = default;
};

struct Rule {
    std::string id;  // from an @id annotation, else auto "r<N>"
    Atom head;
    std::vector<Conjunct> body;
    int line = 0;
    friend bool operator==(const Rule& a, const Rule& b) {
        return a.id == b.id && a.head == b.head && a.body == b.body;
    }
};

// Disjunction-free form the evaluator runs on; rule_index points back to the
// source rule so proofs keep their original attribution.
struct FlatRule {
    std::string id;
    int rule_index = 0;
    Atom head;
    std::vector<Literal> body;
};

struct RulePack {
    std::vector<Rule> rules;
    std::vector<FlatRule> flat;
    std::set<std::string> idb;                     // rule-defined predicates
    std::map<std::string, int> stratum_of;         // idb predicate -> stratum
    std::vector<std::vector<std::string>> strata;  // first-definition order inside each

    bool defines(const std::string& predicate) const { return idb.count(predicate) > 0; }
    friend bool operator==(const RulePack& a, const RulePack& b) { return a.rules == b.rules; }
};

// Parses and validates a rule program. Accepts `∨` or `or` for disjunction,
// `not` for negation, `%` comments, `.` terminators and `@id` annotations.
// Throws ParseError on syntax errors and Error on semantic ones (unbound head
// variable, negation of a non-derived predicate, unstratifiable negation).
RulePack parse_rules(const std::string& source);

// Canonical text form; parse_rules(print_rules(pack)) == pack.
std::string print_rules(const RulePack& pack);

struct SignatureFinding {
    enum class Kind { ArityMismatch, Ungroundable };
    Kind kind;
    std::string predicate;
    std::string rule_id;
    int arity_seen = 0;
    int arity_expected = 0;
    std::string message;
};

struct SignatureReport {
    std::vector<SignatureFinding> findings;
    bool ok() const { return findings.empty(); }
};

// Groundable predicates with arities: 19 classes, 8 attributes, 10 relations,
// and the derived unary helpers the grounder materializes.
std::map<std::string, int> default_catalog();

SignatureReport predicate_signature_check(const RulePack& pack,
                                          const std::map<std::string, int>& catalog);

}  // namespace slz
