#include "slz/rules.hpp"

#include "slz/geometry.hpp"
#include "slz/mask.hpp"
#include "slz/pssg.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>
#include <utility>

namespace slz {

namespace {

enum class TokKind { Ident, Int, LParen, RParen, Comma, Implies, Dot, Or, Not, AtId, End };

struct Token {
    TokKind kind;
    std::string text;
    int value = 0;
    int line = 1;
    int col = 1;
};

class Lexer {
public:
    explicit Lexer(const std::string& src) : src_(src) {}

    std::vector<Token> run() {
        std::vector<Token> out;
        while (true) {
            skip_space_and_comments();
            if (pos_ >= src_.size()) break;
            const int line = line_, col = col_;
            const char c = src_[pos_];
            if (c == '(') { out.push_back({TokKind::LParen, "(", 0, line, col}); advance(); }
            else if (c == ')') { out.push_back({TokKind::RParen, ")", 0, line, col}); advance(); }
            else if (c == ',') { out.push_back({TokKind::Comma, ",", 0, line, col}); advance(); }
            else if (c == '.') { out.push_back({TokKind::Dot, ".", 0, line, col}); advance(); }
            else if (c == ':') {
                advance();
                if (pos_ >= src_.size() || src_[pos_] != '-')
                    throw ParseError(line, col, "expected `:-`");
                advance();
                out.push_back({TokKind::Implies, ":-", 0, line, col});
            } else if (c == '@') {
                advance();
                const std::string word = read_ident(line, col);
                if (word != "id") throw ParseError(line, col, "unknown annotation @" + word);
                out.push_back({TokKind::AtId, "@id", 0, line, col});
            } else if (std::isdigit(static_cast<unsigned char>(c))) {
                std::string num;
                while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
                    num += src_[pos_];
                    advance();
                }
                out.push_back({TokKind::Int, num, std::stoi(num), line, col});
            } else if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
                const std::string word = read_ident(line, col);
                if (word == "or") out.push_back({TokKind::Or, word, 0, line, col});
                else if (word == "not") out.push_back({TokKind::Not, word, 0, line, col});
                else out.push_back({TokKind::Ident, word, 0, line, col});
            } else if (static_cast<unsigned char>(c) == 0xE2 && pos_ + 2 < src_.size() &&
                       static_cast<unsigned char>(src_[pos_ + 1]) == 0x88 &&
                       static_cast<unsigned char>(src_[pos_ + 2]) == 0xA8) {
                // UTF-8 for the logical-or sign
                advance(); advance(); advance();
                out.push_back({TokKind::Or, "∨", 0, line, col});
            } else {
                throw ParseError(line, col, std::string("unexpected character `") + c + "`");
            }
        }
        out.push_back({TokKind::End, "", 0, line_, col_});
        return out;
    }

private:
    void advance() {
        if (src_[pos_] == '\n') { ++line_; col_ = 1; }
        else ++col_;
        ++pos_;
    }

    void skip_space_and_comments() {
        while (pos_ < src_.size()) {
            const char c = src_[pos_];
            if (c == '%') {
                while (pos_ < src_.size() && src_[pos_] != '\n') advance();
            } else if (std::isspace(static_cast<unsigned char>(c))) {
                advance();
            } else {
                break;
            }
        }
    }

    std::string read_ident(int line, int col) {
        std::string word;
        while (pos_ < src_.size() && (std::isalnum(static_cast<unsigned char>(src_[pos_])) ||
                                      src_[pos_] == '_')) {
            word += src_[pos_];
            advance();
        }
        if (word.empty()) throw ParseError(line, col, "expected identifier");
        return word;
    }

    const std::string& src_;
    std::size_t pos_ = 0;
    int line_ = 1;
    int col_ = 1;
};

class Parser {
public:
    explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

    std::vector<Rule> run() {
        std::vector<Rule> rules;
        std::string pending_id;
        while (peek().kind != TokKind::End) {
            if (peek().kind == TokKind::AtId) {
                next();
                pending_id = expect(TokKind::Ident, "rule id").text;
                continue;
            }
            Rule rule = parse_rule();
            rule.id = pending_id.empty() ? "r" + std::to_string(rules.size() + 1)
                                         : std::exchange(pending_id, {});
            rules.push_back(std::move(rule));
        }
        if (!pending_id.empty())
            throw ParseError(peek().line, peek().col, "@id without a following rule");
        return rules;
    }

private:
    const Token& peek() const { return toks_[idx_]; }
    const Token& next() { return toks_[idx_++]; }

    const Token& expect(TokKind kind, const char* what) {
        if (peek().kind != kind)
            throw ParseError(peek().line, peek().col,
                             std::string("expected ") + what + ", found `" + peek().text + "`");
        return next();
    }

    Atom parse_atom() {
        Atom atom;
        atom.predicate = expect(TokKind::Ident, "predicate name").text;
        expect(TokKind::LParen, "`(`");
        while (true) {
            if (peek().kind == TokKind::Ident) atom.args.push_back(Term::variable(next().text));
            else if (peek().kind == TokKind::Int) atom.args.push_back(Term::constant(next().value));
            else throw ParseError(peek().line, peek().col, "expected variable or integer argument");
            if (peek().kind == TokKind::Comma) { next(); continue; }
            break;
        }
        expect(TokKind::RParen, "`)`");
        return atom;
    }

    Conjunct parse_conjunct() {
        Conjunct conj;
        if (peek().kind == TokKind::Not) {
            next();
            conj.negated = true;
            conj.options.push_back(parse_atom());
            return conj;
        }
        if (peek().kind == TokKind::LParen) {
            next();
            conj.options.push_back(parse_atom());
            while (peek().kind == TokKind::Or) {
                next();
                conj.options.push_back(parse_atom());
            }
            expect(TokKind::RParen, "`)` closing the disjunction");
            return conj;
        }
        conj.options.push_back(parse_atom());
        return conj;
    }

    Rule parse_rule() {
        Rule rule;
        rule.line = peek().line;
        rule.head = parse_atom();
        expect(TokKind::Implies, "`:-`");
        rule.body.push_back(parse_conjunct());
        while (peek().kind == TokKind::Comma) {
            next();
            rule.body.push_back(parse_conjunct());
        }
        expect(TokKind::Dot, "`.` terminating the rule");
        return rule;
    }

    std::vector<Token> toks_;
    std::size_t idx_ = 0;
};

std::vector<FlatRule> expand_disjunctions(const std::vector<Rule>& rules) {
    std::vector<FlatRule> flat;
    for (std::size_t ri = 0; ri < rules.size(); ++ri) {
        const Rule& rule = rules[ri];
        std::vector<std::vector<Literal>> bodies{{}};
        for (const auto& conj : rule.body) {
            if (conj.options.size() == 1) {
                for (auto& body : bodies) body.push_back({conj.options[0], conj.negated});
            } else {
                std::vector<std::vector<Literal>> grown;
                for (const auto& body : bodies)
                    for (const auto& alt : conj.options) {
                        auto copy = body;
                        copy.push_back({alt, false});
                        grown.push_back(std::move(copy));
                    }
                bodies = std::move(grown);
            }
        }
        for (auto& body : bodies)
            flat.push_back({rule.id, static_cast<int>(ri), rule.head, std::move(body)});
    }
    return flat;
}

void check_safety(const std::vector<FlatRule>& flat) {
    for (const auto& fr : flat) {
        std::set<std::string> bound;
        for (const auto& lit : fr.body)
            if (!lit.negated)
                for (const auto& t : lit.atom.args)
                    if (t.is_var) bound.insert(t.var);
        for (const auto& t : fr.head.args)
            if (t.is_var && !bound.count(t.var))
                throw Error("rule " + fr.id + ": head variable " + t.var + " unbound");
        for (const auto& lit : fr.body)
            if (lit.negated)
                for (const auto& t : lit.atom.args)
                    if (t.is_var && !bound.count(t.var))
                        throw Error("rule " + fr.id + ": variable " + t.var +
                                    " in negated literal is unbound");
    }
}

void stratify(RulePack& pack) {
    for (const auto& rule : pack.rules) pack.idb.insert(rule.head.predicate);

    for (const auto& fr : pack.flat)
        for (const auto& lit : fr.body)
            if (lit.negated && !pack.idb.count(lit.atom.predicate))
                throw Error("rule " + fr.id + ": negation of non-derived predicate " +
                            lit.atom.predicate);

    // Fixpoint over stratum constraints; more than |idb| rounds of growth
    // means a negative cycle.
    for (const auto& p : pack.idb) pack.stratum_of[p] = 0;
    const std::size_t limit = pack.idb.size() + 1;
    for (std::size_t round = 0;; ++round) {
        bool changed = false;
        for (const auto& fr : pack.flat) {
            int& head_stratum = pack.stratum_of[fr.head.predicate];
            for (const auto& lit : fr.body) {
                if (!pack.idb.count(lit.atom.predicate)) continue;
                const int need = pack.stratum_of[lit.atom.predicate] + (lit.negated ? 1 : 0);
                if (head_stratum < need) {
                    head_stratum = need;
                    changed = true;
                }
            }
        }
        if (!changed) break;
        if (round >= limit) {
            // Pinpoint one predicate on the cycle for the error message.
            for (const auto& fr : pack.flat)
                for (const auto& lit : fr.body)
                    if (lit.negated &&
                        pack.stratum_of[lit.atom.predicate] >= static_cast<int>(limit))
                        throw Error("unstratifiable negation cycle through " +
                                    lit.atom.predicate);
            throw Error("unstratifiable negation cycle");
        }
    }

    int max_stratum = 0;
    for (const auto& [pred, s] : pack.stratum_of) max_stratum = std::max(max_stratum, s);
    pack.strata.assign(static_cast<std::size_t>(max_stratum) + 1, {});
    std::set<std::string> placed;
    for (const auto& rule : pack.rules) {
        const auto& p = rule.head.predicate;
        if (placed.insert(p).second)
            pack.strata[static_cast<std::size_t>(pack.stratum_of[p])].push_back(p);
    }
}

}  // namespace

RulePack parse_rules(const std::string& source) {
    RulePack pack;
    pack.rules = Parser(Lexer(source).run()).run();
    std::set<std::string> ids;
    for (const auto& rule : pack.rules)
        if (!ids.insert(rule.id).second) throw Error("duplicate rule id " + rule.id);
    pack.flat = expand_disjunctions(pack.rules);
    stratify(pack);  // negation structure first: a self-negation is a cycle, not a safety slip
    check_safety(pack.flat);
    return pack;
}

namespace {

std::string term_text(const Term& t) { return t.is_var ? t.var : std::to_string(t.value); }

std::string atom_text(const Atom& atom) {
    std::string out = atom.predicate + "(";
    for (std::size_t i = 0; i < atom.args.size(); ++i) {
        if (i) out += ", ";
        out += term_text(atom.args[i]);
    }
    return out + ")";
}

}  // namespace

std::string print_rules(const RulePack& pack) {
    std::ostringstream out;
    for (const auto& rule : pack.rules) {
        out << "@id " << rule.id << '\n' << atom_text(rule.head) << " :- ";
        for (std::size_t i = 0; i < rule.body.size(); ++i) {
            if (i) out << ", ";
            const auto& conj = rule.body[i];
            if (conj.options.size() > 1) {
                out << '(';
                for (std::size_t k = 0; k < conj.options.size(); ++k) {
                    if (k) out << " or ";
                    out << atom_text(conj.options[k]);
                }
                out << ')';
            } else {
                if (conj.negated) out << "not ";
                out << atom_text(conj.options[0]);
            }
        }
        out << ".\n";
    }
    return out.str();
}

std::map<std::string, int> default_catalog() {
    std::map<std::string, int> catalog;
    for (const auto& c : ClassTable::instance().all()) catalog[c.predicate] = 1;
    for (const auto& a : attribute_names()) catalog[a] = 1;
    for (const auto& r : relation_names()) catalog[r] = 2;
    for (const char* helper : {"is_large_object", "area_too_small", "rough_surface",
                               "building", "vegetation"})
        catalog[helper] = 1;
    return catalog;
}

SignatureReport predicate_signature_check(const RulePack& pack,
                                          const std::map<std::string, int>& catalog) {
    SignatureReport report;
    std::map<std::string, int> idb_arity;
    for (const auto& rule : pack.rules) {
        auto [it, fresh] = idb_arity.emplace(rule.head.predicate,
                                             static_cast<int>(rule.head.args.size()));
        if (!fresh && it->second != static_cast<int>(rule.head.args.size()))
            report.findings.push_back({SignatureFinding::Kind::ArityMismatch, rule.head.predicate,
                                       rule.id, static_cast<int>(rule.head.args.size()), it->second,
                                       "predicate " + rule.head.predicate +
                                           " defined with inconsistent arity"});
    }

    auto check_atom = [&](const Atom& atom, const std::string& rule_id) {
        const int seen = static_cast<int>(atom.args.size());
        if (auto it = idb_arity.find(atom.predicate); it != idb_arity.end()) {
            if (seen != it->second)
                report.findings.push_back({SignatureFinding::Kind::ArityMismatch, atom.predicate,
                                           rule_id, seen, it->second,
                                           "rule " + rule_id + ": " + atom.predicate +
                                               " used with arity " + std::to_string(seen) +
                                               ", defined with " + std::to_string(it->second)});
            return;
        }
        if (auto it = catalog.find(atom.predicate); it != catalog.end()) {
            if (seen != it->second)
                report.findings.push_back({SignatureFinding::Kind::ArityMismatch, atom.predicate,
                                           rule_id, seen, it->second,
                                           "rule " + rule_id + ": " + atom.predicate +
                                               " used with arity " + std::to_string(seen) +
                                               ", groundable arity is " +
                                               std::to_string(it->second)});
            return;
        }
        report.findings.push_back({SignatureFinding::Kind::Ungroundable, atom.predicate, rule_id,
                                   seen, 0,
                                   "rule " + rule_id + ": predicate " + atom.predicate +
                                       " is not groundable and not defined by any rule"});
    };

    for (const auto& rule : pack.rules)
        for (const auto& conj : rule.body)
            for (const auto& atom : conj.options) check_atom(atom, rule.id);
    return report;
}

}  // namespace slz
