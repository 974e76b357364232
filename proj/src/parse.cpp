#include "teamlogic/parse.hpp"

#include <cctype>
#include <set>

namespace teamlogic {

namespace {

enum class Tok { Ident, Reserved, Number, Punct, End };

struct Token {
    Tok kind;
    std::string text;
    size_t pos;
};

const std::set<std::string> kKeywords = {"exists", "forall", "and", "or", "ior", "orp", "store", "rel",
                                         "dep", "sub", "excl", "eqext", "sube", "EX"};

std::vector<Token> tokenize(std::string_view s) {
    std::vector<Token> out;
    size_t i = 0;
    while (i < s.size()) {
        unsigned char c = s[i];
        if (std::isspace(c)) {
            ++i;
            continue;
        }
        size_t start = i;
        if (std::isalpha(c)) {
            while (i < s.size() && (std::isalnum(static_cast<unsigned char>(s[i])) || s[i] == '_')) ++i;
            out.push_back({Tok::Ident, std::string(s.substr(start, i - start)), start});
        } else if (std::isdigit(c)) {
            while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
            out.push_back({Tok::Number, std::string(s.substr(start, i - start)), start});
        } else if (c == '$') {
            ++i;
            while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
            if (i == start + 1) throw ParseError("'$' must be followed by digits", start);
            out.push_back({Tok::Reserved, std::string(s.substr(start, i - start)), start});
        } else if (c == '!' && i + 1 < s.size() && s[i + 1] == '=') {
            out.push_back({Tok::Punct, "!=", start});
            i += 2;
        } else if (c == '-' && i + 1 < s.size() && s[i + 1] == '>') {
            out.push_back({Tok::Punct, "->", start});
            i += 2;
        } else if (std::string_view("()[]{},;.:=!").find(static_cast<char>(c)) != std::string_view::npos) {
            out.push_back({Tok::Punct, std::string(1, static_cast<char>(c)), start});
            ++i;
        } else {
            throw ParseError(std::string("unexpected character '") + static_cast<char>(c) + "'", start);
        }
    }
    out.push_back({Tok::End, "", s.size()});
    return out;
}

bool is_variable_name(const std::string& n) {
    return !n.empty() && std::islower(static_cast<unsigned char>(n[0])) && !kKeywords.count(n);
}

class Parser {
public:
    Parser(std::string_view text, const Vocabulary& vocab, ParseOptions opts, bool eso)
        : toks_(tokenize(text)), vocab_(vocab), opts_(opts), eso_(eso) {}

    FormulaPtr formula_to_end() {
        auto f = parse_or();
        expect_end();
        return f;
    }

    EsoFormula eso_to_end() {
        EsoFormula out;
        while (is_ident("EX")) {
            next();
            auto name = ident("relation variable");
            if (!std::isupper(static_cast<unsigned char>(name[0])))
                throw ParseError("relation variable must start with an uppercase letter", prev().pos);
            expect(":");
            if (peek().kind != Tok::Number) throw ParseError("expected arity", peek().pos);
            int k = std::stoi(next().text);
            if (k < 1) throw ParseError("relation variable arity must be >= 1", prev().pos);
            expect(".");
            if (vocab_.has_relation(name)) throw ParseError("relation variable " + name + " clashes with the vocabulary", prev().pos);
            if (relvars_.count(name)) throw ParseError("relation variable " + name + " quantified twice", prev().pos);
            relvars_[name] = k;
            out.quantified.emplace_back(name, k);
        }
        out.matrix = parse_or();
        expect_end();
        for (const auto& [name, k] : inferred_rel_)
            if (!relvars_.count(name)) out.free_relvars.emplace_back(name, k);
        validate_eso(out, vocab_);
        return out;
    }

private:
    const Token& peek(size_t ahead = 0) const {
        size_t i = pos_ + ahead;
        return i < toks_.size() ? toks_[i] : toks_.back();
    }
    const Token& prev() const { return toks_[pos_ - 1]; }
    const Token& next() { return toks_[pos_ < toks_.size() - 1 ? pos_++ : pos_]; }

    bool is_punct(const char* p, size_t ahead = 0) const {
        const auto& t = peek(ahead);
        return t.kind == Tok::Punct && t.text == p;
    }
    bool is_ident(const char* p, size_t ahead = 0) const {
        const auto& t = peek(ahead);
        return t.kind == Tok::Ident && t.text == p;
    }

    void expect(const char* p) {
        if (!is_punct(p)) throw ParseError(std::string("expected '") + p + "'" + found(), peek().pos);
        next();
    }

    void expect_keyword(const char* k) {
        if (!is_ident(k)) throw ParseError(std::string("expected '") + k + "'" + found(), peek().pos);
        next();
    }

    void expect_end() {
        if (peek().kind != Tok::End) throw ParseError("unexpected trailing input" + found(), peek().pos);
    }

    std::string found() const {
        const auto& t = peek();
        return t.kind == Tok::End ? ", found end of input" : ", found '" + t.text + "'";
    }

    std::string ident(const char* what) {
        if (peek().kind != Tok::Ident) throw ParseError(std::string("expected ") + what + found(), peek().pos);
        return next().text;
    }

    std::string variable() {
        const auto& t = peek();
        if (t.kind == Tok::Reserved) {
            if (!opts_.allow_reserved) throw ParseError("names of the form $n are reserved", t.pos);
            return next().text;
        }
        if (t.kind != Tok::Ident || !is_variable_name(t.text) || vocab_.has_constant(t.text) ||
            vocab_.has_function(t.text))
            throw ParseError("expected a variable" + found(), t.pos);
        return next().text;
    }

    std::vector<std::string> variable_list() {
        expect("[");
        std::vector<std::string> out{variable()};
        while (is_punct(",")) {
            next();
            out.push_back(variable());
        }
        expect("]");
        return out;
    }

    Tuple term_list(const char* open, const char* close) {
        expect(open);
        Tuple out{term()};
        while (is_punct(",")) {
            next();
            out.push_back(term());
        }
        expect(close);
        return out;
    }

    int symbol_arity(std::map<std::string, int>& table, const std::string& name, int k, size_t pos) {
        auto [it, fresh] = table.emplace(name, k);
        if (!fresh && it->second != k) throw ParseError("arity mismatch for " + name, pos);
        return k;
    }

    Term term() {
        const auto& t = peek();
        if (t.kind == Tok::Reserved) return Term::var(variable());
        if (t.kind != Tok::Ident) throw ParseError("expected a term" + found(), t.pos);
        if (kKeywords.count(t.text)) throw ParseError("keyword '" + t.text + "' cannot be used as a term", t.pos);
        size_t pos = t.pos;
        std::string name = next().text;
        if (is_punct("(")) {
            bool known = vocab_.has_function(name);
            if (!known && !(vocab_.open && std::islower(static_cast<unsigned char>(name[0]))))
                throw ParseError("unknown function symbol " + name, pos);
            Tuple args = term_list("(", ")");
            if (known) {
                if (vocab_.functions.at(name) != static_cast<int>(args.size()))
                    throw ParseError("arity mismatch for function " + name, pos);
            } else {
                symbol_arity(inferred_fun_, name, static_cast<int>(args.size()), pos);
            }
            return Term::app(name, std::move(args));
        }
        if (vocab_.has_constant(name)) return Term::constant(name);
        if (vocab_.has_function(name)) throw ParseError("function " + name + " needs arguments", pos);
        if (!is_variable_name(name)) throw ParseError("unknown symbol " + name, pos);
        return Term::var(name);
    }

    // Is the identifier at the cursor, followed by '(', a relation symbol?
    bool relation_ahead() const {
        const auto& t = peek();
        if (t.kind != Tok::Ident || !is_punct("(", 1) || kKeywords.count(t.text)) return false;
        if (vocab_.has_relation(t.text) || relvars_.count(t.text)) return true;
        if (vocab_.has_function(t.text)) return false;
        bool upper = std::isupper(static_cast<unsigned char>(t.text[0]));
        return upper && (vocab_.open || eso_);
    }

    FormulaPtr relation_atom(bool negated) {
        size_t pos = peek().pos;
        std::string name = next().text;
        Tuple args = term_list("(", ")");
        int k = static_cast<int>(args.size());
        if (vocab_.has_relation(name)) {
            if (vocab_.relations.at(name) != k) throw ParseError("arity mismatch for relation " + name, pos);
        } else if (relvars_.count(name)) {
            if (relvars_.at(name) != k) throw ParseError("arity mismatch for relation variable " + name, pos);
        } else {
            symbol_arity(inferred_rel_, name, k, pos);
        }
        return negated ? nrel(name, std::move(args)) : rel(name, std::move(args));
    }

    FormulaPtr parse_or() {
        auto left = parse_and();
        for (;;) {
            if (is_ident("or")) {
                next();
                left = disj(left, parse_and());
            } else if (is_ident("ior")) {
                next();
                left = ior(left, parse_and());
            } else if (is_ident("orp")) {
                next();
                expect("{");
                std::vector<Tuple> preserved{term_list("[", "]")};
                while (is_punct(";")) {
                    next();
                    preserved.push_back(term_list("[", "]"));
                }
                expect("}");
                left = tvp_or(left, parse_and(), std::move(preserved));
            } else {
                return left;
            }
        }
    }

    FormulaPtr parse_and() {
        auto left = parse_unary();
        while (is_ident("and")) {
            next();
            left = conj(left, parse_unary());
        }
        return left;
    }

    FormulaPtr bounded_quantifier() {
        size_t pos = peek().pos;
        expect("(");
        bool ex = is_ident("exists");
        next();
        auto xs = variable_list();
        Op op;
        if (is_ident("sub")) op = ex ? Op::EIncQ : Op::UIncQ;
        else if (is_ident("excl")) op = ex ? Op::EExcQ : Op::UExcQ;
        else if (is_ident("sube") && !ex) op = Op::UIncQExc;
        else throw ParseError(ex ? "expected 'sub' or 'excl'" : "expected 'sub', 'excl' or 'sube'", peek().pos);
        next();
        Tuple t = term_list("[", "]");
        expect(")");
        if (xs.size() != t.size()) throw ParseError("quantified variables and bounding terms differ in number", pos);
        try {
            return quantifier(op, std::move(xs), std::move(t), parse_or());
        } catch (const ParseError&) {
            throw;
        } catch (const FormulaError& e) {
            throw ParseError(e.what(), pos);
        }
    }

    FormulaPtr parse_unary() {
        const auto& t = peek();
        size_t pos = t.pos;
        if (t.kind == Tok::Ident) {
            if (t.text == "EX") throw ParseError("relation quantifier inside the matrix (must be prenex)", pos);
            if (t.text == "exists" || t.text == "forall") {
                bool ex = t.text == "exists";
                next();
                auto x = variable();
                expect(".");
                auto body = parse_or();
                return ex ? exists(x, body) : forall(x, body);
            }
            if (t.text == "store") {
                next();
                Tuple src = term_list("[", "]");
                expect("->");
                auto dst = variable_list();
                expect(".");
                auto body = parse_or();
                try {
                    return store(std::move(src), std::move(dst), body);
                } catch (const FormulaError& e) {
                    throw ParseError(e.what(), pos);
                }
            }
            if (t.text == "rel") {
                next();
                auto y = variable();
                expect("(");
                auto body = parse_or();
                expect(")");
                return relativized(body, y);
            }
            if (t.text == "dep") {
                next();
                expect("(");
                auto arg = term();
                expect(")");
                return dep(arg);
            }
            if (relation_ahead()) return relation_atom(false);
        }
        if (is_punct("!")) {
            next();
            if (relation_ahead()) return relation_atom(true);
            if (!is_punct("(")) throw ParseError("negation applies only to atomic formulas", pos);
            next();
            auto inner = parse_or();
            expect(")");
            if (inner->op == Op::Eq) return neq(inner->lhs[0], inner->rhs[0]);
            if (inner->op == Op::Rel) return nrel(inner->name, inner->lhs);
            throw ParseError("negation applies only to atomic formulas (formulas are in negation normal form)", pos);
        }
        if (is_punct("(")) {
            if ((is_ident("exists", 1) || is_ident("forall", 1)) && is_punct("[", 2)) return bounded_quantifier();
            next();
            auto inner = parse_or();
            expect(")");
            return inner;
        }
        if (is_punct("[")) {
            Tuple t1 = term_list("[", "]");
            Op op;
            if (is_ident("sub")) op = Op::Inc;
            else if (is_ident("excl")) op = Op::Exc;
            else if (is_ident("eqext")) op = Op::EquiExt;
            else throw ParseError("expected 'sub', 'excl' or 'eqext'" + found(), peek().pos);
            next();
            Tuple t2 = term_list("[", "]");
            if (t1.size() != t2.size()) throw ParseError("atom tuples differ in length", pos);
            if (op == Op::Inc) return inc(std::move(t1), std::move(t2));
            if (op == Op::Exc) return exc(std::move(t1), std::move(t2));
            return equiext(std::move(t1), std::move(t2));
        }
        if (peek().kind == Tok::End) throw ParseError("unexpected end of input", pos);
        Term lhs = term();
        if (is_punct("=")) {
            next();
            return eq(lhs, term());
        }
        if (is_punct("!=")) {
            next();
            return neq(lhs, term());
        }
        throw ParseError("expected '=' or '!='" + found(), peek().pos);
    }

    std::vector<Token> toks_;
    size_t pos_ = 0;
    const Vocabulary& vocab_;
    ParseOptions opts_;
    bool eso_;
    std::map<std::string, int> relvars_;
    std::map<std::string, int> inferred_rel_;
    std::map<std::string, int> inferred_fun_;
};

}  // namespace

FormulaPtr parse_formula(std::string_view text, const Vocabulary& vocab, ParseOptions opts) {
    Parser p(text, vocab, opts, false);
    return p.formula_to_end();
}

EsoFormula parse_eso(std::string_view text, const Vocabulary& vocab, ParseOptions opts) {
    Parser p(text, vocab, opts, true);
    try {
        return p.eso_to_end();
    } catch (const ParseError&) {
        throw;
    } catch (const FormulaError& e) {
        throw ParseError(e.what(), 0);
    }
}

}  // namespace teamlogic
