#include "teamlogic/print.hpp"

namespace teamlogic {

std::string pretty_print(const Term& t) {
    if (t.kind != Term::Kind::App) return t.name;
    std::string out = t.name + "(";
    for (size_t i = 0; i < t.args.size(); ++i) {
        if (i) out += ",";
        out += pretty_print(t.args[i]);
    }
    return out + ")";
}

std::string pretty_print(const Tuple& t) {
    std::string out = "[";
    for (size_t i = 0; i < t.size(); ++i) {
        if (i) out += ",";
        out += pretty_print(t[i]);
    }
    return out + "]";
}

namespace {

std::string args(const Tuple& t) {
    std::string out = "(";
    for (size_t i = 0; i < t.size(); ++i) {
        if (i) out += ",";
        out += pretty_print(t[i]);
    }
    return out + ")";
}

std::string vars(const std::vector<std::string>& xs) {
    std::string out = "[";
    for (size_t i = 0; i < xs.size(); ++i) {
        if (i) out += ",";
        out += xs[i];
    }
    return out + "]";
}

// 0: quantifier forms (their bodies run to the right), 1: or-family, 2: and,
// 3: atomic.
int level(Op op) {
    switch (op) {
        case Op::Or: case Op::IOr: case Op::TvpOr: return 1;
        case Op::And: return 2;
        default: return is_quantifier_form(op) ? 0 : 3;
    }
}

std::string print(const Formula& f, int need);

std::string bounded_head(const Formula& f) {
    const char* q = (f.op == Op::EIncQ || f.op == Op::EExcQ) ? "exists" : "forall";
    const char* rel = "sub";
    if (f.op == Op::EExcQ || f.op == Op::UExcQ) rel = "excl";
    if (f.op == Op::UIncQExc) rel = "sube";
    return std::string("(") + q + " " + vars(f.vars) + " " + rel + " " + pretty_print(f.lhs) + ") ";
}

std::string bare(const Formula& f) {
    switch (f.op) {
        case Op::Eq: return pretty_print(f.lhs[0]) + " = " + pretty_print(f.rhs[0]);
        case Op::NegEq: return pretty_print(f.lhs[0]) + " != " + pretty_print(f.rhs[0]);
        case Op::Rel: return f.name + args(f.lhs);
        case Op::NegRel: return "!" + f.name + args(f.lhs);
        case Op::Inc: return pretty_print(f.lhs) + " sub " + pretty_print(f.rhs);
        case Op::Exc: return pretty_print(f.lhs) + " excl " + pretty_print(f.rhs);
        case Op::EquiExt: return pretty_print(f.lhs) + " eqext " + pretty_print(f.rhs);
        case Op::And: return print(*f.a, 2) + " and " + print(*f.b, 3);
        case Op::Or: return print(*f.a, 1) + " or " + print(*f.b, 2);
        case Op::IOr: return print(*f.a, 1) + " ior " + print(*f.b, 2);
        case Op::TvpOr: {
            std::string mid = " orp{";
            for (size_t i = 0; i < f.preserved.size(); ++i) {
                if (i) mid += ";";
                mid += pretty_print(f.preserved[i]);
            }
            return print(*f.a, 1) + mid + "} " + print(*f.b, 2);
        }
        case Op::Exists: return "exists " + f.vars[0] + ". " + print(*f.a, 0);
        case Op::Forall: return "forall " + f.vars[0] + ". " + print(*f.a, 0);
        case Op::Dep: return "dep(" + pretty_print(f.lhs[0]) + ")";
        case Op::Store: return "store " + pretty_print(f.lhs) + " -> " + vars(f.vars) + ". " + print(*f.a, 0);
        case Op::EIncQ: case Op::EExcQ: case Op::UIncQ: case Op::UExcQ: case Op::UIncQExc:
            return bounded_head(f) + print(*f.a, 0);
        case Op::Relativized: return "rel " + f.name + " (" + print(*f.a, 0) + ")";
    }
    return "?";
}

std::string print(const Formula& f, int need) {
    std::string s = bare(f);
    return level(f.op) < need ? "(" + s + ")" : s;
}

}  // namespace

std::string pretty_print(const Formula& f) { return print(f, 0); }
std::string pretty_print(const FormulaPtr& f) { return print(*f, 0); }

std::string pretty_print(const EsoFormula& phi) {
    std::string out;
    for (const auto& [p, k] : phi.quantified) out += "EX " + p + ":" + std::to_string(k) + " . ";
    return out + pretty_print(*phi.matrix);
}

}  // namespace teamlogic
