#include "teamlogic/formula.hpp"

#include <algorithm>

#include "teamlogic/desugar.hpp"

namespace teamlogic {

void Vocabulary::validate() const {
    for (const auto& [n, k] : relations) {
        if (k < 1) throw FormulaError("relation " + n + " must have arity >= 1");
        if (functions.count(n) || constants.count(n))
            throw FormulaError("symbol " + n + " declared twice");
    }
    for (const auto& [n, k] : functions) {
        if (k < 1) throw FormulaError("function " + n + " must have arity >= 1");
        if (constants.count(n)) throw FormulaError("symbol " + n + " declared twice");
    }
}

Tuple var_tuple(const std::vector<std::string>& names) {
    Tuple t;
    for (const auto& n : names) t.push_back(Term::var(n));
    return t;
}

namespace {

void add_unique(std::vector<std::string>& out, const std::string& v) {
    if (std::find(out.begin(), out.end(), v) == out.end()) out.push_back(v);
}

void append_unique(std::vector<std::string>& out, const std::vector<std::string>& vs) {
    for (const auto& v : vs) add_unique(out, v);
}

bool contains(const std::vector<std::string>& vs, const std::string& v) {
    return std::find(vs.begin(), vs.end(), v) != vs.end();
}

FormulaPtr make(Formula f) { return std::make_shared<const Formula>(std::move(f)); }

void check_same_length(const Tuple& a, const Tuple& b, const char* what) {
    if (a.size() != b.size() || a.empty())
        throw FormulaError(std::string(what) + ": tuples must be nonempty and of equal length");
}

void check_distinct(const std::vector<std::string>& xs, const char* what) {
    if (xs.empty()) throw FormulaError(std::string(what) + ": empty variable tuple");
    for (size_t i = 0; i < xs.size(); ++i)
        for (size_t j = i + 1; j < xs.size(); ++j)
            if (xs[i] == xs[j]) throw FormulaError(std::string(what) + ": repeated variable " + xs[i]);
}

}  // namespace

void term_variables(const Term& t, std::vector<std::string>& out) {
    if (t.kind == Term::Kind::Var) {
        add_unique(out, t.name);
        return;
    }
    for (const auto& a : t.args) term_variables(a, out);
}

std::vector<std::string> tuple_variables(const Tuple& t) {
    std::vector<std::string> out;
    for (const auto& x : t) term_variables(x, out);
    return out;
}

const char* op_name(Op op) {
    switch (op) {
        case Op::Eq: return "Eq";
        case Op::NegEq: return "NegEq";
        case Op::Rel: return "Rel";
        case Op::NegRel: return "NegRel";
        case Op::Inc: return "Inc";
        case Op::Exc: return "Exc";
        case Op::EquiExt: return "EquiExt";
        case Op::And: return "And";
        case Op::Or: return "Or";
        case Op::Exists: return "Exists";
        case Op::Forall: return "Forall";
        case Op::Dep: return "Dep";
        case Op::IOr: return "IOr";
        case Op::Store: return "Store";
        case Op::EIncQ: return "EIncQ";
        case Op::EExcQ: return "EExcQ";
        case Op::UIncQ: return "UIncQ";
        case Op::UExcQ: return "UExcQ";
        case Op::UIncQExc: return "UIncQExc";
        case Op::TvpOr: return "TvpOr";
        case Op::Relativized: return "Relativized";
    }
    return "?";
}

FormulaPtr eq(Term t1, Term t2) {
    Formula f;
    f.op = Op::Eq;
    f.lhs = {std::move(t1)};
    f.rhs = {std::move(t2)};
    return make(std::move(f));
}

FormulaPtr neq(Term t1, Term t2) {
    Formula f;
    f.op = Op::NegEq;
    f.lhs = {std::move(t1)};
    f.rhs = {std::move(t2)};
    return make(std::move(f));
}

FormulaPtr rel(std::string r, Tuple args) {
    if (args.empty()) throw FormulaError("relation atom " + r + " needs arguments");
    Formula f;
    f.op = Op::Rel;
    f.name = std::move(r);
    f.lhs = std::move(args);
    return make(std::move(f));
}

FormulaPtr nrel(std::string r, Tuple args) {
    if (args.empty()) throw FormulaError("relation atom " + r + " needs arguments");
    Formula f;
    f.op = Op::NegRel;
    f.name = std::move(r);
    f.lhs = std::move(args);
    return make(std::move(f));
}

static FormulaPtr atom(Op op, Tuple t1, Tuple t2, const char* what) {
    check_same_length(t1, t2, what);
    Formula f;
    f.op = op;
    f.lhs = std::move(t1);
    f.rhs = std::move(t2);
    return make(std::move(f));
}

FormulaPtr inc(Tuple t1, Tuple t2) { return atom(Op::Inc, std::move(t1), std::move(t2), "inclusion atom"); }
FormulaPtr exc(Tuple t1, Tuple t2) { return atom(Op::Exc, std::move(t1), std::move(t2), "exclusion atom"); }
FormulaPtr equiext(Tuple t1, Tuple t2) {
    return atom(Op::EquiExt, std::move(t1), std::move(t2), "equiextension atom");
}

static FormulaPtr binary(Op op, FormulaPtr a, FormulaPtr b) {
    if (!a || !b) throw FormulaError(std::string(op_name(op)) + ": missing operand");
    Formula f;
    f.op = op;
    f.a = std::move(a);
    f.b = std::move(b);
    return make(std::move(f));
}

FormulaPtr conj(FormulaPtr a, FormulaPtr b) { return binary(Op::And, std::move(a), std::move(b)); }
FormulaPtr disj(FormulaPtr a, FormulaPtr b) { return binary(Op::Or, std::move(a), std::move(b)); }
FormulaPtr ior(FormulaPtr a, FormulaPtr b) { return binary(Op::IOr, std::move(a), std::move(b)); }

FormulaPtr tvp_or(FormulaPtr a, FormulaPtr b, std::vector<Tuple> preserved) {
    for (const auto& t : preserved)
        if (t.empty()) throw FormulaError("TVP disjunction: empty preserved tuple");
    Formula f;
    f.op = Op::TvpOr;
    f.a = std::move(a);
    f.b = std::move(b);
    f.preserved = std::move(preserved);
    if (!f.a || !f.b) throw FormulaError("TVP disjunction: missing operand");
    return make(std::move(f));
}

static FormulaPtr unary_quantifier(Op op, std::string x, FormulaPtr body) {
    if (!body) throw FormulaError("quantifier without body");
    Formula f;
    f.op = op;
    f.vars = {std::move(x)};
    f.a = std::move(body);
    return make(std::move(f));
}

FormulaPtr exists(std::string x, FormulaPtr body) { return unary_quantifier(Op::Exists, std::move(x), std::move(body)); }
FormulaPtr forall(std::string x, FormulaPtr body) { return unary_quantifier(Op::Forall, std::move(x), std::move(body)); }

FormulaPtr dep(Term t) {
    Formula f;
    f.op = Op::Dep;
    f.lhs = {std::move(t)};
    return make(std::move(f));
}

FormulaPtr store(Tuple t, std::vector<std::string> u, FormulaPtr body) {
    if (!body) throw FormulaError("store without body");
    check_distinct(u, "store");
    if (t.size() != u.size()) throw FormulaError("store: source and target tuples differ in length");
    auto tv = tuple_variables(t);
    for (const auto& v : u)
        if (contains(tv, v)) throw FormulaError("store: target variable " + v + " occurs in the stored terms");
    Formula f;
    f.op = Op::Store;
    f.lhs = std::move(t);
    f.vars = std::move(u);
    f.a = std::move(body);
    return make(std::move(f));
}

FormulaPtr quantifier(Op op, std::vector<std::string> xs, Tuple t, FormulaPtr body) {
    if (op != Op::EIncQ && op != Op::EExcQ && op != Op::UIncQ && op != Op::UExcQ && op != Op::UIncQExc)
        throw FormulaError("not an inclusion/exclusion quantifier");
    if (!body) throw FormulaError("quantifier without body");
    check_distinct(xs, "quantifier");
    if (xs.size() != t.size()) throw FormulaError("quantifier: variable and term tuples differ in length");
    Formula f;
    f.op = op;
    f.vars = std::move(xs);
    f.lhs = std::move(t);
    f.a = std::move(body);
    return make(std::move(f));
}

FormulaPtr relativized(FormulaPtr body, std::string y) {
    if (!body) throw FormulaError("relativization without body");
    Formula f;
    f.op = Op::Relativized;
    f.name = std::move(y);
    f.a = std::move(body);
    return make(std::move(f));
}

FormulaPtr tuple_eq(const Tuple& t, const Tuple& u) {
    if (t.size() != u.size()) throw FormulaError("tuple equality: length mismatch");
    FormulaPtr out;
    for (size_t i = 0; i < t.size(); ++i) {
        auto e = eq(t[i], u[i]);
        out = out ? conj(out, e) : e;
    }
    return out;
}

FormulaPtr conj_all(const std::vector<FormulaPtr>& fs) {
    if (fs.empty()) throw FormulaError("empty conjunction");
    FormulaPtr out = fs[0];
    for (size_t i = 1; i < fs.size(); ++i) out = conj(out, fs[i]);
    return out;
}

FormulaPtr disj_all(const std::vector<FormulaPtr>& fs) {
    if (fs.empty()) throw FormulaError("empty disjunction");
    FormulaPtr out = fs[0];
    for (size_t i = 1; i < fs.size(); ++i) out = disj(out, fs[i]);
    return out;
}

FormulaPtr exists_all(const std::vector<std::string>& xs, FormulaPtr body) {
    for (auto it = xs.rbegin(); it != xs.rend(); ++it) body = exists(*it, body);
    return body;
}

FormulaPtr forall_all(const std::vector<std::string>& xs, FormulaPtr body) {
    for (auto it = xs.rbegin(); it != xs.rend(); ++it) body = forall(*it, body);
    return body;
}

bool structurally_equal(const Formula& x, const Formula& y) {
    if (&x == &y) return true;
    if (x.op != y.op || x.name != y.name || x.lhs != y.lhs || x.rhs != y.rhs || x.vars != y.vars ||
        x.preserved != y.preserved)
        return false;
    if (bool(x.a) != bool(y.a) || bool(x.b) != bool(y.b)) return false;
    if (x.a && !structurally_equal(*x.a, *y.a)) return false;
    if (x.b && !structurally_equal(*x.b, *y.b)) return false;
    return true;
}

bool is_literal(Op op) { return op == Op::Eq || op == Op::NegEq || op == Op::Rel || op == Op::NegRel; }
bool is_atom(Op op) { return op == Op::Inc || op == Op::Exc || op == Op::EquiExt; }

bool is_sugar(Op op) {
    return !(is_literal(op) || op == Op::Inc || op == Op::Exc || op == Op::And || op == Op::Or ||
             op == Op::Exists || op == Op::Forall);
}

bool is_quantifier_form(Op op) {
    switch (op) {
        case Op::Exists: case Op::Forall: case Op::Store: case Op::EIncQ: case Op::EExcQ:
        case Op::UIncQ: case Op::UExcQ: case Op::UIncQExc:
            return true;
        default:
            return false;
    }
}

bool is_core(const Formula& f) {
    if (is_sugar(f.op)) return false;
    if (f.a && !is_core(*f.a)) return false;
    if (f.b && !is_core(*f.b)) return false;
    return true;
}

bool is_first_order(const Formula& f) {
    if (f.op == Op::Inc || f.op == Op::Exc) return false;
    if (is_sugar(f.op)) return false;
    if (f.a && !is_first_order(*f.a)) return false;
    if (f.b && !is_first_order(*f.b)) return false;
    return true;
}

std::vector<std::string> free_variables(const Formula& f) {
    std::vector<std::string> out;
    switch (f.op) {
        case Op::Eq: case Op::NegEq: case Op::Rel: case Op::NegRel:
        case Op::Inc: case Op::Exc: case Op::EquiExt: case Op::Dep:
            for (const auto& t : f.lhs) term_variables(t, out);
            for (const auto& t : f.rhs) term_variables(t, out);
            return out;
        case Op::And: case Op::Or: case Op::IOr:
            out = free_variables(*f.a);
            append_unique(out, free_variables(*f.b));
            return out;
        case Op::TvpOr:
            out = free_variables(*f.a);
            append_unique(out, free_variables(*f.b));
            for (const auto& t : f.preserved) append_unique(out, tuple_variables(t));
            return out;
        case Op::Exists: case Op::Forall:
            for (const auto& v : free_variables(*f.a))
                if (v != f.vars[0]) out.push_back(v);
            return out;
        case Op::Store: case Op::EIncQ: case Op::EExcQ: case Op::UIncQ: case Op::UExcQ: case Op::UIncQExc:
            out = tuple_variables(f.lhs);
            for (const auto& v : free_variables(*f.a))
                if (!contains(f.vars, v)) add_unique(out, v);
            return out;
        case Op::Relativized:
            out.push_back(f.name);
            append_unique(out, free_variables(*f.a));
            return out;
    }
    return out;
}

static void collect_all_variables(const Formula& f, std::vector<std::string>& out) {
    for (const auto& t : f.lhs) term_variables(t, out);
    for (const auto& t : f.rhs) term_variables(t, out);
    for (const auto& p : f.preserved)
        for (const auto& t : p) term_variables(t, out);
    append_unique(out, f.vars);
    if (f.op == Op::Relativized) add_unique(out, f.name);
    if (f.a) collect_all_variables(*f.a, out);
    if (f.b) collect_all_variables(*f.b, out);
}

std::vector<std::string> all_variables(const Formula& f) {
    std::vector<std::string> out;
    collect_all_variables(f, out);
    return out;
}

static void collect_relations(const Formula& f, std::set<std::string>& out) {
    if (f.op == Op::Rel || f.op == Op::NegRel) out.insert(f.name);
    if (f.a) collect_relations(*f.a, out);
    if (f.b) collect_relations(*f.b, out);
}

std::set<std::string> relation_symbols(const Formula& f) {
    std::set<std::string> out;
    collect_relations(f, out);
    return out;
}

std::string ArityProfile::describe() const {
    switch (fragment) {
        case Fragment::FO: return "FO";
        case Fragment::INC: return "INC[" + std::to_string(max_inc) + "]";
        case Fragment::EXC: return "EXC[" + std::to_string(max_exc) + "]";
        case Fragment::INEX: return "INEX[" + std::to_string(k()) + "]";
    }
    return "?";
}

static void scan_atoms(const Formula& f, ArityProfile& p) {
    int n = static_cast<int>(f.lhs.size());
    if (f.op == Op::Inc || f.op == Op::EquiExt) p.max_inc = std::max(p.max_inc, n);
    if (f.op == Op::Exc) p.max_exc = std::max(p.max_exc, n);
    if (f.a) scan_atoms(*f.a, p);
    if (f.b) scan_atoms(*f.b, p);
}

static void set_fragment(ArityProfile& p) {
    if (p.max_inc == 0 && p.max_exc == 0) p.fragment = Fragment::FO;
    else if (p.max_exc == 0) p.fragment = Fragment::INC;
    else if (p.max_inc == 0) p.fragment = Fragment::EXC;
    else p.fragment = Fragment::INEX;
}

ArityProfile raw_arity_profile(const Formula& f) {
    ArityProfile p;
    scan_atoms(f, p);
    set_fragment(p);
    return p;
}

ArityProfiles arity_profile(const FormulaPtr& f) {
    ArityProfiles out;
    out.raw = raw_arity_profile(*f);
    if (is_core(*f)) {
        out.desugared = out.raw;
    } else {
        FreshSupply fresh(*f);
        out.desugared = raw_arity_profile(*desugar(f, fresh));
    }
    return out;
}

static void check_matrix_relations(const Formula& f, std::map<std::string, int>& arities) {
    if (f.op == Op::Rel || f.op == Op::NegRel) {
        int k = static_cast<int>(f.lhs.size());
        auto [it, fresh] = arities.emplace(f.name, k);
        if (!fresh && it->second != k) throw FormulaError("relation " + f.name + " used with two arities");
    }
    if (f.a) check_matrix_relations(*f.a, arities);
    if (f.b) check_matrix_relations(*f.b, arities);
}

void validate_eso(const EsoFormula& phi, const Vocabulary& vocab) {
    if (!phi.matrix) throw FormulaError("ESO formula without matrix");
    if (!is_first_order(*phi.matrix)) throw FormulaError("ESO matrix must be first-order");
    if (!free_variables(*phi.matrix).empty()) throw FormulaError("ESO formula has free first-order variables");
    std::map<std::string, int> declared;
    for (const auto& [p, k] : phi.quantified) {
        if (k < 1) throw FormulaError("relation variable " + p + " needs arity >= 1");
        if (vocab.has_relation(p)) throw FormulaError("relation variable " + p + " clashes with the vocabulary");
        if (!declared.emplace(p, k).second) throw FormulaError("relation variable " + p + " quantified twice");
    }
    for (const auto& [p, k] : phi.free_relvars) {
        if (declared.count(p)) throw FormulaError("relation variable " + p + " is both free and quantified");
        if (vocab.has_relation(p)) throw FormulaError("relation variable " + p + " clashes with the vocabulary");
        declared.emplace(p, k);
    }
    std::map<std::string, int> used;
    check_matrix_relations(*phi.matrix, used);
    for (const auto& [r, k] : used) {
        auto v = vocab.relations.find(r);
        if (v != vocab.relations.end()) {
            if (v->second != k) throw FormulaError("arity mismatch for relation " + r);
            continue;
        }
        auto d = declared.find(r);
        if (d == declared.end()) throw FormulaError("undeclared relation variable " + r);
        if (d->second != k) throw FormulaError("arity mismatch for relation variable " + r);
    }
}

}  // namespace teamlogic
