#include "teamlogic/desugar.hpp"

#include <algorithm>
#include <cctype>
#include <unordered_map>

namespace teamlogic {

bool is_reserved_name(const std::string& name) {
    if (name.size() < 2 || name[0] != '$') return false;
    return std::all_of(name.begin() + 1, name.end(), [](unsigned char c) { return std::isdigit(c); });
}

void FreshSupply::avoid(const std::string& name) {
    if (!is_reserved_name(name)) return;
    int n = std::stoi(name.substr(1));
    if (n >= counter_) counter_ = n + 1;
}

void FreshSupply::avoid(const Formula& f) {
    for (const auto& v : all_variables(f)) avoid(v);
}

std::string FreshSupply::next() { return "$" + std::to_string(counter_++); }

std::vector<std::string> FreshSupply::next(size_t k) {
    std::vector<std::string> out;
    for (size_t i = 0; i < k; ++i) out.push_back(next());
    return out;
}

namespace {

Term v(const std::string& n) { return Term::var(n); }

Tuple repeat(const std::string& n, size_t k) { return Tuple(k, Term::var(n)); }

FormulaPtr ior_expansion(const FormulaPtr& a, const FormulaPtr& b, FreshSupply& fresh) {
    auto z1 = fresh.next(), z2 = fresh.next();
    auto one = forall(z1, forall(z2, eq(v(z1), v(z2))));
    auto split = disj(conj(eq(v(z1), v(z2)), a), conj(neq(v(z1), v(z2)), b));
    return disj(conj(one, disj(a, b)),
                exists(z1, exists(z2, conj(conj(dep(v(z1)), dep(v(z2))), split))));
}

FormulaPtr theta(const Tuple& t, const std::string& y, const std::string& cl, const std::string& cr,
                 const std::string& c, FreshSupply& fresh) {
    auto z1 = fresh.next(t.size()), z2 = fresh.next(t.size());
    auto cs = repeat(c, t.size());
    auto left = conj(conj(eq(v(y), v(cl)), tuple_eq(var_tuple(z1), t)), tuple_eq(var_tuple(z2), cs));
    auto right = conj(conj(eq(v(y), v(cr)), tuple_eq(var_tuple(z1), cs)), tuple_eq(var_tuple(z2), t));
    auto body = conj(conj(disj(left, right), inc(t, var_tuple(z1))), inc(t, var_tuple(z2)));
    return exists_all(z1, exists_all(z2, body));
}

FormulaPtr tvp_expansion(const Formula& f, FreshSupply& fresh) {
    auto cl = fresh.next(), cr = fresh.next(), y = fresh.next();
    FormulaPtr inner = disj(conj(eq(v(y), v(cl)), f.a), conj(eq(v(y), v(cr)), f.b));
    for (const auto& t : f.preserved)
        inner = conj(inner, conj(theta(t, y, cl, cr, cl, fresh), theta(t, y, cl, cr, cr, fresh)));
    auto guard = conj(conj(dep(v(cl)), dep(v(cr))), neq(v(cl), v(cr)));
    return ior(ior(f.a, f.b), exists(cl, exists(cr, conj(guard, exists(y, inner)))));
}

}  // namespace

FormulaPtr expand_once(const FormulaPtr& fp, FreshSupply& fresh) {
    const Formula& f = *fp;
    switch (f.op) {
        case Op::EquiExt:
            return conj(inc(f.lhs, f.rhs), inc(f.rhs, f.lhs));
        case Op::Dep: {
            auto x = fresh.next();
            return forall(x, disj(eq(v(x), f.lhs[0]), exc({v(x)}, f.lhs)));
        }
        case Op::IOr:
            return ior_expansion(f.a, f.b, fresh);
        case Op::Store:
            return exists_all(f.vars, conj(tuple_eq(var_tuple(f.vars), f.lhs), f.a));
        case Op::EIncQ: {
            auto u = fresh.next(f.vars.size());
            return store(f.lhs, u, exists_all(f.vars, conj(inc(var_tuple(f.vars), var_tuple(u)), f.a)));
        }
        case Op::EExcQ: {
            auto u = fresh.next(f.vars.size());
            return store(f.lhs, u, exists_all(f.vars, conj(exc(var_tuple(f.vars), var_tuple(u)), f.a)));
        }
        case Op::UIncQ: {
            size_t k = f.vars.size();
            auto u = fresh.next(k), ys = fresh.next(k), zs = fresh.next(k);
            auto xt = var_tuple(f.vars), ut = var_tuple(u);
            auto first = forall_all(f.vars, conj(inc(xt, ut), f.a));
            auto body = disj(conj(tuple_eq(xt, var_tuple(ys)), f.a), tuple_eq(xt, var_tuple(zs)));
            auto second = forall_all(f.vars, quantifier(Op::EIncQ, ys, ut, quantifier(Op::EExcQ, zs, ut, body)));
            return store(f.lhs, u, ior(first, second));
        }
        case Op::UExcQ: {
            size_t k = f.vars.size();
            auto u = fresh.next(k), ys = fresh.next(k), zs = fresh.next(k);
            auto xt = var_tuple(f.vars), ut = var_tuple(u);
            auto first = forall_all(f.vars, inc(xt, ut));
            auto body = disj(tuple_eq(xt, var_tuple(ys)), conj(tuple_eq(xt, var_tuple(zs)), f.a));
            auto second = forall_all(f.vars, quantifier(Op::EIncQ, ys, ut, quantifier(Op::EExcQ, zs, ut, body)));
            return store(f.lhs, u, ior(first, second));
        }
        case Op::UIncQExc: {
            size_t k = f.vars.size();
            auto u = fresh.next(k), ys = fresh.next(k);
            auto body = disj(tuple_eq(var_tuple(ys), var_tuple(f.vars)), f.a);
            auto second = store(f.lhs, u, forall_all(f.vars, quantifier(Op::EExcQ, ys, var_tuple(u), body)));
            return ior(forall_all(f.vars, f.a), second);
        }
        case Op::TvpOr:
            return tvp_expansion(f, fresh);
        case Op::Relativized:
            return relativize(f.a, f.name, fresh);
        default:
            return fp;
    }
}

namespace {

class Desugarer {
public:
    explicit Desugarer(FreshSupply& fresh) : fresh_(fresh) {}

    FormulaPtr run(const FormulaPtr& f) {
        auto it = memo_.find(f.get());
        if (it != memo_.end()) return it->second;
        FormulaPtr out = rewrite(f);
        keep_.push_back(f);
        memo_.emplace(f.get(), out);
        return out;
    }

private:
    FormulaPtr rewrite(const FormulaPtr& f) {
        if (is_literal(f->op) || f->op == Op::Inc || f->op == Op::Exc) return f;
        if (f->op == Op::Relativized) return run(relativize(f->a, f->name, fresh_));
        FormulaPtr a = f->a ? run(f->a) : nullptr;
        FormulaPtr b = f->b ? run(f->b) : nullptr;
        FormulaPtr node = f;
        if (a != f->a || b != f->b) {
            Formula copy = *f;
            copy.a = a;
            copy.b = b;
            node = std::make_shared<const Formula>(std::move(copy));
        }
        if (!is_sugar(node->op)) return node;
        if (node->op == Op::Store) {
            auto tv = tuple_variables(node->lhs);
            for (const auto& u : node->vars)
                if (std::find(tv.begin(), tv.end(), u) != tv.end())
                    throw FormulaError("store: target variable " + u + " occurs in the stored terms");
        }
        return run(expand_once(node, fresh_));
    }

    FreshSupply& fresh_;
    std::unordered_map<const Formula*, FormulaPtr> memo_;
    std::vector<FormulaPtr> keep_;   // pins keys so addresses are not reused
};

std::vector<Tuple> with_y(const std::vector<Tuple>& ts, const std::string& y) {
    auto out = ts;
    out.push_back({Term::var(y)});
    return out;
}

FormulaPtr relativize_rec(const FormulaPtr& fp, const std::string& y, FreshSupply& fresh) {
    const Formula& f = *fp;
    auto r = [&](const FormulaPtr& g) { return relativize_rec(g, y, fresh); };
    switch (f.op) {
        case Op::Eq: case Op::NegEq: case Op::Rel: case Op::NegRel:
        case Op::Inc: case Op::Exc: case Op::EquiExt: case Op::Dep:
            return fp;
        case Op::And:
            return conj(r(f.a), r(f.b));
        case Op::Or:
            return tvp_or(r(f.a), r(f.b), {{Term::var(y)}});
        case Op::IOr:
            return ior(r(f.a), r(f.b));
        case Op::TvpOr:
            return tvp_or(r(f.a), r(f.b), with_y(f.preserved, y));
        case Op::Exists:
            return quantifier(Op::EIncQ, f.vars, {Term::var(y)}, r(f.a));
        case Op::Forall:
            return quantifier(Op::UIncQ, f.vars, {Term::var(y)}, r(f.a));
        case Op::Store:
            return store(f.lhs, f.vars, r(f.a));
        case Op::EIncQ:
        case Op::UIncQ:
            return quantifier(f.op, f.vars, f.lhs, r(f.a));
        case Op::UIncQExc:
            // Same truth condition as UIncQ; the body stops being EXC after
            // relativization, so the general quantifier is used.
            return quantifier(Op::UIncQ, f.vars, f.lhs, r(f.a));
        case Op::EExcQ:
        case Op::UExcQ:
            return r(expand_once(fp, fresh));
        case Op::Relativized:
            return r(relativize(f.a, f.name, fresh));
    }
    return fp;
}

}  // namespace

FormulaPtr desugar(const FormulaPtr& f, FreshSupply& fresh) {
    fresh.avoid(*f);
    Desugarer d(fresh);
    return d.run(f);
}

FormulaPtr relativize(const FormulaPtr& f, const std::string& y, FreshSupply& fresh) {
    auto vs = all_variables(*f);
    if (std::find(vs.begin(), vs.end(), y) != vs.end())
        throw FormulaError("relativization variable " + y + " occurs in the formula");
    fresh.avoid(*f);
    fresh.avoid(y);
    return relativize_rec(f, y, fresh);
}

Tuple pad_tuple(const Tuple& t, size_t k) {
    if (t.size() > k) throw FormulaError("atom arity " + std::to_string(t.size()) + " exceeds " + std::to_string(k));
    Tuple out = t;
    while (out.size() < k) out.push_back(t.back());
    return out;
}

FormulaPtr pad_atoms_to_arity(const FormulaPtr& f, int k) {
    if (k < 1) throw FormulaError("padding width must be >= 1");
    if (is_atom(f->op)) {
        if (f->lhs.size() == static_cast<size_t>(k)) return f;
        Formula copy = *f;
        copy.lhs = pad_tuple(f->lhs, k);
        copy.rhs = pad_tuple(f->rhs, k);
        return std::make_shared<const Formula>(std::move(copy));
    }
    FormulaPtr a = f->a ? pad_atoms_to_arity(f->a, k) : nullptr;
    FormulaPtr b = f->b ? pad_atoms_to_arity(f->b, k) : nullptr;
    if (a == f->a && b == f->b) return f;
    Formula copy = *f;
    copy.a = a;
    copy.b = b;
    return std::make_shared<const Formula>(std::move(copy));
}

}  // namespace teamlogic
