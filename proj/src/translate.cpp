#include "teamlogic/translate.hpp"

#include <algorithm>
#include <memory>
#include <set>
#include <unordered_map>

#include "teamlogic/desugar.hpp"

namespace teamlogic {

const char* mutation_name(Mutation m) {
    switch (m) {
        case Mutation::None: return "none";
        case Mutation::DropNegatedExclusionSide: return "drop-negated-exclusion-side";
        case Mutation::DropWitnessEquation: return "drop-witness-equation";
        case Mutation::DropWitnessGuard: return "drop-witness-guard";
        case Mutation::DropTeamGuard: return "drop-team-guard";
        case Mutation::SwapDisjunctRouting: return "swap-disjunct-routing";
    }
    return "?";
}

std::vector<Mutation> all_mutations() {
    return {Mutation::DropNegatedExclusionSide, Mutation::DropWitnessEquation, Mutation::DropWitnessGuard,
            Mutation::DropTeamGuard, Mutation::SwapDisjunctRouting};
}

TranslationContext inex_context(int k, std::vector<std::string> free_tuple) {
    TranslationContext ctx;
    ctx.k = k;
    ctx.free_tuple = std::move(free_tuple);
    ctx.exc_prefix = "P";
    ctx.inc_prefix = "Q";
    return ctx;
}

namespace {

// Tree view of a formula with preorder indices for one kind of atom, so that
// occurrences are numbered even when subformulas are shared.
struct Ann {
    FormulaPtr f;
    int idx = -1;
    int lo = 0, hi = 0;   // occurrence indices inside this subtree: [lo, hi)
    std::unique_ptr<Ann> a, b;
};

std::unique_ptr<Ann> annotate(const FormulaPtr& f, Op kind, int& counter) {
    auto n = std::make_unique<Ann>();
    n->f = f;
    n->lo = counter;
    if (f->op == kind) n->idx = counter++;
    if (f->a) n->a = annotate(f->a, kind, counter);
    if (f->b) n->b = annotate(f->b, kind, counter);
    n->hi = counter;
    return n;
}

bool contains(const Ann& n, int i) { return n.lo <= i && i < n.hi; }

FormulaPtr prepare(const FormulaPtr& phi, int k) {
    if (k < 1) throw TranslationError("arity bound k must be >= 1");
    FormulaPtr f = phi;
    if (!is_core(*f)) {
        FreshSupply fresh(*f);
        f = desugar(f, fresh);
    }
    ArityProfile p = raw_arity_profile(*f);
    if (p.k() > k)
        throw TranslationError("formula is " + p.describe() + ", above the arity bound " + std::to_string(k));
    return pad_atoms_to_arity(f, k);
}

void check_free(const FormulaPtr& f, const TranslationContext& ctx) {
    std::set<std::string> ys(ctx.free_tuple.begin(), ctx.free_tuple.end());
    if (ys.size() != ctx.free_tuple.size()) throw TranslationError("free tuple variables must be distinct");
    for (const auto& v : free_variables(*f))
        if (!ys.count(v)) throw TranslationError("free variable " + v + " is not in the free tuple");
}

std::string relvar(const std::string& prefix, int i) { return prefix + std::to_string(i + 1); }

void check_relvar_names(const FormulaPtr& f, const TranslationContext& ctx, const std::string& prefix, int n) {
    auto used = relation_symbols(*f);
    for (int i = 0; i < n; ++i) {
        std::string r = relvar(prefix, i);
        if (used.count(r) || r == ctx.free_relvar)
            throw TranslationError("relation variable name " + r + " is already taken");
    }
    if (!ctx.free_tuple.empty() && used.count(ctx.free_relvar))
        throw TranslationError("relation variable name " + ctx.free_relvar + " is already taken");
}

std::vector<std::string> fresh_names(const std::string& base, int k, std::set<std::string>& taken) {
    std::vector<std::string> out;
    for (int j = 0; j < k; ++j) {
        std::string n = k == 1 ? base : base + std::to_string(j + 1);
        while (taken.count(n)) n += "_";
        taken.insert(n);
        out.push_back(n);
    }
    return out;
}

FormulaPtr rebuild(const FormulaPtr& f, FormulaPtr a, FormulaPtr b) {
    switch (f->op) {
        case Op::And: return conj(a, b);
        case Op::Or: return disj(a, b);
        case Op::Exists: return exists(f->vars[0], a);
        case Op::Forall: return forall(f->vars[0], a);
        default: throw TranslationError(std::string("unexpected node ") + op_name(f->op));
    }
}

// Exclusion stage: (t̄₁|t̄₂)ᵢ ↦ Pᵢt̄₁ ∧ ¬Pᵢt̄₂; inclusions are kept when
// `keep_inc`.
FormulaPtr exc_prime(const Ann& n, const TranslationContext& ctx, bool keep_inc) {
    const FormulaPtr& f = n.f;
    if (is_literal(f->op)) return f;
    if (f->op == Op::Exc) {
        std::string p = relvar(ctx.exc_prefix, n.idx);
        if (ctx.mutation == Mutation::DropNegatedExclusionSide) return rel(p, f->lhs);
        return conj(rel(p, f->lhs), nrel(p, f->rhs));
    }
    if (f->op == Op::Inc) {
        if (keep_inc) return f;
        throw TranslationError("inclusion atom in an EXC formula");
    }
    return rebuild(f, exc_prime(*n.a, ctx, keep_inc), n.b ? exc_prime(*n.b, ctx, keep_inc) : nullptr);
}

FormulaPtr inc_prime(const Ann& n, const TranslationContext& ctx) {
    const FormulaPtr& f = n.f;
    if (is_literal(f->op)) return f;
    if (f->op == Op::Inc) return rel(relvar(ctx.inc_prefix, n.idx), f->lhs);
    if (f->op == Op::Exc) throw TranslationError("exclusion atom in an INC formula");
    return rebuild(f, inc_prime(*n.a, ctx), n.b ? inc_prime(*n.b, ctx) : nullptr);
}

FormulaPtr inc_prime_i(const Ann& n, int i, const Tuple& u, const TranslationContext& ctx) {
    const FormulaPtr& f = n.f;
    switch (f->op) {
        case Op::Inc: {
            FormulaPtr p = rel(relvar(ctx.inc_prefix, n.idx), f->lhs);
            if (n.idx != i || ctx.mutation == Mutation::DropWitnessEquation) return p;
            return conj(tuple_eq(u, f->rhs), p);
        }
        case Op::And:
            return conj(inc_prime_i(*n.a, i, u, ctx), inc_prime_i(*n.b, i, u, ctx));
        case Op::Or: {
            bool swap = ctx.mutation == Mutation::SwapDisjunctRouting;
            if (contains(*n.a, i)) return inc_prime_i(swap ? *n.b : *n.a, i, u, ctx);
            if (contains(*n.b, i)) return inc_prime_i(swap ? *n.a : *n.b, i, u, ctx);
            return disj(inc_prime_i(*n.a, i, u, ctx), inc_prime_i(*n.b, i, u, ctx));
        }
        case Op::Exists:
            return exists(f->vars[0], inc_prime_i(*n.a, i, u, ctx));
        case Op::Forall:
            return conj(exists(f->vars[0], inc_prime_i(*n.a, i, u, ctx)), forall(f->vars[0], inc_prime(*n.a, ctx)));
        default:
            if (is_literal(f->op)) return f;
            throw TranslationError(std::string("unexpected node ") + op_name(f->op));
    }
}

FormulaPtr team_guard(const FormulaPtr& body, const TranslationContext& ctx) {
    Tuple y = var_tuple(ctx.free_tuple);
    FormulaPtr r = rel(ctx.free_relvar, y);
    FormulaPtr inner = ctx.mutation == Mutation::DropTeamGuard ? conj(r, body)
                                                               : disj(nrel(ctx.free_relvar, y), conj(r, body));
    return forall_all(ctx.free_tuple, inner);
}

// Stage 2 on a formula whose exclusions are already gone. `prior` are
// relvars from stage 1 to be quantified in front.
EsoFormula inc_stage(const FormulaPtr& f, const TranslationContext& ctx, std::vector<std::pair<std::string, int>> prior) {
    int counter = 0;
    auto tree = annotate(f, Op::Inc, counter);
    int n = counter;
    check_relvar_names(f, ctx, ctx.inc_prefix, n);

    std::set<std::string> taken;
    for (const auto& v : all_variables(*f)) taken.insert(v);
    for (const auto& v : ctx.free_tuple) taken.insert(v);
    std::vector<std::string> us = fresh_names("u", ctx.k, taken);
    Tuple u = var_tuple(us);

    FormulaPtr prime = inc_prime(*tree, ctx);
    bool sentence = ctx.free_tuple.empty();
    std::vector<FormulaPtr> parts{sentence ? prime : team_guard(prime, ctx)};
    for (int i = 0; i < n; ++i) {
        FormulaPtr pi = inc_prime_i(*tree, i, u, ctx);
        FormulaPtr witness = pi;
        if (!sentence) {
            Tuple y = var_tuple(ctx.free_tuple);
            witness = ctx.mutation == Mutation::DropWitnessGuard
                          ? exists_all(ctx.free_tuple, pi)
                          : exists_all(ctx.free_tuple, conj(rel(ctx.free_relvar, y), pi));
        }
        std::string p = relvar(ctx.inc_prefix, i);
        parts.push_back(forall_all(us, disj(nrel(p, u), witness)));
    }
    EsoFormula out;
    out.quantified = std::move(prior);
    for (int i = 0; i < n; ++i) out.quantified.push_back({relvar(ctx.inc_prefix, i), ctx.k});
    out.matrix = conj_all(parts);
    if (!sentence) out.free_relvars.push_back({ctx.free_relvar, static_cast<int>(ctx.free_tuple.size())});
    return out;
}

}  // namespace

EsoFormula exc_to_eso(const FormulaPtr& phi, const TranslationContext& ctx) {
    FormulaPtr f = prepare(phi, ctx.k);
    if (raw_arity_profile(*f).max_inc > 0) throw TranslationError("inclusion atom in an EXC formula");
    check_free(f, ctx);
    int counter = 0;
    auto tree = annotate(f, Op::Exc, counter);
    check_relvar_names(f, ctx, ctx.exc_prefix, counter);
    FormulaPtr prime = exc_prime(*tree, ctx, false);
    EsoFormula out;
    for (int i = 0; i < counter; ++i) out.quantified.push_back({relvar(ctx.exc_prefix, i), ctx.k});
    if (ctx.free_tuple.empty()) {
        out.matrix = prime;
    } else {
        out.matrix = team_guard(prime, ctx);
        out.free_relvars.push_back({ctx.free_relvar, static_cast<int>(ctx.free_tuple.size())});
    }
    return out;
}

EsoFormula inc_to_eso(const FormulaPtr& phi, const TranslationContext& ctx) {
    FormulaPtr f = prepare(phi, ctx.k);
    if (raw_arity_profile(*f).max_exc > 0) throw TranslationError("exclusion atom in an INC formula");
    check_free(f, ctx);
    return inc_stage(f, ctx, {});
}

EsoFormula inex_to_eso(const FormulaPtr& phi, const TranslationContext& ctx) {
    FormulaPtr f = prepare(phi, ctx.k);
    check_free(f, ctx);
    if (ctx.exc_prefix == ctx.inc_prefix && raw_arity_profile(*f).max_exc > 0 && raw_arity_profile(*f).max_inc > 0)
        throw TranslationError("exclusion and inclusion relvars need different prefixes");
    int counter = 0;
    auto tree = annotate(f, Op::Exc, counter);
    check_relvar_names(f, ctx, ctx.exc_prefix, counter);
    FormulaPtr stage1 = exc_prime(*tree, ctx, true);
    std::vector<std::pair<std::string, int>> prior;
    for (int i = 0; i < counter; ++i) prior.push_back({relvar(ctx.exc_prefix, i), ctx.k});
    return inc_stage(stage1, ctx, std::move(prior));
}

namespace {

FormulaPtr drop_relvar(const FormulaPtr& f, const std::string& p,
                       std::unordered_map<const Formula*, FormulaPtr>& memo) {
    auto it = memo.find(f.get());
    if (it != memo.end()) return it->second;
    FormulaPtr out;
    if ((f->op == Op::Rel || f->op == Op::NegRel) && f->name == p) {
        const Term& t = f->lhs.at(0);
        out = f->op == Op::Rel ? neq(t, t) : eq(t, t);
    } else if (is_literal(f->op)) {
        out = f;
    } else {
        FormulaPtr a = drop_relvar(f->a, p, memo);
        FormulaPtr b = f->b ? drop_relvar(f->b, p, memo) : nullptr;
        out = (a == f->a && b == f->b) ? f : rebuild(f, a, b);
    }
    memo.emplace(f.get(), out);
    return out;
}

}  // namespace

EsoFormula eso_nonempty_normal_form(const EsoFormula& phi) {
    if (!phi.matrix || !is_first_order(*phi.matrix)) throw TranslationError("ESO matrix must be first-order");
    EsoFormula out = phi;
    FormulaPtr delta = phi.matrix;
    for (const auto& [p, k] : phi.quantified) {
        std::unordered_map<const Formula*, FormulaPtr> memo;
        delta = disj(delta, drop_relvar(delta, p, memo));
    }
    out.matrix = delta;
    return out;
}

namespace {

struct InexBuilder {
    const TranslationContext& ctx;
    std::map<std::string, Tuple> targets;   // relvar -> w̄ᵢ or ȳⱼ
    std::vector<Tuple> preserved;
    std::unordered_map<const Formula*, FormulaPtr> memo;

    FormulaPtr run(const FormulaPtr& f) {
        auto it = memo.find(f.get());
        if (it != memo.end()) return it->second;
        FormulaPtr out;
        if (f->op == Op::Rel || f->op == Op::NegRel) {
            auto t = targets.find(f->name);
            if (t == targets.end()) {
                out = f;
            } else {
                Tuple args = pad_tuple(f->lhs, static_cast<size_t>(ctx.k));
                out = f->op == Op::Rel ? inc(args, t->second) : exc(args, t->second);
            }
        } else if (is_literal(f->op)) {
            out = f;
        } else if (f->op == Op::Or) {
            FormulaPtr a = run(f->a), b = run(f->b);
            out = preserved.empty() ? disj(a, b) : tvp_or(a, b, preserved);
        } else {
            out = rebuild(f, run(f->a), f->b ? run(f->b) : nullptr);
        }
        memo.emplace(f.get(), out);
        return out;
    }
};

}  // namespace

FormulaPtr eso_to_inex(const EsoFormula& phi, const TranslationContext& ctx) {
    if (ctx.k < 1) throw TranslationError("arity bound k must be >= 1");
    if (!phi.matrix || !is_first_order(*phi.matrix)) throw TranslationError("ESO matrix must be first-order");
    if (!free_variables(*phi.matrix).empty()) throw TranslationError("ESO formula has free first-order variables");
    for (const auto& [p, a] : phi.quantified)
        if (a > ctx.k) throw TranslationError("quantified relvar " + p + " has arity above " + std::to_string(ctx.k));

    std::set<std::string> taken;
    for (const auto& v : all_variables(*phi.matrix)) taken.insert(v);
    InexBuilder b{ctx, {}, {}, {}};
    std::vector<Tuple> ys;
    for (const auto& [r, a] : phi.free_relvars) {
        if (a > ctx.k) throw TranslationError("free relvar " + r + " has arity above " + std::to_string(ctx.k));
        auto it = ctx.relvar_tuples.find(r);
        if (it == ctx.relvar_tuples.end()) throw TranslationError("no team tuple given for free relvar " + r);
        if (static_cast<int>(it->second.size()) != ctx.k)
            throw TranslationError("team tuple for " + r + " must have length " + std::to_string(ctx.k));
        for (const auto& v : it->second)
            if (taken.count(v)) throw TranslationError("team variable " + v + " occurs in the ESO formula");
        b.targets[r] = var_tuple(it->second);
        ys.push_back(var_tuple(it->second));
    }
    for (const auto& [r, t] : ctx.relvar_tuples)
        for (const auto& v : t) taken.insert(v);

    std::vector<std::string> ws;
    int i = 0;
    for (const auto& [p, a] : phi.quantified) {
        std::string base = "w" + std::to_string(++i);
        auto names = fresh_names(ctx.k == 1 ? base : base + "_", ctx.k, taken);
        b.targets[p] = var_tuple(names);
        b.preserved.push_back(var_tuple(names));
        ws.insert(ws.end(), names.begin(), names.end());
    }
    for (const auto& y : ys) b.preserved.push_back(y);

    EsoFormula nf = eso_nonempty_normal_form(phi);
    FormulaPtr body = b.run(nf.matrix);
    return ws.empty() ? body : exists_all(ws, body);
}

}  // namespace teamlogic
