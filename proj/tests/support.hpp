#pragma once

#include <functional>
#include <random>
#include <string>
#include <vector>

#include "teamlogic/evaluator.hpp"
#include "teamlogic/harness.hpp"
#include "teamlogic/parse.hpp"
#include "teamlogic/print.hpp"

namespace tl = teamlogic;

namespace support {

inline tl::Vocabulary vocab() {
    tl::Vocabulary v;
    v.relations = {{"U", 1}, {"E", 2}};
    return v;
}

inline tl::FormulaPtr parse(const std::string& s) { return tl::parse_formula(s, vocab()); }

inline tl::Model model(int n, const tl::RowSet& u = {}, const tl::RowSet& e = {}) {
    tl::Model m;
    m.size = n;
    tl::set_relation(m, "U", 1, u);
    tl::set_relation(m, "E", 2, e);
    return m;
}

inline tl::Team team(std::vector<std::string> dom, tl::RowSet rows) { return tl::Team(std::move(dom), std::move(rows)); }

// The harness defaults: SAT engine with the flatness gate.
inline tl::EvalBudget sat_budget() { return tl::HarnessOptions{}.team; }

inline bool holds(const tl::Model& m, const tl::Team& x, const tl::FormulaPtr& f, tl::EvalBudget b = sat_budget()) {
    auto o = tl::satisfies(m, x, f, b);
    if (o.exhausted()) throw std::runtime_error("budget exhausted in test: " + tl::pretty_print(f));
    return *o.value;
}

// Every model over {U, E} with n elements, by plain bit counting.
inline void each_model(int n, const std::function<void(const tl::Model&)>& fn) {
    int u_bits = n, e_bits = n * n;
    for (long mu = 0; mu < (1L << u_bits); ++mu)
        for (long me = 0; me < (1L << e_bits); ++me) {
            tl::RowSet u, e;
            for (int a = 0; a < n; ++a)
                if ((mu >> a) & 1) u.insert({a});
            for (int a = 0; a < n; ++a)
                for (int b = 0; b < n; ++b)
                    if ((me >> (a * n + b)) & 1) e.insert({a, b});
            fn(model(n, u, e));
        }
}

// Every team over `dom` with at most max_rows rows.
inline void each_team(int n, const std::vector<std::string>& dom, int max_rows,
                      const std::function<void(const tl::Team&)>& fn) {
    std::vector<tl::Row> rows;
    int total = 1;
    for (size_t i = 0; i < dom.size(); ++i) total *= n;
    for (int i = 0; i < total; ++i) {
        tl::Row r;
        for (size_t j = 0, v = i; j < dom.size(); ++j, v /= n) r.insert(r.begin(), static_cast<int>(v % n));
        rows.push_back(r);
    }
    for (long mask = 0; mask < (1L << rows.size()); ++mask) {
        if (__builtin_popcountl(mask) > max_rows) continue;
        tl::RowSet s;
        for (size_t i = 0; i < rows.size(); ++i)
            if ((mask >> i) & 1) s.insert(rows[i]);
        fn(tl::Team(dom, s));
    }
}

// Random formulas over free x, y with bound z, v.
class Gen {
public:
    explicit Gen(unsigned seed, bool sugar = true, bool atoms = true) : rng_(seed), sugar_(sugar), atoms_(atoms) {}

    tl::FormulaPtr formula(int depth) { return node(depth, {"x", "y"}); }
    tl::FormulaPtr first_order(int depth) {
        bool s = sugar_, a = atoms_;
        sugar_ = atoms_ = false;
        auto f = node(depth, {"x", "y"});
        sugar_ = s;
        atoms_ = a;
        return f;
    }

private:
    std::mt19937 rng_;
    bool sugar_, atoms_;

    int pick(int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng_); }
    tl::Term var(const std::vector<std::string>& scope) { return tl::Term::var(scope[pick(static_cast<int>(scope.size()))]); }
    tl::Tuple tuple(const std::vector<std::string>& scope, int k) {
        tl::Tuple t;
        for (int i = 0; i < k; ++i) t.push_back(var(scope));
        return t;
    }
    std::string fresh_bound(const std::vector<std::string>& scope) {
        for (const char* c : {"z", "v", "w"})
            if (std::find(scope.begin(), scope.end(), c) == scope.end()) return c;
        return scope[pick(static_cast<int>(scope.size()))];   // shadowing
    }

    tl::FormulaPtr leaf(const std::vector<std::string>& scope) {
        int choices = atoms_ ? 9 : 6;
        switch (pick(choices)) {
            case 0: return tl::eq(var(scope), var(scope));
            case 1: return tl::neq(var(scope), var(scope));
            case 2: return tl::rel("U", {var(scope)});
            case 3: return tl::nrel("U", {var(scope)});
            case 4: return tl::rel("E", {var(scope), var(scope)});
            case 5: return tl::nrel("E", {var(scope), var(scope)});
            case 6: {
                int k = 1 + pick(2);
                return tl::inc(tuple(scope, k), tuple(scope, k));
            }
            case 7: {
                int k = 1 + pick(2);
                return tl::exc(tuple(scope, k), tuple(scope, k));
            }
            default:
                if (sugar_ && pick(2)) return tl::dep(var(scope));
                return tl::equiext(tuple(scope, 1), tuple(scope, 1));
        }
    }

    tl::FormulaPtr node(int depth, std::vector<std::string> scope) {
        if (depth == 0 || pick(4) == 0) return leaf(scope);
        int choices = sugar_ ? 12 : 4;
        int c = pick(choices);
        if (c <= 1) {
            auto a = node(depth - 1, scope), b = node(depth - 1, scope);
            return c == 0 ? tl::conj(a, b) : tl::disj(a, b);
        }
        if (c <= 3) {
            std::string x = fresh_bound(scope);
            auto inner = scope;
            inner.push_back(x);
            auto body = node(depth - 1, inner);
            return c == 2 ? tl::exists(x, body) : tl::forall(x, body);
        }
        if (c == 4) return tl::ior(node(depth - 1, scope), node(depth - 1, scope));
        if (c == 5) return tl::tvp_or(node(depth - 1, scope), node(depth - 1, scope), {tuple(scope, 1)});
        if (c <= 10) {
            static const tl::Op ops[] = {tl::Op::EIncQ, tl::Op::EExcQ, tl::Op::UIncQ, tl::Op::UExcQ, tl::Op::UIncQExc};
            tl::Op op = ops[c - 6];
            std::string x = fresh_bound(scope);
            tl::Tuple t = tuple(scope, 1);
            auto inner = scope;
            inner.push_back(x);
            tl::FormulaPtr body = node(depth - 1, inner);
            // The EXC-only quantifier is meant for exclusion bodies.
            if (op == tl::Op::UIncQExc && tl::arity_profile(body).desugared.max_inc > 0) op = tl::Op::UIncQ;
            return tl::quantifier(op, {x}, t, body);
        }
        // store [t] -> [u]. body, with u not among the stored terms
        tl::Term t = var(scope);
        std::string u = t.name == "w" ? "v" : "w";
        auto inner = scope;
        if (std::find(inner.begin(), inner.end(), u) == inner.end()) inner.push_back(u);
        return tl::store({t}, {u}, node(depth - 1, inner));
    }
};

}  // namespace support
