#include "teamlogic/eso.hpp"

#include <algorithm>
#include <climits>
#include <map>
#include <memory>

extern "C" {
#include "picosat/picosat.h"
}

#include "program.hpp"

namespace teamlogic {

using detail::Bound;
using detail::Program;

namespace {

// The model with every relvar of phi installed in m.relvars, plus the
// compiled matrix bound to it. Quantified relvars start empty.
struct Setup {
    Model model;
    Program prog;
    Bound bound;
    std::vector<std::string> quantified;   // only those the matrix mentions
    std::vector<int> arity;
    std::vector<std::string> unused;
};

Setup prepare(const Model& m, const EsoFormula& phi, const RelAssignment& free_bindings) {
    if (!phi.matrix) throw EvalError("ESO formula without matrix");
    if (!is_first_order(*phi.matrix)) throw EvalError("ESO matrix must be first-order");
    if (!free_variables(*phi.matrix).empty()) throw EvalError("ESO formula has free first-order variables");
    Setup s;
    s.model = m;
    for (const auto& [name, k] : phi.free_relvars) {
        auto it = free_bindings.find(name);
        if (it != free_bindings.end()) {
            if (it->second.arity != k) throw EvalError("binding for " + name + " has the wrong arity");
            try {
                s.model.relvars[name] = make_relation(m.size, k, it->second.tuples);
            } catch (const StructureError& e) {
                throw EvalError(e.what());
            }
        } else if (!m.relvars.count(name)) {
            throw EvalError("free relation variable " + name + " is unbound");
        }
    }
    s.prog = detail::compile(phi.matrix, Mode::CoreOnly);
    for (const auto& [name, k] : phi.quantified) {
        s.model.relvars[name] = make_relation(m.size, k, {});
        if (std::find(s.prog.relations.begin(), s.prog.relations.end(), name) == s.prog.relations.end()) {
            s.unused.push_back(name);
            continue;
        }
        if (int_pow(m.size, k) > 62) throw EvalError("relation variable " + name + " has too many tuples to enumerate");
        s.quantified.push_back(name);
        s.arity.push_back(k);
    }
    s.bound = detail::bind(s.prog, s.model);
    return s;
}

void apply_mask(Relation& r, std::uint64_t mask) {
    for (size_t i = 0; i < r.bits.size(); ++i) r.bits[i] = (mask >> i) & 1u;
}

bool holds(const Setup& s) {
    std::uint8_t row[1] = {0};
    return detail::tarski(s.prog, s.bound, s.prog.root, row);
}

// Odometer over masks; returns true with a satisfying interpretation, false
// when exhausted, and throws BudgetExceeded past `max`.
bool enumerate(Setup& s, bool nonempty, std::uint64_t max, std::uint64_t& used, std::vector<std::uint64_t>& masks) {
    size_t q = s.quantified.size();
    std::vector<std::uint64_t> top(q);
    std::uint64_t first = nonempty ? 1 : 0;
    masks.assign(q, first);
    std::vector<Relation*> rels;
    for (size_t i = 0; i < q; ++i) {
        rels.push_back(&s.model.relvars[s.quantified[i]]);
        top[i] = (std::uint64_t{1} << rels[i]->bits.size()) - 1;
        apply_mask(*rels[i], first);
    }
    for (;;) {
        if (++used > max) throw detail::BudgetExceeded{};
        if (holds(s)) return true;
        size_t i = q;
        for (;;) {
            if (i == 0) return false;
            --i;
            if (masks[i] < top[i]) {
                apply_mask(*rels[i], ++masks[i]);
                break;
            }
            masks[i] = first;
            apply_mask(*rels[i], first);
        }
    }
}

class EsoGrounder {
public:
    EsoGrounder(const Setup& s, std::uint64_t max) : s_(s), max_(max), ps_(picosat_init(), &picosat_reset) {
        T_ = picosat_inc_max_var(ps_.get());
        add({T_});
        for (size_t i = 0; i < s.quantified.size(); ++i) {
            auto it = std::find(s.prog.relations.begin(), s.prog.relations.end(), s.quantified[i]);
            int rid = static_cast<int>(it - s.prog.relations.begin());
            auto& vars = tuple_vars_[rid];
            for (std::int64_t t = 0; t < int_pow(s.model.size, s.arity[i]); ++t)
                vars.push_back(picosat_inc_max_var(ps_.get()));
        }
    }

    std::uint64_t cells() const { return cells_; }

    int solve(std::uint64_t& used) {
        std::uint8_t row[1] = {0};
        int root = lit(s_.prog.root, std::string(1, '\0'), row);
        add({root});
        std::uint64_t left = max_ - cells_;
        int limit = left > static_cast<std::uint64_t>(INT_MAX) ? -1 : static_cast<int>(left);
        int r = picosat_sat(ps_.get(), limit);
        used = cells_ + picosat_decisions(ps_.get());
        return r;
    }

private:
    void add(std::initializer_list<int> c) { add(std::vector<int>(c)); }
    void add(const std::vector<int>& c) {
        for (int l : c)
            if (l == T_) return;
        for (int l : c)
            if (l != -T_) picosat_add(ps_.get(), l);
        picosat_add(ps_.get(), 0);
    }

    // v <-> AND (conj) or OR (!conj) of parts
    int gate(std::vector<int> parts, bool conj) {
        int unit = conj ? T_ : -T_;
        parts.erase(std::remove(parts.begin(), parts.end(), unit), parts.end());
        if (std::find(parts.begin(), parts.end(), -unit) != parts.end()) return -unit;
        if (parts.empty()) return unit;
        if (parts.size() == 1) return parts[0];
        int v = picosat_inc_max_var(ps_.get());
        std::vector<int> big{conj ? v : -v};
        for (int p : parts) {
            add({conj ? -v : v, conj ? p : -p});
            big.push_back(conj ? -p : p);
        }
        add(big);
        return v;
    }

    int lit(int id, const std::string& key, const std::uint8_t* row) {
        auto mk = std::make_pair(id, key);
        auto it = memo_.find(mk);
        if (it != memo_.end()) return it->second;
        if (++cells_ > max_) throw detail::BudgetExceeded{};
        const detail::Node& nd = s_.prog.nodes[id];
        int out = 0;
        switch (nd.op) {
            case Op::Eq: case Op::NegEq:
                out = detail::literal_holds(nd, row, s_.bound) ? T_ : -T_;
                break;
            case Op::Rel: case Op::NegRel: {
                auto tv = tuple_vars_.find(nd.rel);
                if (tv == tuple_vars_.end()) {
                    out = detail::literal_holds(nd, row, s_.bound) ? T_ : -T_;
                } else {
                    int v = tv->second[detail::eval_code(nd.t1, row, s_.bound)];
                    out = nd.op == Op::Rel ? v : -v;
                }
                break;
            }
            case Op::And: case Op::Or: {
                std::string ra(std::max<size_t>(1, s_.prog.nodes[nd.a].fv.size()), '\0');
                std::string rb(std::max<size_t>(1, s_.prog.nodes[nd.b].fv.size()), '\0');
                detail::child_row(nd, 0, row, nullptr, nullptr, reinterpret_cast<std::uint8_t*>(ra.data()));
                detail::child_row(nd, 1, row, nullptr, nullptr, reinterpret_cast<std::uint8_t*>(rb.data()));
                int l = lit(nd.a, ra, reinterpret_cast<const std::uint8_t*>(ra.data()));
                int r = lit(nd.b, rb, reinterpret_cast<const std::uint8_t*>(rb.data()));
                out = gate({l, r}, nd.op == Op::And);
                break;
            }
            case Op::Exists: case Op::Forall: {
                std::vector<int> parts;
                std::string rc(std::max<size_t>(1, s_.prog.nodes[nd.a].fv.size()), '\0');
                for (int v = 0; v < s_.bound.n; ++v) {
                    detail::child_row(nd, 0, row, &v, nullptr, reinterpret_cast<std::uint8_t*>(rc.data()));
                    parts.push_back(lit(nd.a, rc, reinterpret_cast<const std::uint8_t*>(rc.data())));
                }
                out = gate(parts, nd.op == Op::Forall);
                break;
            }
            default:
                throw EvalError("ESO matrix must be first-order");
        }
        memo_.emplace(mk, out);
        return out;
    }

    const Setup& s_;
    std::uint64_t max_;
    std::unique_ptr<PicoSAT, void (*)(PicoSAT*)> ps_;
    int T_ = 0;
    std::uint64_t cells_ = 0;
    std::map<int, std::vector<int>> tuple_vars_;
    std::map<std::pair<int, std::string>, int> memo_;
};

}  // namespace

EvalOutcome eso_satisfies(const Model& m, const EsoFormula& phi, const RelAssignment& free_bindings,
                          const EvalBudget& b) {
    Setup s = prepare(m, phi, free_bindings);
    EvalOutcome out;
    try {
        if (b.engine == Engine::Sat) {
            EsoGrounder g(s, b.max_nodes);
            int r = g.solve(out.nodes_used);
            if (r == PICOSAT_UNKNOWN) throw detail::BudgetExceeded{};
            out.value = r == PICOSAT_SATISFIABLE;
        } else {
            std::vector<std::uint64_t> masks;
            out.value = enumerate(s, false, b.max_nodes, out.nodes_used, masks);
        }
    } catch (const detail::BudgetExceeded&) {
        out.value.reset();
        out.nodes_used = std::max(out.nodes_used, b.max_nodes);
    }
    return out;
}

std::optional<RelAssignment> nonempty_witness_search(const Model& m, const EsoFormula& phi,
                                                     const RelAssignment& free_bindings,
                                                     std::uint64_t max_candidates) {
    Setup s = prepare(m, phi, free_bindings);
    std::vector<std::uint64_t> masks;
    std::uint64_t used = 0;
    bool found;
    try {
        found = enumerate(s, true, max_candidates, used, masks);
    } catch (const detail::BudgetExceeded&) {
        throw EvalError("witness search exceeded its candidate budget");
    }
    if (!found) return std::nullopt;
    RelAssignment out;
    for (size_t i = 0; i < s.quantified.size(); ++i)
        out[s.quantified[i]] = {s.arity[i], relation_tuples(s.model.relvars[s.quantified[i]], m.size)};
    for (const auto& name : s.unused) {
        int k = 0;
        for (const auto& [n, a] : phi.quantified)
            if (n == name) k = a;
        out[name] = {k, {Row(k, 0)}};
    }
    return out;
}

bool eso_matrix_holds(const Model& m, const EsoFormula& phi, const RelAssignment& all_bindings) {
    EsoFormula open = phi;
    for (const auto& q : phi.quantified) open.free_relvars.push_back(q);
    open.quantified.clear();
    Setup s = prepare(m, open, all_bindings);
    return holds(s);
}

}  // namespace teamlogic
