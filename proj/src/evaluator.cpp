#include <algorithm>

#include "program.hpp"

namespace teamlogic {

using detail::Program;

Evaluator::Evaluator(const FormulaPtr& f, const EvalBudget& b)
    : prog_(std::make_unique<Program>(detail::compile(f, b.mode))), budget_(b) {}

Evaluator::~Evaluator() = default;
Evaluator::Evaluator(Evaluator&&) noexcept = default;
Evaluator& Evaluator::operator=(Evaluator&&) noexcept = default;

const std::vector<std::string>& Evaluator::free_vars() const { return prog_->nodes[prog_->root].fv; }

EvalOutcome Evaluator::satisfies(const Model& m, const Team& x) const {
    const auto& fv = free_vars();
    std::vector<int> cols;
    for (const auto& v : fv) {
        int i = x.index_of(v);
        if (i < 0) throw EvalError("free variable " + v + " is not in the team's domain");
        cols.push_back(i);
    }
    detail::Bound b = detail::bind(*prog_, m);

    size_t w = std::max<size_t>(1, fv.size());
    std::vector<std::string> rows;
    for (const auto& r : x.rows) {
        std::string row(w, '\0');
        for (size_t j = 0; j < cols.size(); ++j) {
            int v = r[cols[j]];
            if (v < 0 || v >= m.size) throw EvalError("team value outside the universe");
            row[j] = static_cast<char>(v);
        }
        rows.push_back(std::move(row));
    }
    std::sort(rows.begin(), rows.end());
    rows.erase(std::unique(rows.begin(), rows.end()), rows.end());
    std::string packed;
    for (const auto& r : rows) packed += r;

    EvalOutcome out;
    if (packed.empty()) {
        out.value = true;
        return out;
    }
    try {
        out.value = budget_.engine == Engine::Sat
                        ? detail::sat_satisfies(*prog_, b, packed, budget_.max_nodes, budget_, out.nodes_used)
                        : detail::search_satisfies(*prog_, b, packed, budget_.max_nodes, budget_, out.nodes_used);
    } catch (const detail::BudgetExceeded&) {
        out.value.reset();
        if (out.nodes_used < budget_.max_nodes) out.nodes_used = budget_.max_nodes;
    }
    return out;
}

EvalOutcome satisfies(const Model& m, const Team& x, const FormulaPtr& f, const EvalBudget& b) {
    return Evaluator(f, b).satisfies(m, x);
}

bool satisfies_singleton(const Model& m, const Assignment& s, const FormulaPtr& f) {
    if (!is_first_order(*f)) throw EvalError("Tarski evaluation needs a first-order formula");
    Program p = detail::compile(f, Mode::CoreOnly);
    const auto& fv = p.nodes[p.root].fv;
    std::vector<std::uint8_t> row(std::max<size_t>(1, fv.size()), 0);
    for (size_t i = 0; i < fv.size(); ++i) {
        auto it = s.find(fv[i]);
        if (it == s.end()) throw EvalError("free variable " + fv[i] + " is not assigned");
        if (it->second < 0 || it->second >= m.size) throw EvalError("assignment value outside the universe");
        row[i] = static_cast<std::uint8_t>(it->second);
    }
    detail::Bound b = detail::bind(p, m);
    return detail::tarski(p, b, p.root, row.data());
}

bool check_negated_atom(const Model& m, const Team& x, const FormulaPtr& atom, bool polarity) {
    FormulaPtr f = atom;
    if (!polarity) {
        if (atom->op == Op::Inc) f = exc(atom->lhs, atom->rhs);
        else if (atom->op == Op::Exc) f = equiext(atom->lhs, atom->rhs);
        else throw EvalError("negated atoms must be inclusion or exclusion atoms");
    } else if (atom->op != Op::Inc && atom->op != Op::Exc) {
        throw EvalError("negated atoms must be inclusion or exclusion atoms");
    }
    return *satisfies(m, x, f).value;
}

}  // namespace teamlogic
