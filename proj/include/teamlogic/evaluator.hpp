#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>

#include "teamlogic/formula.hpp"
#include "teamlogic/structures.hpp"

namespace teamlogic {

enum class Mode { CoreOnly, NativeSugar };

enum class Engine {
    Search,   // exhaustive cover/choice enumeration with memoization
    Sat       // the same semantics grounded to CNF and decided by PicoSAT
};

struct EvalBudget {
    std::uint64_t max_nodes = 10'000'000;
    Mode mode = Mode::NativeSugar;
    Engine engine = Engine::Search;
    // Optional shortcuts, each checked against the plain evaluator in tests.
    // flat_gate: first-order subformulas are decided row by row.
    // split_gate: disjunctions and choices under downward-closed
    // subformulas only try partitions and single witnesses (search engine).
    bool flat_gate = false;
    bool split_gate = false;
};

struct EvalOutcome {
    std::optional<bool> value;   // empty when the budget ran out
    std::uint64_t nodes_used = 0;

    bool exhausted() const { return !value.has_value(); }
};

class EvalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

namespace detail {
struct Program;
}

// Compiles once; evaluates against any model and team.
class Evaluator {
public:
    Evaluator(const FormulaPtr& f, const EvalBudget& b);
    ~Evaluator();
    Evaluator(Evaluator&&) noexcept;
    Evaluator& operator=(Evaluator&&) noexcept;

    EvalOutcome satisfies(const Model& m, const Team& x) const;
    const std::vector<std::string>& free_vars() const;
    const EvalBudget& budget() const { return budget_; }

private:
    std::unique_ptr<detail::Program> prog_;
    EvalBudget budget_;
};

EvalOutcome satisfies(const Model& m, const Team& x, const FormulaPtr& f, const EvalBudget& b = {});

// Tarski semantics for first-order formulas.
bool satisfies_singleton(const Model& m, const Assignment& s, const FormulaPtr& f);

// Negated atoms: ¬(t̄₁⊆t̄₂) is read as t̄₁|t̄₂ and ¬(t̄₁|t̄₂) as t̄₁⋈t̄₂.
// polarity=false asks for the negated atom.
bool check_negated_atom(const Model& m, const Team& x, const FormulaPtr& atom, bool polarity);

}  // namespace teamlogic
