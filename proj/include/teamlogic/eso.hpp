#pragma once

#include <map>
#include <optional>

#include "teamlogic/evaluator.hpp"

namespace teamlogic {

struct RelValue {
    int arity = 1;
    RowSet tuples;
    friend bool operator==(const RelValue&, const RelValue&) = default;
};

using RelAssignment = std::map<std::string, RelValue>;

// Free relation variables are looked up in `free_bindings` first, then in
// m.relvars. Engine::Search enumerates interpretations: each quantified
// relvar is a bitmask over its n^k tuples (bit i = i-th tuple in row-major
// order), and the odometer advances the last quantified relvar fastest. The
// budget counts tried interpretations. Engine::Sat grounds the matrix to CNF
// instead; its budget counts grounded subformula instances plus solver
// decisions.
EvalOutcome eso_satisfies(const Model& m, const EsoFormula& phi, const RelAssignment& free_bindings,
                          const EvalBudget& b = {});

// First interpretation in the enumeration order above in which every
// quantified relvar is nonempty and the matrix holds. Throws EvalError when
// more than `max_candidates` interpretations would be needed.
std::optional<RelAssignment> nonempty_witness_search(const Model& m, const EsoFormula& phi,
                                                     const RelAssignment& free_bindings,
                                                     std::uint64_t max_candidates = 10'000'000);

// Tarski truth of the matrix under a full interpretation of its relvars.
bool eso_matrix_holds(const Model& m, const EsoFormula& phi, const RelAssignment& all_bindings);

}  // namespace teamlogic
