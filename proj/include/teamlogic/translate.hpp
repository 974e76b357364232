#pragma once

#include <map>
#include <string>
#include <vector>

#include "teamlogic/formula.hpp"

namespace teamlogic {

// Deliberate single-clause defects, used to check that the equivalence
// harness notices a broken translation.
enum class Mutation {
    None,
    DropNegatedExclusionSide,   // exclusion atom becomes P t̄₁ alone
    DropWitnessEquation,        // own inclusion atom loses (ū = t̄₂)
    DropWitnessGuard,           // ∃ȳ(Rȳ ∧ φᵢ′) becomes ∃ȳ φᵢ′
    DropTeamGuard,              // ∀ȳ(¬Rȳ ∨ (Rȳ ∧ φ′)) becomes ∀ȳ(Rȳ ∧ φ′)
    SwapDisjunctRouting         // φᵢ′ of a disjunction follows the wrong disjunct
};

const char* mutation_name(Mutation m);
std::vector<Mutation> all_mutations();

struct TranslationContext {
    int k = 1;
    // Team side ȳ for the INEX to ESO direction. Empty selects the sentence
    // forms, which skip the guard on R.
    std::vector<std::string> free_tuple;
    std::string free_relvar = "R";
    // Relvar names are prefix + index from 1, in preorder of the atom
    // occurrences.
    std::string exc_prefix = "P";
    std::string inc_prefix = "P";
    // ESO to INEX: the k-tuple of team variables standing for each free
    // relvar.
    std::map<std::string, std::vector<std::string>> relvar_tuples;
    Mutation mutation = Mutation::None;
};

class TranslationError : public FormulaError {
public:
    using FormulaError::FormulaError;
};

EsoFormula exc_to_eso(const FormulaPtr& phi, const TranslationContext& ctx);
EsoFormula inc_to_eso(const FormulaPtr& phi, const TranslationContext& ctx);
// Exclusions become P-relvars first; the inclusion stage then uses
// ctx.inc_prefix, which callers normally set apart (see inex_context).
EsoFormula inex_to_eso(const FormulaPtr& phi, const TranslationContext& ctx);
TranslationContext inex_context(int k, std::vector<std::string> free_tuple);

// δ = δ' ∨ δ'[Pₙ t̄ ↦ t₁≠t₁, ¬Pₙ t̄ ↦ t₁=t₁], built from the innermost
// quantified relvar outwards. The result keeps phi.quantified so callers can
// search for nonempty witnesses.
EsoFormula eso_nonempty_normal_form(const EsoFormula& phi);

// Correct on nonempty teams. Every free relvar needs an entry in
// ctx.relvar_tuples of length ctx.k; those variables must not occur in phi.
FormulaPtr eso_to_inex(const EsoFormula& phi, const TranslationContext& ctx);

}  // namespace teamlogic
