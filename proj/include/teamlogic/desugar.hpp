#pragma once

#include <string>
#include <vector>

#include "teamlogic/formula.hpp"

namespace teamlogic {

// Hands out "$0", "$1", ... which the parser refuses in user input.
class FreshSupply {
public:
    FreshSupply() = default;
    explicit FreshSupply(const Formula& avoid_all) { avoid(avoid_all); }

    void avoid(const Formula& f);
    void avoid(const std::string& name);
    std::string next();
    std::vector<std::string> next(size_t k);
    int peek() const { return counter_; }

private:
    int counter_ = 0;
};

bool is_reserved_name(const std::string& name);

// Rewrites every sugar node (Dep, IOr, Store, the four bounded quantifiers,
// the EXC-only universal quantifier, TVP disjunction, EquiExt, Relativized)
// into literals, Inc, Exc, And, Or, Exists and Forall. Subformulas are shared
// in the output, so it is a DAG.
FormulaPtr desugar(const FormulaPtr& f, FreshSupply& fresh);

// One rewriting step for a sugar node; children are left untouched.
FormulaPtr expand_once(const FormulaPtr& f, FreshSupply& fresh);

// φ↾y. Core connectives follow the textbook clauses; sugar nodes are either
// mapped to themselves with relativized children (IOr, Store, EIncQ, UIncQ,
// and TvpOr with y added to the preserved tuples) or relativized through
// their one-step expansion. y must not occur in f.
FormulaPtr relativize(const FormulaPtr& f, const std::string& y, FreshSupply& fresh);

// Pads Inc/Exc/EquiExt tuples to width k by repeating the last term.
FormulaPtr pad_atoms_to_arity(const FormulaPtr& f, int k);
Tuple pad_tuple(const Tuple& t, size_t k);

}  // namespace teamlogic
