#pragma once

#include <string>
#include <vector>

#include "teamlogic/formula.hpp"

namespace teamlogic {

enum class CorpusKind { Team, Eso };

// Roles decide which suites use an entry.
enum CorpusRole : unsigned {
    kForward = 1u << 0,        // team formula over x, y for the INEX to ESO check
    kBackward = 1u << 1,       // ESO[1] formula with free R (x) and S (y)
    kFirstOrder = 1u << 2,     // flatness, locality, empty team
    kExclusion = 1u << 3,      // downward closure
    kInclusion = 1u << 4,      // union closure
    kSentence = 1u << 5,       // relational sentence for relativization
    kExample = 1u << 6,        // named example formulas
    kFunction = 1u << 7        // function-quantification formulas over x1, x2
};

struct CorpusEntry {
    std::string name;
    CorpusKind kind;
    std::string text;
    unsigned roles;
    std::string note;
};

const std::vector<CorpusEntry>& corpus();
const CorpusEntry& corpus_entry(const std::string& name);   // throws FormulaError
FormulaPtr corpus_formula(const std::string& name);
EsoFormula corpus_eso(const std::string& name);

// γ≤k: at most k elements.
std::string gamma_at_most(int k);

}  // namespace teamlogic
