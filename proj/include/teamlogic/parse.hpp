#pragma once

#include <string>
#include <string_view>

#include "teamlogic/formula.hpp"

namespace teamlogic {

class ParseError : public FormulaError {
public:
    ParseError(const std::string& msg, size_t pos)
        : FormulaError("parse error at offset " + std::to_string(pos) + ": " + msg), pos_(pos) {}
    size_t position() const { return pos_; }

private:
    size_t pos_;
};

struct ParseOptions {
    // Accept "$n" variables, which are otherwise kept for generated names.
    bool allow_reserved = false;
};

// Quantifier bodies ("exists x.", "(exists [x] sub [t])", "store ... .")
// extend as far right as possible. "or", "ior" and "orp{...}" share one
// precedence level below "and"; both levels associate to the left.
FormulaPtr parse_formula(std::string_view text, const Vocabulary& vocab, ParseOptions opts = {});

// Relation names that are neither in the vocabulary nor quantified become
// free relation variables.
EsoFormula parse_eso(std::string_view text, const Vocabulary& vocab, ParseOptions opts = {});

}  // namespace teamlogic
