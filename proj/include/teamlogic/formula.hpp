#pragma once

#include <map>
#include <memory>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace teamlogic {

struct Vocabulary {
    std::map<std::string, int> relations;
    std::map<std::string, int> functions;
    std::set<std::string> constants;
    // Unknown symbols are accepted and classified by case: Upper(...) is a
    // relation, lower(...) a function. Arity is fixed by first use.
    bool open = false;

    bool has_relation(const std::string& n) const { return relations.count(n) != 0; }
    bool has_function(const std::string& n) const { return functions.count(n) != 0; }
    bool has_constant(const std::string& n) const { return constants.count(n) != 0; }
    void validate() const;
};

struct Term {
    enum class Kind { Var, Const, App };
    Kind kind = Kind::Var;
    std::string name;
    std::vector<Term> args;

    static Term var(std::string n) { return {Kind::Var, std::move(n), {}}; }
    static Term constant(std::string n) { return {Kind::Const, std::move(n), {}}; }
    static Term app(std::string f, std::vector<Term> a) { return {Kind::App, std::move(f), std::move(a)}; }

    bool is_var() const { return kind == Kind::Var; }
    friend bool operator==(const Term&, const Term&) = default;
    friend auto operator<=>(const Term&, const Term&) = default;
};

using Tuple = std::vector<Term>;

Tuple var_tuple(const std::vector<std::string>& names);

// Variables in order of first occurrence.
void term_variables(const Term& t, std::vector<std::string>& out);
std::vector<std::string> tuple_variables(const Tuple& t);

enum class Op {
    Eq, NegEq, Rel, NegRel,
    Inc, Exc, EquiExt,
    And, Or, Exists, Forall,
    Dep, IOr, Store,
    EIncQ, EExcQ, UIncQ, UExcQ, UIncQExc,
    TvpOr, Relativized
};

const char* op_name(Op op);

struct Formula;
using FormulaPtr = std::shared_ptr<const Formula>;

// Field use per node:
//   Eq/NegEq           lhs={t1} rhs={t2}
//   Rel/NegRel         name, lhs=args
//   Inc/Exc/EquiExt    lhs, rhs
//   And/Or/IOr         a, b
//   TvpOr              a, b, preserved
//   Exists/Forall      vars={x}, a
//   Dep                lhs={t}
//   Store              lhs=t̄, vars=ū, a
//   EIncQ..UIncQExc    vars=x̄, lhs=t̄, a
//   Relativized        name=y, a
struct Formula {
    Op op = Op::Eq;
    std::string name;
    Tuple lhs, rhs;
    std::vector<std::string> vars;
    std::vector<Tuple> preserved;
    FormulaPtr a, b;
};

class FormulaError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

FormulaPtr eq(Term t1, Term t2);
FormulaPtr neq(Term t1, Term t2);
FormulaPtr rel(std::string r, Tuple args);
FormulaPtr nrel(std::string r, Tuple args);
FormulaPtr inc(Tuple t1, Tuple t2);
FormulaPtr exc(Tuple t1, Tuple t2);
FormulaPtr equiext(Tuple t1, Tuple t2);
FormulaPtr conj(FormulaPtr a, FormulaPtr b);
FormulaPtr disj(FormulaPtr a, FormulaPtr b);
FormulaPtr exists(std::string x, FormulaPtr body);
FormulaPtr forall(std::string x, FormulaPtr body);
FormulaPtr dep(Term t);
FormulaPtr ior(FormulaPtr a, FormulaPtr b);
FormulaPtr store(Tuple t, std::vector<std::string> u, FormulaPtr body);
FormulaPtr quantifier(Op op, std::vector<std::string> xs, Tuple t, FormulaPtr body);
FormulaPtr tvp_or(FormulaPtr a, FormulaPtr b, std::vector<Tuple> preserved);
FormulaPtr relativized(FormulaPtr body, std::string y);

// Tuple equality t̄ = ū as a conjunction; a 0-ary tuple gives nullptr.
FormulaPtr tuple_eq(const Tuple& t, const Tuple& u);
// Folds; an empty list is not allowed.
FormulaPtr conj_all(const std::vector<FormulaPtr>& fs);
FormulaPtr disj_all(const std::vector<FormulaPtr>& fs);
FormulaPtr exists_all(const std::vector<std::string>& xs, FormulaPtr body);
FormulaPtr forall_all(const std::vector<std::string>& xs, FormulaPtr body);

bool structurally_equal(const Formula& a, const Formula& b);
inline bool structurally_equal(const FormulaPtr& a, const FormulaPtr& b) { return structurally_equal(*a, *b); }

bool is_literal(Op op);
bool is_atom(Op op);     // Inc, Exc, EquiExt
bool is_sugar(Op op);    // everything outside literals, Inc, Exc, And, Or, Exists, Forall
bool is_quantifier_form(Op op);

bool is_core(const Formula& f);
bool is_first_order(const Formula& f);   // core and atom-free

std::vector<std::string> free_variables(const Formula& f);
// All variables, free or bound, including quantified and stored ones.
std::vector<std::string> all_variables(const Formula& f);
std::set<std::string> relation_symbols(const Formula& f);

enum class Fragment { FO, INC, EXC, INEX };

struct ArityProfile {
    int max_inc = 0;
    int max_exc = 0;
    Fragment fragment = Fragment::FO;
    int k() const { return max_inc > max_exc ? max_inc : max_exc; }
    std::string describe() const;   // "FO", "INC[2]", ...
};

struct ArityProfiles {
    ArityProfile raw;
    ArityProfile desugared;
};

// Raw profile counts atoms as written (EquiExt counts as inclusion). The
// desugared profile is computed on desugar(f).
ArityProfiles arity_profile(const FormulaPtr& f);
ArityProfile raw_arity_profile(const Formula& f);

struct EsoFormula {
    std::vector<std::pair<std::string, int>> quantified;
    FormulaPtr matrix;
    std::vector<std::pair<std::string, int>> free_relvars;
};

// Throws FormulaError when the ESO invariants are broken.
void validate_eso(const EsoFormula& phi, const Vocabulary& vocab);

}  // namespace teamlogic
