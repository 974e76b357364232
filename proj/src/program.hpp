#pragma once

// Compiled form shared by both team engines. Every node keeps its own free
// variable list; teams handed to a node are restricted to those variables,
// and rows are byte strings of width |fv|.

#include <cstdint>
#include <string>
#include <vector>

#include "teamlogic/evaluator.hpp"

namespace teamlogic::detail {

struct CTerm {
    enum class K { Slot, Const, App };
    K k = K::Slot;
    int idx = 0;   // row slot, constant id or function id
    std::vector<CTerm> args;
};

struct SlotSource {
    enum class Kind { Parent, Chosen, Stored };
    Kind kind = Kind::Parent;
    int idx = 0;
};

struct Node {
    Op op = Op::Eq;
    std::vector<std::string> fv;
    int a = -1, b = -1;
    std::vector<CTerm> t1, t2;        // literal arguments, atom tuples, bounding or stored terms
    int rel = -1;
    std::vector<std::vector<CTerm>> preserved;
    int width = 0;                    // number of chosen values per row (quantifiers)
    std::vector<SlotSource> amap, bmap;
    bool fo = false;                  // first-order subtree
    bool dc = false;                  // known downward closed
};

struct Program {
    std::vector<Node> nodes;
    int root = -1;
    std::vector<std::string> relations, functions, constants;
};

Program compile(const FormulaPtr& f, Mode mode);

// Symbol tables bound to one model.
struct Bound {
    int n = 1;
    std::vector<const Relation*> rels;
    std::vector<const Function*> funs;
    std::vector<int> consts;
};

Bound bind(const Program& p, const Model& m);

inline int eval(const CTerm& t, const std::uint8_t* row, const Bound& b) {
    switch (t.k) {
        case CTerm::K::Slot: return row[t.idx];
        case CTerm::K::Const: return b.consts[t.idx];
        case CTerm::K::App: {
            const Function* f = b.funs[t.idx];
            std::int64_t i = 0;
            for (const auto& a : t.args) i = i * b.n + eval(a, row, b);
            return f->table[i];
        }
    }
    return 0;
}

// Value of a term tuple packed into one integer (base n).
inline std::int64_t eval_code(const std::vector<CTerm>& ts, const std::uint8_t* row, const Bound& b) {
    std::int64_t c = 0;
    for (const auto& t : ts) c = c * b.n + eval(t, row, b);
    return c;
}

bool literal_holds(const Node& nd, const std::uint8_t* row, const Bound& b);

// Child row of `node` for side a (side=0) or b (side=1); `chosen` holds the
// quantified values and `stored` the stored term values.
void child_row(const Node& nd, int side, const std::uint8_t* row, const int* chosen, const int* stored,
               std::uint8_t* out);

// Tarski evaluation of a first-order node on one row.
bool tarski(const Program& p, const Bound& b, int node, const std::uint8_t* row);

struct BudgetExceeded {};

bool search_satisfies(const Program& p, const Bound& b, const std::string& rows, std::uint64_t max_nodes,
                      const EvalBudget& opts, std::uint64_t& used);
bool sat_satisfies(const Program& p, const Bound& b, const std::string& rows, std::uint64_t max_nodes,
                   const EvalBudget& opts, std::uint64_t& used);

}  // namespace teamlogic::detail
