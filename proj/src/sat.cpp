// Grounds the team semantics of a compiled formula into CNF over a fixed
// finite model and asks PicoSAT. A team handed to a node is a list of
// candidate rows, each guarded by a literal that is true exactly when the row
// belongs to the team. Splits, choices and selectors become fresh variables.
//
// Budget: grounded rows count as they are encoded; whatever remains is the
// solver's decision limit.

#include <algorithm>
#include <climits>
#include <map>
#include <memory>

extern "C" {
#include "picosat/picosat.h"
}

#include "program.hpp"

namespace teamlogic::detail {

namespace {

struct Guarded {
    std::string row;
    int lit;
};
using GTeam = std::vector<Guarded>;

class Grounder {
public:
    Grounder(const Program& p, const Bound& b, std::uint64_t max_cells, const EvalBudget& opts)
        : p_(p), b_(b), max_(max_cells), opts_(opts), ps_(picosat_init(), &picosat_reset) {
        T_ = fresh();
        clause({T_});
    }

    std::uint64_t cells() const { return cells_; }
    PicoSAT* solver() { return ps_.get(); }

    GTeam initial(const Node& nd, const std::string& team) {
        size_t w = row_bytes(nd);
        GTeam out;
        for (size_t i = 0; i < team.size(); i += w) out.push_back({team.substr(i, w), T_});
        return out;
    }

    void encode(int id, const GTeam& x) {
        if (x.empty()) return;
        cells_ += x.size();
        if (cells_ > max_) throw BudgetExceeded{};
        const Node& nd = p_.nodes[id];
        if (opts_.flat_gate && nd.fo) {
            for (const auto& g : x)
                if (!tarski(p_, b_, id, bytes(g.row))) clause({-g.lit});
            return;
        }
        switch (nd.op) {
            case Op::Eq: case Op::NegEq: case Op::Rel: case Op::NegRel:
                for (const auto& g : x)
                    if (!literal_holds(nd, bytes(g.row), b_)) clause({-g.lit});
                return;
            case Op::Inc:
                inclusion(nd.t1, nd.t2, x);
                return;
            case Op::EquiExt:
                inclusion(nd.t1, nd.t2, x);
                inclusion(nd.t2, nd.t1, x);
                return;
            case Op::Exc: {
                auto a = occurs(nd.t1, x), b = occurs(nd.t2, x);
                for (const auto& [v, la] : a) {
                    auto it = b.find(v);
                    if (it != b.end()) clause({-la, -it->second});
                }
                return;
            }
            case Op::Dep: {
                auto occ = occurs(nd.t1, x);
                std::vector<int> lits;
                for (const auto& [v, l] : occ) lits.push_back(l);
                for (size_t i = 0; i < lits.size(); ++i)
                    for (size_t j = i + 1; j < lits.size(); ++j) clause({-lits[i], -lits[j]});
                return;
            }
            case Op::And:
                encode(nd.a, project(nd, 0, x));
                encode(nd.b, project(nd, 1, x));
                return;
            case Op::IOr: {
                int s = fresh();
                GTeam ga, gb;
                for (const auto& g : x) {
                    ga.push_back({g.row, and2(g.lit, s)});
                    gb.push_back({g.row, and2(g.lit, -s)});
                }
                encode(nd.a, project(nd, 0, ga));
                encode(nd.b, project(nd, 1, gb));
                return;
            }
            case Op::Or: case Op::TvpOr:
                split(nd, x);
                return;
            case Op::Exists: case Op::EIncQ: case Op::EExcQ:
                choose(nd, x);
                return;
            case Op::Forall: {
                std::vector<std::vector<int>> all;
                for (int v = 0; v < b_.n; ++v) all.push_back({v});
                Collector c;
                for (const auto& g : x)
                    for (const auto& v : all) c[child(nd, 0, g.row, v.data(), nullptr)].push_back(g.lit);
                encode(nd.a, merge(c));
                return;
            }
            case Op::Store: {
                Collector c;
                std::vector<int> stored(nd.t1.size());
                for (const auto& g : x) {
                    for (size_t j = 0; j < nd.t1.size(); ++j) stored[j] = eval(nd.t1[j], bytes(g.row), b_);
                    c[child(nd, 0, g.row, nullptr, stored.data())].push_back(g.lit);
                }
                encode(nd.a, merge(c));
                return;
            }
            case Op::UIncQ: case Op::UIncQExc: case Op::UExcQ: {
                auto img = image(nd.t1, x);
                bool inc = nd.op != Op::UExcQ;
                Collector c;
                std::vector<int> u;
                for (const auto& g : x) {
                    for (std::int64_t code = 0; code < int_pow(b_.n, nd.width); ++code) {
                        auto it = img.find(code);
                        int in = it == img.end() ? -T_ : it->second;
                        int lit = and2(g.lit, inc ? in : -in);
                        if (lit == -T_) continue;
                        u = tuple_at(code, nd.width, b_.n);
                        c[child(nd, 0, g.row, u.data(), nullptr)].push_back(lit);
                    }
                }
                encode(nd.a, merge(c));
                return;
            }
            case Op::Relativized:
                break;
        }
        throw EvalError("internal: unexpected node");
    }

    int T() const { return T_; }

private:
    using Collector = std::map<std::string, std::vector<int>>;

    static size_t row_bytes(const Node& nd) { return std::max<size_t>(1, nd.fv.size()); }
    static const std::uint8_t* bytes(const std::string& s) { return reinterpret_cast<const std::uint8_t*>(s.data()); }

    int fresh() { return picosat_inc_max_var(ps_.get()); }

    void clause(std::initializer_list<int> lits) { clause(std::vector<int>(lits)); }
    void clause(const std::vector<int>& lits) {
        for (int l : lits)
            if (l == T_) return;
        for (int l : lits)
            if (l != -T_) picosat_add(ps_.get(), l);
        picosat_add(ps_.get(), 0);
    }

    int and2(int a, int b) {
        if (a == -T_ || b == -T_ || a == -b) return -T_;
        if (a == T_) return b;
        if (b == T_ || a == b) return a;
        int v = fresh();
        clause({-v, a});
        clause({-v, b});
        clause({v, -a, -b});
        return v;
    }

    // v <-> OR lits
    int or_all(std::vector<int> lits) {
        std::sort(lits.begin(), lits.end());
        lits.erase(std::unique(lits.begin(), lits.end()), lits.end());
        lits.erase(std::remove(lits.begin(), lits.end(), -T_), lits.end());
        if (lits.empty()) return -T_;
        if (std::find(lits.begin(), lits.end(), T_) != lits.end()) return T_;
        if (lits.size() == 1) return lits[0];
        int v = fresh();
        std::vector<int> big{-v};
        for (int l : lits) {
            clause({v, -l});
            big.push_back(l);
        }
        clause(big);
        return v;
    }

    GTeam merge(const Collector& c) {
        GTeam out;
        for (const auto& [row, lits] : c) {
            int l = or_all(lits);
            if (l != -T_) out.push_back({row, l});
        }
        return out;
    }

    std::string child(const Node& nd, int side, const std::string& row, const int* chosen, const int* stored) const {
        int cid = side == 0 ? nd.a : nd.b;
        std::string out(row_bytes(p_.nodes[cid]), '\0');
        child_row(nd, side, bytes(row), chosen, stored, reinterpret_cast<std::uint8_t*>(out.data()));
        return out;
    }

    GTeam project(const Node& nd, int side, const GTeam& x) {
        Collector c;
        for (const auto& g : x) c[child(nd, side, g.row, nullptr, nullptr)].push_back(g.lit);
        return merge(c);
    }

    // value code -> literal that holds exactly when some member row has it
    std::map<std::int64_t, int> image(const std::vector<CTerm>& ts, const GTeam& x) {
        std::map<std::int64_t, std::vector<int>> by;
        for (const auto& g : x) by[eval_code(ts, bytes(g.row), b_)].push_back(g.lit);
        std::map<std::int64_t, int> out;
        for (auto& [v, lits] : by) out[v] = or_all(lits);
        return out;
    }

    // Same, but the literal is only implied by membership (enough for
    // constraints that are monotone in it).
    std::map<std::int64_t, int> occurs(const std::vector<CTerm>& ts, const GTeam& x) {
        std::map<std::int64_t, std::vector<int>> by;
        for (const auto& g : x) by[eval_code(ts, bytes(g.row), b_)].push_back(g.lit);
        std::map<std::int64_t, int> out;
        for (auto& [v, lits] : by) {
            if (lits.size() == 1 || std::find(lits.begin(), lits.end(), T_) != lits.end()) {
                out[v] = lits.size() == 1 ? lits[0] : T_;
                continue;
            }
            int o = fresh();
            for (int l : lits) clause({o, -l});
            out[v] = o;
        }
        return out;
    }

    void inclusion(const std::vector<CTerm>& t1, const std::vector<CTerm>& t2, const GTeam& x) {
        auto img = image(t2, x);
        for (const auto& g : x) {
            auto it = img.find(eval_code(t1, bytes(g.row), b_));
            clause({-g.lit, it == img.end() ? -T_ : it->second});
        }
    }

    void split(const Node& nd, const GTeam& x) {
        GTeam ga, gb;
        std::vector<int> ys_l, ys_r;
        for (const auto& g : x) {
            int yl = fresh(), yr = fresh();
            clause({-yl, g.lit});
            clause({-yr, g.lit});
            clause({-g.lit, yl, yr});
            ga.push_back({g.row, yl});
            gb.push_back({g.row, yr});
            ys_l.push_back(yl);
            ys_r.push_back(yr);
        }
        if (nd.op == Op::TvpOr && !nd.preserved.empty()) {
            int ne_l = fresh(), ne_r = fresh();
            for (size_t i = 0; i < x.size(); ++i) {
                clause({ne_l, -ys_l[i]});
                clause({ne_r, -ys_r[i]});
            }
            for (const auto& t : nd.preserved) {
                auto whole = occurs(t, x);
                auto left = image(t, ga), right = image(t, gb);
                for (const auto& [v, lx] : whole) {
                    auto il = left.find(v), ir = right.find(v);
                    clause({-ne_l, -ne_r, -lx, il == left.end() ? -T_ : il->second});
                    clause({-ne_l, -ne_r, -lx, ir == right.end() ? -T_ : ir->second});
                }
            }
        }
        encode(nd.a, project(nd, 0, ga));
        encode(nd.b, project(nd, 1, gb));
    }

    void choose(const Node& nd, const GTeam& x) {
        // Candidate tuples with the literal under which each may be chosen.
        std::vector<std::pair<std::vector<int>, int>> cands;
        if (nd.op == Op::Exists) {
            for (int v = 0; v < b_.n; ++v) cands.push_back({{v}, T_});
        } else if (nd.op == Op::EIncQ) {
            for (const auto& [code, l] : image(nd.t1, x)) cands.push_back({tuple_at(code, nd.width, b_.n), l});
        } else {
            auto occ = occurs(nd.t1, x);
            for (std::int64_t code = 0; code < int_pow(b_.n, nd.width); ++code) {
                auto it = occ.find(code);
                cands.push_back({tuple_at(code, nd.width, b_.n), it == occ.end() ? T_ : -it->second});
            }
        }
        Collector c;
        for (const auto& g : x) {
            std::vector<int> picks{-g.lit};
            for (const auto& [u, allowed] : cands) {
                if (allowed == -T_) continue;
                int v = fresh();
                clause({-v, g.lit});
                clause({-v, allowed});
                picks.push_back(v);
                c[child(nd, 0, g.row, u.data(), nullptr)].push_back(v);
            }
            clause(picks);
        }
        encode(nd.a, merge(c));
    }

    const Program& p_;
    const Bound& b_;
    std::uint64_t max_;
    EvalBudget opts_;
    std::unique_ptr<PicoSAT, void (*)(PicoSAT*)> ps_;
    int T_ = 0;
    std::uint64_t cells_ = 0;
};

}  // namespace

bool sat_satisfies(const Program& p, const Bound& b, const std::string& rows, std::uint64_t max_nodes,
                   const EvalBudget& opts, std::uint64_t& used) {
    Grounder g(p, b, max_nodes, opts);
    try {
        g.encode(p.root, g.initial(p.nodes[p.root], rows));
    } catch (const BudgetExceeded&) {
        used = g.cells();
        throw;
    }
    std::uint64_t left = max_nodes - g.cells();
    int limit = left > static_cast<std::uint64_t>(INT_MAX) ? -1 : static_cast<int>(left);
    int r = picosat_sat(g.solver(), limit);
    used = g.cells() + picosat_decisions(g.solver());
    if (r == PICOSAT_UNKNOWN) throw BudgetExceeded{};
    return r == PICOSAT_SATISFIABLE;
}

}  // namespace teamlogic::detail
