#include <algorithm>
#include <unordered_map>

#include "program.hpp"
#include "teamlogic/desugar.hpp"

namespace teamlogic::detail {

namespace {

int intern(std::vector<std::string>& table, const std::string& name) {
    auto it = std::find(table.begin(), table.end(), name);
    if (it != table.end()) return static_cast<int>(it - table.begin());
    table.push_back(name);
    return static_cast<int>(table.size()) - 1;
}

int slot_of(const std::vector<std::string>& fv, const std::string& v) {
    auto it = std::find(fv.begin(), fv.end(), v);
    if (it == fv.end()) throw EvalError("internal: variable " + v + " missing from a node's free variables");
    return static_cast<int>(it - fv.begin());
}

class Compiler {
public:
    Compiler(Program& p, Mode mode, const Formula& root) : p_(p), mode_(mode), fresh_(root) {}

    int node(const FormulaPtr& f) {
        auto it = memo_.find(f.get());
        if (it != memo_.end()) return it->second;
        int id = build(f);
        keep_.push_back(f);
        memo_.emplace(f.get(), id);
        return id;
    }

private:
    const std::vector<std::string>& fv(const FormulaPtr& fp) {
        auto it = fv_.find(fp.get());
        if (it != fv_.end()) return it->second;
        const Formula& f = *fp;
        std::vector<std::string> out;
        auto add = [&](const std::string& v) {
            if (std::find(out.begin(), out.end(), v) == out.end()) out.push_back(v);
        };
        auto add_tuple = [&](const Tuple& t) {
            for (const auto& v : tuple_variables(t)) add(v);
        };
        switch (f.op) {
            case Op::And: case Op::Or: case Op::IOr: case Op::TvpOr:
                for (const auto& v : fv(f.a)) add(v);
                for (const auto& v : fv(f.b)) add(v);
                for (const auto& t : f.preserved) add_tuple(t);
                break;
            case Op::Exists: case Op::Forall:
                for (const auto& v : fv(f.a))
                    if (v != f.vars[0]) add(v);
                break;
            case Op::Store: case Op::EIncQ: case Op::EExcQ: case Op::UIncQ: case Op::UExcQ: case Op::UIncQExc:
                add_tuple(f.lhs);
                for (const auto& v : fv(f.a))
                    if (std::find(f.vars.begin(), f.vars.end(), v) == f.vars.end()) add(v);
                break;
            case Op::Relativized:
                out = free_variables(f);
                break;
            default:
                add_tuple(f.lhs);
                add_tuple(f.rhs);
        }
        keep_.push_back(fp);
        return fv_.emplace(fp.get(), std::move(out)).first->second;
    }

    CTerm term(const Term& t, const std::vector<std::string>& vars) {
        CTerm c;
        switch (t.kind) {
            case Term::Kind::Var:
                c.k = CTerm::K::Slot;
                c.idx = slot_of(vars, t.name);
                break;
            case Term::Kind::Const:
                c.k = CTerm::K::Const;
                c.idx = intern(p_.constants, t.name);
                break;
            case Term::Kind::App:
                c.k = CTerm::K::App;
                c.idx = intern(p_.functions, t.name);
                for (const auto& a : t.args) c.args.push_back(term(a, vars));
                break;
        }
        return c;
    }

    std::vector<CTerm> tuple(const Tuple& ts, const std::vector<std::string>& vars) {
        std::vector<CTerm> out;
        for (const auto& t : ts) out.push_back(term(t, vars));
        return out;
    }

    std::vector<SlotSource> map_child(const std::vector<std::string>& parent, const std::vector<std::string>& child,
                                      const std::vector<std::string>& chosen, SlotSource::Kind kind) {
        std::vector<SlotSource> out;
        for (const auto& v : child) {
            auto c = std::find(chosen.begin(), chosen.end(), v);
            if (c != chosen.end()) out.push_back({kind, static_cast<int>(c - chosen.begin())});
            else out.push_back({SlotSource::Kind::Parent, slot_of(parent, v)});
        }
        return out;
    }

    int build(const FormulaPtr& fp) {
        const Formula& f = *fp;
        if (f.op == Op::Relativized) {
            if (mode_ == Mode::CoreOnly) throw EvalError("core-only evaluation given a relativization");
            return node(relativize(f.a, f.name, fresh_));
        }
        if (mode_ == Mode::CoreOnly && is_sugar(f.op))
            throw EvalError(std::string("core-only evaluation given sugar node ") + op_name(f.op));

        Node nd;
        nd.op = f.op;
        nd.fv = fv(fp);
        if (nd.fv.size() > 64) throw EvalError("more than 64 free variables in one subformula");
        int a = -1, b = -1;
        if (f.a) a = node(f.a);
        if (f.b) b = node(f.b);
        nd.a = a;
        nd.b = b;
        const std::vector<std::string> none;

        switch (f.op) {
            case Op::Eq: case Op::NegEq:
                nd.t1 = {term(f.lhs[0], nd.fv)};
                nd.t2 = {term(f.rhs[0], nd.fv)};
                break;
            case Op::Rel: case Op::NegRel:
                nd.rel = intern(p_.relations, f.name);
                nd.t1 = tuple(f.lhs, nd.fv);
                break;
            case Op::Inc: case Op::Exc: case Op::EquiExt:
                nd.t1 = tuple(f.lhs, nd.fv);
                nd.t2 = tuple(f.rhs, nd.fv);
                break;
            case Op::Dep:
                nd.t1 = {term(f.lhs[0], nd.fv)};
                break;
            case Op::And: case Op::Or: case Op::IOr: case Op::TvpOr:
                nd.amap = map_child(nd.fv, p_.nodes[a].fv, none, SlotSource::Kind::Parent);
                nd.bmap = map_child(nd.fv, p_.nodes[b].fv, none, SlotSource::Kind::Parent);
                for (const auto& t : f.preserved) nd.preserved.push_back(tuple(t, nd.fv));
                break;
            case Op::Exists: case Op::Forall:
                nd.width = 1;
                nd.amap = map_child(nd.fv, p_.nodes[a].fv, f.vars, SlotSource::Kind::Chosen);
                break;
            case Op::Store:
                nd.t1 = tuple(f.lhs, nd.fv);
                nd.amap = map_child(nd.fv, p_.nodes[a].fv, f.vars, SlotSource::Kind::Stored);
                break;
            case Op::EIncQ: case Op::EExcQ: case Op::UIncQ: case Op::UExcQ: case Op::UIncQExc:
                nd.t1 = tuple(f.lhs, nd.fv);
                nd.width = static_cast<int>(f.vars.size());
                nd.amap = map_child(nd.fv, p_.nodes[a].fv, f.vars, SlotSource::Kind::Chosen);
                break;
            case Op::Relativized:
                break;
        }

        auto fo = [&](int i) { return i < 0 || p_.nodes[i].fo; };
        auto dc = [&](int i) { return i < 0 || p_.nodes[i].dc; };
        switch (f.op) {
            case Op::Eq: case Op::NegEq: case Op::Rel: case Op::NegRel:
                nd.fo = nd.dc = true;
                break;
            case Op::And: case Op::Or: case Op::Exists: case Op::Forall:
                nd.fo = fo(a) && fo(b);
                nd.dc = dc(a) && dc(b);
                break;
            case Op::Exc: case Op::Dep:
                nd.dc = true;
                break;
            case Op::IOr: case Op::Store: case Op::EExcQ: case Op::UIncQ: case Op::UIncQExc:
                nd.dc = dc(a) && dc(b);
                break;
            default:
                break;
        }
        p_.nodes.push_back(std::move(nd));
        return static_cast<int>(p_.nodes.size()) - 1;
    }

    Program& p_;
    Mode mode_;
    FreshSupply fresh_;
    std::unordered_map<const Formula*, int> memo_;
    std::unordered_map<const Formula*, std::vector<std::string>> fv_;
    std::vector<FormulaPtr> keep_;
};

}  // namespace

Program compile(const FormulaPtr& f, Mode mode) {
    Program p;
    Compiler c(p, mode, *f);
    p.root = c.node(f);
    return p;
}

Bound bind(const Program& p, const Model& m) {
    if (m.size > 255) throw EvalError("universes above 255 elements are not supported");
    Bound b;
    b.n = m.size;
    for (const auto& r : p.relations) {
        const Relation* rel = m.find_relation(r);
        if (!rel) throw EvalError("relation " + r + " is not interpreted in the model");
        b.rels.push_back(rel);
    }
    for (const auto& f : p.functions) {
        auto it = m.functions.find(f);
        if (it == m.functions.end()) throw EvalError("function " + f + " is not interpreted in the model");
        b.funs.push_back(&it->second);
    }
    for (const auto& c : p.constants) {
        auto it = m.constants.find(c);
        if (it == m.constants.end()) throw EvalError("constant " + c + " is not interpreted in the model");
        b.consts.push_back(it->second);
    }
    return b;
}

bool literal_holds(const Node& nd, const std::uint8_t* row, const Bound& b) {
    switch (nd.op) {
        case Op::Eq: return eval(nd.t1[0], row, b) == eval(nd.t2[0], row, b);
        case Op::NegEq: return eval(nd.t1[0], row, b) != eval(nd.t2[0], row, b);
        case Op::Rel: case Op::NegRel: {
            int args[16];
            int k = static_cast<int>(nd.t1.size());
            if (k > 16) throw EvalError("relation arity above 16");
            for (int i = 0; i < k; ++i) args[i] = eval(nd.t1[i], row, b);
            bool in;
            try {
                in = b.rels[nd.rel]->contains(args, k, b.n);
            } catch (const StructureError& e) {
                throw EvalError(e.what());
            }
            return nd.op == Op::Rel ? in : !in;
        }
        default:
            throw EvalError("internal: not a literal");
    }
}

void child_row(const Node& nd, int side, const std::uint8_t* row, const int* chosen, const int* stored,
               std::uint8_t* out) {
    const auto& map = side == 0 ? nd.amap : nd.bmap;
    for (size_t i = 0; i < map.size(); ++i) {
        const auto& s = map[i];
        switch (s.kind) {
            case SlotSource::Kind::Parent: out[i] = row[s.idx]; break;
            case SlotSource::Kind::Chosen: out[i] = static_cast<std::uint8_t>(chosen[s.idx]); break;
            case SlotSource::Kind::Stored: out[i] = static_cast<std::uint8_t>(stored[s.idx]); break;
        }
    }
}

bool tarski(const Program& p, const Bound& b, int node, const std::uint8_t* row) {
    const Node& nd = p.nodes[node];
    switch (nd.op) {
        case Op::Eq: case Op::NegEq: case Op::Rel: case Op::NegRel:
            return literal_holds(nd, row, b);
        case Op::And: case Op::Or: {
            std::uint8_t ra[64], rb[64];
            child_row(nd, 0, row, nullptr, nullptr, ra);
            child_row(nd, 1, row, nullptr, nullptr, rb);
            bool l = tarski(p, b, nd.a, ra);
            if (nd.op == Op::And) return l && tarski(p, b, nd.b, rb);
            return l || tarski(p, b, nd.b, rb);
        }
        case Op::Exists: case Op::Forall: {
            std::uint8_t rc[64];
            for (int v = 0; v < b.n; ++v) {
                child_row(nd, 0, row, &v, nullptr, rc);
                bool t = tarski(p, b, nd.a, rc);
                if (nd.op == Op::Exists && t) return true;
                if (nd.op == Op::Forall && !t) return false;
            }
            return nd.op == Op::Forall;
        }
        default:
            throw EvalError(std::string("Tarski evaluation given a non-first-order node ") + op_name(nd.op));
    }
}

}  // namespace teamlogic::detail
