#include "teamlogic/structures.hpp"

#include <algorithm>

namespace teamlogic {

std::int64_t int_pow(std::int64_t base, int exp) {
    std::int64_t r = 1;
    for (int i = 0; i < exp; ++i) r *= base;
    return r;
}

std::int64_t tuple_index(const int* t, int k, int n) {
    std::int64_t idx = 0;
    for (int i = 0; i < k; ++i) idx = idx * n + t[i];
    return idx;
}

Row tuple_at(std::int64_t index, int k, int n) {
    Row t(k);
    for (int i = k - 1; i >= 0; --i) {
        t[i] = static_cast<int>(index % n);
        index /= n;
    }
    return t;
}

bool Relation::contains(const int* tuple, int k, int n) const {
    if (arity < 0 || bits.empty()) return false;
    if (k != arity) throw StructureError("relation used with arity " + std::to_string(k) + ", declared " + std::to_string(arity));
    return bits[tuple_index(tuple, k, n)] != 0;
}

Relation make_relation(int n, int arity, const RowSet& tuples) {
    Relation r;
    r.arity = arity;
    r.bits.assign(int_pow(n, arity), 0);
    for (const auto& t : tuples) {
        if (static_cast<int>(t.size()) != arity) throw StructureError("tuple arity mismatch");
        for (int v : t)
            if (v < 0 || v >= n) throw StructureError("tuple element outside the universe");
        r.bits[tuple_index(t.data(), arity, n)] = 1;
    }
    return r;
}

RowSet relation_tuples(const Relation& r, int n) {
    RowSet out;
    if (r.arity < 0) return out;
    for (std::int64_t i = 0; i < static_cast<std::int64_t>(r.bits.size()); ++i)
        if (r.bits[i]) out.insert(tuple_at(i, r.arity, n));
    return out;
}

Relation full_relation(int n, int arity) {
    Relation r;
    r.arity = arity;
    r.bits.assign(int_pow(n, arity), 1);
    return r;
}

void set_relation(Model& m, const std::string& name, int arity, const RowSet& tuples) {
    m.relations[name] = make_relation(m.size, arity, tuples);
}

void set_function(Model& m, const std::string& name, int arity, const std::function<int(const Row&)>& f) {
    Function fn;
    fn.arity = arity;
    auto count = int_pow(m.size, arity);
    for (std::int64_t i = 0; i < count; ++i) fn.table.push_back(f(tuple_at(i, arity, m.size)));
    m.functions[name] = fn;
}

const Relation* Model::find_relation(const std::string& name) const {
    auto v = relvars.find(name);
    if (v != relvars.end()) return &v->second;
    auto r = relations.find(name);
    return r == relations.end() ? nullptr : &r->second;
}

void Model::validate() const {
    if (size < 1) throw StructureError("universe must be nonempty");
    auto check_rel = [&](const std::string& name, const Relation& r) {
        if (r.arity < 0) {
            if (!r.bits.empty()) throw StructureError("relation " + name + " has no arity");
            return;
        }
        if (r.arity < 1) throw StructureError("relation " + name + " must have arity >= 1");
        if (static_cast<std::int64_t>(r.bits.size()) != int_pow(size, r.arity))
            throw StructureError("relation " + name + " has the wrong table size");
    };
    for (const auto& [n, r] : relations) check_rel(n, r);
    for (const auto& [n, r] : relvars) check_rel(n, r);
    for (const auto& [n, f] : functions) {
        if (f.arity < 1) throw StructureError("function " + n + " must have arity >= 1");
        if (static_cast<std::int64_t>(f.table.size()) != int_pow(size, f.arity))
            throw StructureError("function " + n + " is not total");
        for (int v : f.table)
            if (v < 0 || v >= size) throw StructureError("function " + n + " leaves the universe");
    }
    for (const auto& [n, c] : constants)
        if (c < 0 || c >= size) throw StructureError("constant " + n + " outside the universe");
}

Vocabulary vocabulary_of(const Model& m) {
    Vocabulary v;
    for (const auto& [n, r] : m.relations)
        if (r.arity >= 1) v.relations[n] = r.arity;
    for (const auto& [n, f] : m.functions) v.functions[n] = f.arity;
    for (const auto& [n, c] : m.constants) v.constants.insert(n);
    return v;
}

Team::Team(std::vector<std::string> dom, RowSet r) : domain(std::move(dom)), rows(std::move(r)) {
    for (size_t i = 0; i < domain.size(); ++i)
        for (size_t j = i + 1; j < domain.size(); ++j)
            if (domain[i] == domain[j]) throw StructureError("team domain repeats variable " + domain[i]);
    for (const auto& row : rows)
        if (row.size() != domain.size()) throw StructureError("team row length differs from the domain");
}

int Team::index_of(const std::string& var) const {
    auto it = std::find(domain.begin(), domain.end(), var);
    return it == domain.end() ? -1 : static_cast<int>(it - domain.begin());
}

Assignment Team::assignment(const Row& row) const {
    Assignment s;
    for (size_t i = 0; i < domain.size(); ++i) s[domain[i]] = row[i];
    return s;
}

Team singleton_empty_team() { return Team({}, {Row{}}); }

Team team_of(const std::vector<Assignment>& assignments, const std::vector<std::string>& domain) {
    RowSet rows;
    for (const auto& s : assignments) {
        Row r;
        for (const auto& v : domain) {
            auto it = s.find(v);
            if (it == s.end()) throw StructureError("assignment misses variable " + v);
            r.push_back(it->second);
        }
        rows.insert(r);
    }
    return Team(domain, std::move(rows));
}

int eval_term(const Model& m, const Assignment& s, const Term& t) {
    switch (t.kind) {
        case Term::Kind::Var: {
            auto it = s.find(t.name);
            if (it == s.end()) throw StructureError("unbound variable " + t.name);
            return it->second;
        }
        case Term::Kind::Const: {
            auto it = m.constants.find(t.name);
            if (it == m.constants.end()) throw StructureError("unknown constant " + t.name);
            return it->second;
        }
        case Term::Kind::App: {
            auto it = m.functions.find(t.name);
            if (it == m.functions.end()) throw StructureError("unknown function " + t.name);
            if (static_cast<int>(t.args.size()) != it->second.arity)
                throw StructureError("arity mismatch for function " + t.name);
            Row args;
            for (const auto& a : t.args) args.push_back(eval_term(m, s, a));
            return it->second.table[tuple_index(args.data(), it->second.arity, m.size)];
        }
    }
    return 0;
}

RowSet team_values(const Model& m, const Team& x, const Tuple& ts) {
    auto vs = tuple_variables(ts);
    for (const auto& v : vs)
        if (x.index_of(v) < 0) throw StructureError("unbound variable " + v);
    RowSet out;
    for (const auto& row : x.rows) {
        auto s = x.assignment(row);
        Row val;
        for (const auto& t : ts) val.push_back(eval_term(m, s, t));
        out.insert(val);
    }
    return out;
}

namespace {

std::vector<int> target_slots(std::vector<std::string>& domain, const std::vector<std::string>& xs) {
    std::vector<int> slots;
    for (const auto& x : xs) {
        auto it = std::find(domain.begin(), domain.end(), x);
        if (it == domain.end()) {
            domain.push_back(x);
            slots.push_back(static_cast<int>(domain.size()) - 1);
        } else {
            slots.push_back(static_cast<int>(it - domain.begin()));
        }
    }
    return slots;
}

}  // namespace

Team extend_with_set(const Team& x, const RowSet& a, const std::vector<std::string>& xs) {
    for (const auto& t : a)
        if (t.size() != xs.size()) throw StructureError("value tuple arity differs from the variable tuple");
    Team out;
    out.domain = x.domain;
    auto slots = target_slots(out.domain, xs);
    for (const auto& row : x.rows) {
        Row base = row;
        base.resize(out.domain.size(), 0);
        for (const auto& t : a) {
            Row r = base;
            for (size_t i = 0; i < slots.size(); ++i) r[slots[i]] = t[i];
            out.rows.insert(r);
        }
    }
    return out;
}

Team extend_with_choice(const Team& x, const std::function<RowSet(const Row&)>& f,
                        const std::vector<std::string>& xs) {
    Team out;
    out.domain = x.domain;
    auto slots = target_slots(out.domain, xs);
    for (const auto& row : x.rows) {
        RowSet choice = f(row);
        if (choice.empty()) throw StructureError("choice function gives an empty set");
        Row base = row;
        base.resize(out.domain.size(), 0);
        for (const auto& t : choice) {
            if (t.size() != xs.size()) throw StructureError("value tuple arity differs from the variable tuple");
            Row r = base;
            for (size_t i = 0; i < slots.size(); ++i) r[slots[i]] = t[i];
            out.rows.insert(r);
        }
    }
    return out;
}

Team restrict(const Team& x, const std::vector<std::string>& vars) {
    std::vector<int> idx;
    for (const auto& v : vars) {
        int i = x.index_of(v);
        if (i < 0) throw StructureError("restriction variable " + v + " not in the team domain");
        idx.push_back(i);
    }
    RowSet rows;
    for (const auto& row : x.rows) {
        Row r;
        for (int i : idx) r.push_back(row[i]);
        rows.insert(r);
    }
    return Team(vars, std::move(rows));
}

Team team_union(const Team& a, const Team& b) {
    if (a.domain != b.domain) throw StructureError("union of teams over different domains");
    Team out = a;
    out.rows.insert(b.rows.begin(), b.rows.end());
    return out;
}

Model bind_relvars(const Model& m, const std::map<std::string, RowSet>& bindings,
                   const std::map<std::string, int>& arities) {
    Model out = m;
    for (const auto& [name, tuples] : bindings) {
        int k = -1;
        auto a = arities.find(name);
        if (a != arities.end()) k = a->second;
        else if (!tuples.empty()) k = static_cast<int>(tuples.begin()->size());
        if (k < 0) {
            out.relvars[name] = Relation{};
            continue;
        }
        out.relvars[name] = make_relation(m.size, k, tuples);
    }
    return out;
}

Model submodel(const Model& m, const std::set<int>& universe) {
    if (universe.empty()) throw StructureError("submodel universe must be nonempty");
    if (!m.functions.empty() || !m.constants.empty())
        throw StructureError("submodels are defined for relational vocabularies only");
    std::vector<int> old(universe.begin(), universe.end());
    std::map<int, int> renumber;
    for (size_t i = 0; i < old.size(); ++i) renumber[old[i]] = static_cast<int>(i);
    auto restrict_rel = [&](const Relation& r) {
        if (r.arity < 0) return r;
        RowSet kept;
        for (const auto& t : relation_tuples(r, m.size)) {
            Row nt;
            bool inside = true;
            for (int v : t) {
                auto it = renumber.find(v);
                if (it == renumber.end()) {
                    inside = false;
                    break;
                }
                nt.push_back(it->second);
            }
            if (inside) kept.insert(nt);
        }
        return make_relation(static_cast<int>(old.size()), r.arity, kept);
    };
    Model out;
    out.size = static_cast<int>(old.size());
    for (const auto& [n, r] : m.relations) out.relations[n] = restrict_rel(r);
    for (const auto& [n, r] : m.relvars) out.relvars[n] = restrict_rel(r);
    return out;
}

}  // namespace teamlogic
