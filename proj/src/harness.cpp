#include "teamlogic/harness.hpp"

#include <algorithm>
#include <random>
#include <sstream>

#include "json.hpp"
#include "teamlogic/corpus.hpp"
#include "teamlogic/desugar.hpp"
#include "teamlogic/parse.hpp"
#include "teamlogic/print.hpp"

namespace teamlogic {

using nlohmann::json;

Vocabulary default_vocabulary() {
    Vocabulary v;
    v.relations = {{"U", 1}, {"E", 2}};
    return v;
}

// ---------------------------------------------------------------- cases

namespace {

std::uint64_t pow2(std::int64_t bits) {
    if (bits > 62) throw EvalError("relation has too many tuples to enumerate");
    return std::uint64_t{1} << bits;
}

std::uint64_t binom(std::uint64_t n, std::uint64_t k) {
    if (k > n) return 0;
    std::uint64_t r = 1;
    for (std::uint64_t i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

std::uint64_t team_count(int n, size_t vars, int max_rows, bool nonempty) {
    std::uint64_t rows = static_cast<std::uint64_t>(int_pow(n, static_cast<int>(vars)));
    std::uint64_t c = 0;
    for (int r = nonempty ? 1 : 0; r <= max_rows; ++r) c += binom(rows, r);
    return c;
}

// Number of teams over the full variable list, with at most `max_rows` rows,
// whose projection has exactly `t` rows: Σ_{s≤max} [z^s] ((1+z)^m − 1)^t,
// where m is the size of each projection fibre.
std::uint64_t projection_weight(std::uint64_t m, size_t t, int max_rows) {
    std::vector<std::uint64_t> poly{1};
    std::vector<std::uint64_t> fibre(m + 1);
    for (std::uint64_t s = 1; s <= m; ++s) fibre[s] = binom(m, s);
    for (size_t i = 0; i < t; ++i) {
        std::vector<std::uint64_t> next(std::min<size_t>(poly.size() + m, max_rows + 1), 0);
        for (size_t a = 0; a < poly.size(); ++a)
            for (size_t b = 1; b <= m && a + b < next.size(); ++b) next[a + b] += poly[a] * fibre[b];
        poly = std::move(next);
    }
    std::uint64_t w = 0;
    for (size_t s = 0; s < poly.size() && s <= static_cast<size_t>(max_rows); ++s) w += poly[s];
    return w;
}

struct ModelIter {
    int n;
    std::vector<std::pair<std::string, int>> rels;
    std::vector<std::uint64_t> masks, tops;

    ModelIter(int n_, std::vector<std::pair<std::string, int>> r) : n(n_), rels(std::move(r)) {
        for (const auto& [name, k] : rels) {
            masks.push_back(0);
            tops.push_back(pow2(int_pow(n, k)) - 1);
        }
    }

    Model model() const {
        Model m;
        m.size = n;
        for (size_t i = 0; i < rels.size(); ++i) {
            Relation r;
            r.arity = rels[i].second;
            r.bits.assign(int_pow(n, r.arity), 0);
            for (size_t b = 0; b < r.bits.size(); ++b) r.bits[b] = (masks[i] >> b) & 1u;
            m.relations[rels[i].first] = std::move(r);
        }
        return m;
    }

    bool advance() {
        for (size_t i = rels.size(); i-- > 0;) {
            if (masks[i] < tops[i]) {
                ++masks[i];
                return true;
            }
            masks[i] = 0;
        }
        return false;
    }
};

// Calls fn on every subset of `all` with between lo and hi elements, by size
// then lexicographically.
template <class F>
bool for_subsets(const std::vector<Row>& all, int lo, int hi, F&& fn) {
    size_t n = all.size();
    for (int size = lo; size <= hi && static_cast<size_t>(size) <= n; ++size) {
        std::vector<size_t> idx(size);
        for (int i = 0; i < size; ++i) idx[i] = i;
        for (;;) {
            RowSet rows;
            for (size_t i : idx) rows.insert(all[i]);
            if (!fn(rows)) return false;
            int i = size - 1;
            while (i >= 0 && idx[i] == n - size + i) --i;
            if (i < 0) break;
            ++idx[i];
            for (int j = i + 1; j < size; ++j) idx[j] = idx[j - 1] + 1;
        }
    }
    return true;
}

std::vector<Row> all_rows(int n, size_t v) {
    std::vector<Row> out;
    for (std::int64_t i = 0; i < int_pow(n, static_cast<int>(v)); ++i) out.push_back(tuple_at(i, static_cast<int>(v), n));
    return out;
}

}  // namespace

std::uint64_t count_cases(const CaseSpace& space) {
    std::uint64_t total = 0;
    for (int n = space.min_universe; n <= space.max_universe; ++n) {
        std::uint64_t models = 1;
        for (const auto& [r, k] : space.relations) models *= pow2(int_pow(n, k));
        total += models * team_count(n, space.team_vars.size(), space.max_team_rows, space.nonempty_teams_only);
    }
    return total;
}

std::uint64_t enumerate_projected(const CaseSpace& space, const std::set<std::string>& rels,
                                  const std::vector<std::string>& vars, const CaseFn& fn) {
    for (const auto& v : vars)
        if (std::find(space.team_vars.begin(), space.team_vars.end(), v) == space.team_vars.end())
            throw EvalError("projection variable " + v + " is not a team variable of the space");
    std::vector<std::pair<std::string, int>> varying;
    for (const auto& [r, k] : space.relations)
        if (rels.count(r)) varying.push_back({r, k});
    std::uint64_t visited = 0;
    for (int n = space.min_universe; n <= space.max_universe; ++n) {
        std::uint64_t fixed = 1;
        for (const auto& [r, k] : space.relations)
            if (!rels.count(r)) fixed *= pow2(int_pow(n, k));
        std::uint64_t fibre = static_cast<std::uint64_t>(int_pow(n, static_cast<int>(space.team_vars.size() - vars.size())));
        auto rows = all_rows(n, vars.size());
        ModelIter it(n, varying);
        do {
            Case c;
            c.model = it.model();
            bool go = for_subsets(rows, space.nonempty_teams_only ? 1 : 0, space.max_team_rows, [&](const RowSet& s) {
                std::uint64_t w = projection_weight(fibre, s.size(), space.max_team_rows);
                if (w == 0) return true;
                c.team = Team(vars, s);
                c.weight = w * fixed;
                visited += c.weight;
                return fn(c);
            });
            if (!go) return visited;
        } while (it.advance());
    }
    return visited;
}

std::uint64_t enumerate_cases(const CaseSpace& space, const CaseFn& fn) {
    std::set<std::string> all;
    for (const auto& [r, k] : space.relations) all.insert(r);
    if (space.sample_cap == 0 || count_cases(space) <= space.sample_cap)
        return enumerate_projected(space, all, space.team_vars, fn);
    std::mt19937_64 rng(space.seed);
    std::uint64_t visited = 0;
    for (std::uint64_t i = 0; i < space.samples; ++i) {
        int n = std::uniform_int_distribution<int>(space.min_universe, space.max_universe)(rng);
        Case c;
        c.model.size = n;
        for (const auto& [r, k] : space.relations) {
            Relation rel;
            rel.arity = k;
            rel.bits.assign(int_pow(n, k), 0);
            for (auto& b : rel.bits) b = rng() & 1u;
            c.model.relations[r] = std::move(rel);
        }
        auto rows = all_rows(n, space.team_vars.size());
        int lo = space.nonempty_teams_only ? 1 : 0;
        int hi = std::min<int>(space.max_team_rows, static_cast<int>(rows.size()));
        int size = std::uniform_int_distribution<int>(lo, hi)(rng);
        std::shuffle(rows.begin(), rows.end(), rng);
        c.team = Team(space.team_vars, RowSet(rows.begin(), rows.begin() + size));
        ++visited;
        if (!fn(c)) break;
    }
    return visited;
}

// ---------------------------------------------------------------- reports

void Report::merge(const Report& other) {
    cases += other.cases;
    exhausted += other.exhausted;
    failures.insert(failures.end(), other.failures.begin(), other.failures.end());
    lines.insert(lines.end(), other.lines.begin(), other.lines.end());
}

std::string Report::text() const {
    std::ostringstream out;
    for (const auto& l : lines) out << l << "\n";
    for (const auto& f : failures) out << "failure: " << f << "\n";
    out << suite << ": " << (passed() ? "PASS" : "FAIL") << " (" << cases << " cases, " << failures.size()
        << " failures, " << exhausted << " exhausted)\n";
    return out.str();
}

std::string Report::json() const {
    nlohmann::json fs = nlohmann::json::array();
    for (const auto& f : failures) fs.push_back(nlohmann::json::parse(f));
    return nlohmann::json{{"suite", suite}, {"cases", cases}, {"failures", fs}, {"exhausted", exhausted}}.dump();
}

namespace {

std::string verdict(const EvalOutcome& o) {
    if (o.exhausted()) return "budget-exceeded";
    return *o.value ? "true" : "false";
}

json case_json(const Case& c) {
    return json{{"model", json::parse(model_to_json(c.model))}, {"team", json::parse(team_to_json(c.team))}};
}

void fail(Report& r, json j, const HarnessOptions& opts) {
    if (r.failures.size() < opts.max_failures) r.failures.push_back(j.dump());
    else if (r.failures.size() == opts.max_failures) r.failures.push_back(json{{"note", "further failures omitted"}}.dump());
}

std::vector<std::string> ordered_free(const FormulaPtr& f, const CaseSpace& space) {
    auto fv = free_variables(*f);
    std::vector<std::string> out;
    for (const auto& v : space.team_vars)
        if (std::find(fv.begin(), fv.end(), v) != fv.end()) out.push_back(v);
    if (out.size() != fv.size()) throw EvalError("formula has free variables outside the team variables");
    return out;
}

std::set<std::string> used_relations(const Formula& f) { return relation_symbols(f); }

RelValue image(const Team& x, const std::vector<std::string>& vars) {
    RelValue out;
    out.arity = static_cast<int>(vars.size());
    out.tuples = restrict(x, vars).rows;
    return out;
}

}  // namespace

// ---------------------------------------------------------------- equivalence

Report check_equivalence_inex_eso(const FormulaPtr& phi, const TranslationContext& ctx, const CaseSpace& space,
                                  const HarnessOptions& opts) {
    return check_forward_translation(phi, inex_to_eso(phi, ctx), ctx, space, opts);
}

Report check_forward_translation(const FormulaPtr& phi, const EsoFormula& big, const TranslationContext& ctx,
                                 const CaseSpace& space, const HarnessOptions& opts) {
    Report r;
    r.suite = "equivalence:" + pretty_print(phi);
    Evaluator team(phi, opts.team);
    auto rels = used_relations(*phi);
    bool sentence = ctx.free_tuple.empty();
    // A sentence is read on {∅}; the empty team would make the team side
    // trivially true.
    CaseSpace cases = space;
    if (sentence) cases.nonempty_teams_only = true;
    r.cases = enumerate_projected(cases, rels, ctx.free_tuple, [&](const Case& c) {
        auto tv = team.satisfies(c.model, c.team);
        RelAssignment bind;
        if (!sentence) bind[ctx.free_relvar] = image(c.team, ctx.free_tuple);
        auto ev = eso_satisfies(c.model, big, bind, opts.eso);
        if (tv.exhausted() || ev.exhausted()) {
            r.exhausted += c.weight;
            return true;
        }
        if (*tv.value != *ev.value) {
            json j = case_json(c);
            j["formula"] = pretty_print(phi);
            j["translation"] = pretty_print(big);
            j["team_verdict"] = verdict(tv);
            j["eso_verdict"] = verdict(ev);
            j["mutation"] = mutation_name(ctx.mutation);
            fail(r, j, opts);
            if (opts.stop_at_first_failure) return false;
        }
        return true;
    });
    return r;
}

Report check_equivalence_eso_inex(const EsoFormula& phi, const TranslationContext& ctx, const CaseSpace& space,
                                  const HarnessOptions& opts) {
    Report r;
    r.suite = "equivalence:" + pretty_print(phi);
    FormulaPtr f = eso_to_inex(phi, ctx);
    Evaluator team(f, opts.team);
    std::set<std::string> tv_vars;
    for (const auto& [rv, k] : phi.free_relvars)
        for (const auto& v : ctx.relvar_tuples.at(rv)) tv_vars.insert(v);
    std::vector<std::string> vars;
    for (const auto& v : space.team_vars)
        if (tv_vars.count(v)) vars.push_back(v);
    if (vars.size() != tv_vars.size()) throw EvalError("relvar tuples use variables outside the space");
    CaseSpace nonempty = space;
    nonempty.nonempty_teams_only = true;
    auto rels = used_relations(*phi.matrix);
    r.cases = enumerate_projected(nonempty, rels, vars, [&](const Case& c) {
        auto tv = team.satisfies(c.model, c.team);
        RelAssignment bind;
        for (const auto& [rv, a] : phi.free_relvars) {
            RelValue img = image(c.team, ctx.relvar_tuples.at(rv));
            RelValue v;
            v.arity = a;
            // Undo the padding: keep ā when its k-padding is in the image.
            for (const auto& t : img.tuples) {
                bool padded = true;
                for (size_t i = a; i < t.size(); ++i) padded = padded && t[i] == t[a - 1];
                if (padded) v.tuples.insert(Row(t.begin(), t.begin() + a));
            }
            bind[rv] = v;
        }
        auto ev = eso_satisfies(c.model, phi, bind, opts.eso);
        if (tv.exhausted() || ev.exhausted()) {
            r.exhausted += c.weight;
            return true;
        }
        if (*tv.value != *ev.value) {
            json j = case_json(c);
            j["eso"] = pretty_print(phi);
            j["translation"] = pretty_print(f);
            j["team_verdict"] = verdict(tv);
            j["eso_verdict"] = verdict(ev);
            fail(r, j, opts);
            if (opts.stop_at_first_failure) return false;
        }
        return true;
    });
    return r;
}

// ---------------------------------------------------------------- closures

const char* closure_name(Closure c) {
    switch (c) {
        case Closure::Downward: return "downward";
        case Closure::Union: return "union";
        case Closure::Flatness: return "flatness";
        case Closure::Locality: return "locality";
        case Closure::EmptyTeam: return "empty-team";
    }
    return "?";
}

Report check_closure(const FormulaPtr& phi, Closure property, const CaseSpace& space, const HarnessOptions& opts) {
    Report r;
    r.suite = std::string("closure:") + closure_name(property) + ":" + pretty_print(phi);
    Evaluator ev(phi, opts.team);
    auto rels = used_relations(*phi);
    auto report = [&](const Case& c, json extra) {
        json j = case_json(c);
        j["formula"] = pretty_print(phi);
        j["property"] = closure_name(property);
        for (auto& [k, v] : extra.items()) j[k] = v;
        fail(r, j, opts);
        return !opts.stop_at_first_failure;
    };

    switch (property) {
        case Closure::EmptyTeam: {
            r.cases = enumerate_projected(space, rels, space.team_vars, [&](const Case& c) {
                if (!c.team.empty()) return true;
                auto o = ev.satisfies(c.model, c.team);
                if (o.exhausted()) r.exhausted += c.weight;
                else if (!*o.value) return report(c, {});
                return true;
            });
            break;
        }
        case Closure::Flatness: {
            if (!is_first_order(*phi)) throw EvalError("flatness is checked for first-order formulas");
            r.cases = enumerate_projected(space, rels, ordered_free(phi, space), [&](const Case& c) {
                auto o = ev.satisfies(c.model, c.team);
                bool each = true;
                for (const auto& row : c.team.rows) each = each && satisfies_singleton(c.model, c.team.assignment(row), phi);
                if (o.exhausted()) r.exhausted += c.weight;
                else if (*o.value != each) return report(c, {{"team_verdict", *o.value}, {"rowwise", each}});
                return true;
            });
            break;
        }
        case Closure::Locality: {
            EvalBudget plain;
            plain.max_nodes = opts.team.max_nodes;
            Evaluator reference(phi, plain);
            auto fv = ordered_free(phi, space);
            r.cases = enumerate_projected(space, rels, space.team_vars, [&](const Case& c) {
                auto whole = reference.satisfies(c.model, c.team);
                auto part = ev.satisfies(c.model, restrict(c.team, fv));
                if (whole.exhausted() || part.exhausted()) r.exhausted += c.weight;
                else if (*whole.value != *part.value)
                    return report(c, {{"full_team", *whole.value}, {"restricted_team", *part.value}});
                return true;
            });
            break;
        }
        case Closure::Downward:
        case Closure::Union: {
            auto fv = ordered_free(phi, space);
            std::vector<std::pair<std::string, int>> varying;
            for (const auto& [name, k] : space.relations)
                if (rels.count(name)) varying.push_back({name, k});
            for (int n = space.min_universe; n <= space.max_universe; ++n) {
                auto rows = all_rows(n, fv.size());
                ModelIter it(n, varying);
                do {
                    Case c;
                    c.model = it.model();
                    std::map<RowSet, bool> verdicts;
                    for_subsets(rows, 0, space.max_team_rows, [&](const RowSet& s) {
                        auto o = ev.satisfies(c.model, Team(fv, s));
                        ++r.cases;
                        if (o.exhausted()) ++r.exhausted;
                        else verdicts[s] = *o.value;
                        return true;
                    });
                    bool go = true;
                    for (const auto& [s, ok] : verdicts) {
                        if (!ok || !go) continue;
                        if (property == Closure::Downward) {
                            for (const auto& row : s) {
                                RowSet smaller = s;
                                smaller.erase(row);
                                auto v = verdicts.find(smaller);
                                if (v != verdicts.end() && !v->second) {
                                    c.team = Team(fv, smaller);
                                    go = report(c, {{"superteam", json::parse(team_to_json(Team(fv, s)))}});
                                    break;
                                }
                            }
                        } else {
                            for (const auto& [s2, ok2] : verdicts) {
                                if (!ok2 || !(s < s2)) continue;
                                RowSet u = s;
                                u.insert(s2.begin(), s2.end());
                                auto v = verdicts.find(u);
                                if (v != verdicts.end() && !v->second) {
                                    c.team = Team(fv, u);
                                    go = report(c, {{"part1", json::parse(team_to_json(Team(fv, s)))},
                                                    {"part2", json::parse(team_to_json(Team(fv, s2)))}});
                                    break;
                                }
                            }
                        }
                    }
                    if (!go) return r;
                } while (it.advance());
            }
            break;
        }
    }
    return r;
}

// ---------------------------------------------------------------- suites

namespace {

Team pair_team(std::initializer_list<std::pair<int, int>> rows) {
    RowSet s;
    for (auto [a, b] : rows) s.insert({a, b});
    return Team({"x", "y"}, s);
}

Model universe(int n) {
    Model m;
    m.size = n;
    return m;
}

void expect_line(Report& r, const std::string& label, const EvalOutcome& got, bool want, const HarnessOptions& opts) {
    ++r.cases;
    std::string g = verdict(got);
    r.lines.push_back(label + ": " + g + (got.exhausted() || *got.value != want ? " (expected " + std::string(want ? "true" : "false") + ")" : ""));
    if (got.exhausted()) ++r.exhausted;
    if (got.exhausted() || *got.value != want)
        fail(r, json{{"check", label}, {"got", g}, {"expected", want}}, opts);
}

bool connected(int n, const std::vector<std::vector<bool>>& adj) {
    std::vector<bool> seen(n, false);
    std::vector<int> queue{0};
    seen[0] = true;
    for (size_t i = 0; i < queue.size(); ++i)
        for (int v = 0; v < n; ++v)
            if (adj[queue[i]][v] && !seen[v]) {
                seen[v] = true;
                queue.push_back(v);
            }
    return std::all_of(seen.begin(), seen.end(), [](bool b) { return b; });
}

bool two_colorable(int n, const std::vector<std::vector<bool>>& adj) {
    for (int mask = 0; mask < (1 << n); ++mask) {
        bool ok = true;
        for (int a = 0; a < n && ok; ++a)
            for (int b = 0; b < n && ok; ++b)
                if (adj[a][b] && ((mask >> a) & 1) == ((mask >> b) & 1)) ok = false;
        if (ok) return true;
    }
    return false;
}

bool has_cycle(int n, const std::vector<std::vector<bool>>& adj) {
    // Repeatedly drop vertices without successors; a cycle survives.
    std::vector<bool> alive(n, true);
    for (bool changed = true; changed;) {
        changed = false;
        for (int v = 0; v < n; ++v) {
            if (!alive[v]) continue;
            bool succ = false;
            for (int w = 0; w < n; ++w) succ = succ || (alive[w] && adj[v][w]);
            if (!succ) {
                alive[v] = false;
                changed = true;
            }
        }
    }
    return std::any_of(alive.begin(), alive.end(), [](bool b) { return b; });
}

Model graph_model(int n, const std::vector<std::vector<bool>>& adj) {
    Model m = universe(n);
    RowSet e;
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            if (adj[a][b]) e.insert({a, b});
    set_relation(m, "E", 2, e);
    return m;
}

void graph_check(Report& r, const Evaluator& ev, const std::string& name, const Model& m, bool oracle,
                 const HarnessOptions& opts) {
    ++r.cases;
    auto o = ev.satisfies(m, singleton_empty_team());
    if (o.exhausted()) {
        ++r.exhausted;
        return;
    }
    if (*o.value != oracle)
        fail(r, json{{"sentence", name}, {"model", json::parse(model_to_json(m))}, {"verdict", *o.value},
                     {"oracle", oracle}},
             opts);
}

}  // namespace

Report run_counterexample_suite(const HarnessOptions& opts) {
    Report r;
    r.suite = "counterexamples";
    Model m = universe(3);
    Team x1 = pair_team({{0, 1}}), x2 = pair_team({{1, 0}}), both = pair_team({{0, 1}, {1, 0}});
    struct Row3 {
        const char* label;
        const char* entry;
        bool v1, v2, vu;
    };
    const Row3 table[] = {{"(A) phi", "obs_phi", true, true, false},
                          {"(B) psi", "obs_psi", true, true, false},
                          {"(C) theta", "obs_theta", false, false, true}};
    for (const auto& t : table) {
        Evaluator ev(corpus_formula(t.entry), opts.team);
        expect_line(r, std::string(t.label) + " on X1", ev.satisfies(m, x1), t.v1, opts);
        expect_line(r, std::string(t.label) + " on X2", ev.satisfies(m, x2), t.v2, opts);
        expect_line(r, std::string(t.label) + " on X1 u X2", ev.satisfies(m, both), t.vu, opts);
    }
    return r;
}

Report run_graph_suite(int max_vertices, int max_directed_vertices, const HarnessOptions& opts) {
    if (max_vertices > 5 || max_directed_vertices > 5) throw EvalError("graph suite supports at most 5 vertices");
    Report r;
    r.suite = "graphs";
    Evaluator disc(corpus_formula("disconnected"), opts.team);
    Evaluator col(corpus_formula("two_colorable"), opts.team);
    Evaluator cyc(corpus_formula("cycle"), opts.team);
    for (int n = 1; n <= max_vertices; ++n) {
        std::vector<std::pair<int, int>> pairs;
        for (int a = 0; a < n; ++a)
            for (int b = a + 1; b < n; ++b) pairs.push_back({a, b});
        std::uint64_t before = r.cases;
        for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << pairs.size()); ++mask) {
            std::vector<std::vector<bool>> adj(n, std::vector<bool>(n, false));
            for (size_t i = 0; i < pairs.size(); ++i)
                if ((mask >> i) & 1u) adj[pairs[i].first][pairs[i].second] = adj[pairs[i].second][pairs[i].first] = true;
            Model m = graph_model(n, adj);
            graph_check(r, disc, "disconnected", m, !connected(n, adj), opts);
            graph_check(r, col, "two_colorable", m, two_colorable(n, adj), opts);
        }
        r.lines.push_back("undirected graphs on " + std::to_string(n) + " vertices: " +
                          std::to_string((r.cases - before) / 2) + " graphs, 2 sentences");
    }
    for (int n = 1; n <= max_directed_vertices; ++n) {
        std::uint64_t before = r.cases;
        for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << (n * n)); ++mask) {
            std::vector<std::vector<bool>> adj(n, std::vector<bool>(n, false));
            for (int i = 0; i < n * n; ++i) adj[i / n][i % n] = (mask >> i) & 1u;
            graph_check(r, cyc, "cycle", graph_model(n, adj), has_cycle(n, adj), opts);
        }
        r.lines.push_back("directed graphs on " + std::to_string(n) + " vertices: " + std::to_string(r.cases - before));
    }
    return r;
}

Report run_infinity_suite(const CaseSpace& space, const HarnessOptions& opts) {
    Report r;
    r.suite = "infinity";
    FormulaPtr delta = corpus_formula("delta_inf");
    Evaluator ev(delta, opts.team);
    for (int n = space.min_universe; n <= space.max_universe; ++n) {
        Model m = universe(n);
        expect_line(r, "delta_inf on |M|=" + std::to_string(n), ev.satisfies(m, singleton_empty_team()), false, opts);
    }
    // The empty team satisfies every formula, so only nonempty teams are
    // expected to falsify the relativized sentence.
    Evaluator rel(relativized(delta, "y"), opts.team);
    CaseSpace nonempty = space;
    nonempty.nonempty_teams_only = true;
    std::uint64_t teams = enumerate_projected(nonempty, {}, {"y"}, [&](const Case& c) {
        auto o = rel.satisfies(c.model, c.team);
        if (o.exhausted()) r.exhausted += c.weight;
        else if (*o.value) {
            json j = case_json(c);
            j["formula"] = "rel y (delta_inf)";
            j["verdict"] = true;
            fail(r, j, opts);
        }
        return true;
    });
    r.cases += teams;
    r.lines.push_back("delta_inf relativized to y: " + std::to_string(teams) + " nonempty teams");
    return r;
}

Report run_relativization_suite(const CaseSpace& space, const HarnessOptions& opts) {
    Report r;
    r.suite = "relativization";
    CaseSpace nonempty = space;
    nonempty.nonempty_teams_only = true;
    for (const auto& e : corpus()) {
        if (!(e.roles & kSentence)) continue;
        FormulaPtr phi = corpus_formula(e.name);
        Evaluator plain(phi, opts.team), rel(relativized(phi, "y"), opts.team);
        std::uint64_t mismatches = r.failures.size();
        std::uint64_t n = enumerate_projected(nonempty, used_relations(*phi), {"y"}, [&](const Case& c) {
            std::set<int> values;
            for (const auto& row : c.team.rows) values.insert(row[0]);
            auto a = rel.satisfies(c.model, c.team);
            auto b = plain.satisfies(submodel(c.model, values), singleton_empty_team());
            if (a.exhausted() || b.exhausted()) r.exhausted += c.weight;
            else if (*a.value != *b.value) {
                json j = case_json(c);
                j["sentence"] = e.name;
                j["relativized_verdict"] = *a.value;
                j["submodel_verdict"] = *b.value;
                fail(r, j, opts);
                if (opts.stop_at_first_failure) return false;
            }
            return true;
        });
        r.cases += n;
        r.lines.push_back(e.name + ": " + std::to_string(n) + " cases, " +
                          std::to_string(r.failures.size() - mismatches) + " mismatches");
    }
    return r;
}

namespace {

struct OperatorCase {
    const char* op;
    const char* text;
};

const OperatorCase kOperators[] = {
    {"constancy", "dep(x)"},
    {"intuitionistic disjunction", "[x] sub [y] ior x = y"},
    {"storing", "store [x] -> [w]. exists x. ([w] excl [x] and [y] sub [x])"},
    {"existential inclusion", "(exists [z] sub [y]) [x] excl [z]"},
    {"existential exclusion", "(exists [z] excl [x]) [z] sub [y]"},
    {"universal inclusion", "(forall [z] sub [x]) y != z"},
    {"universal exclusion", "(forall [z] excl [x]) [y] sub [z]"},
    {"universal inclusion (exclusion-only form)", "(forall [z] sube [x]) [z] excl [y]"},
    {"value preserving disjunction", "[x] sub [y] orp{[x];[y]} x != y"},
};

}  // namespace

Report run_operator_suite(const CaseSpace& space, const HarnessOptions& opts) {
    Report r;
    r.suite = "operators";
    EvalBudget native;
    native.max_nodes = opts.team.max_nodes;
    EvalBudget core = opts.team;
    core.mode = Mode::CoreOnly;
    core.engine = Engine::Sat;
    for (const auto& oc : kOperators) {
        FormulaPtr f = parse_formula(oc.text, default_vocabulary());
        FreshSupply fresh(*f);
        FormulaPtr d = desugar(f, fresh);
        Evaluator a(f, native), b(d, core);
        size_t before = r.failures.size();
        std::uint64_t exhausted = r.exhausted;
        std::uint64_t n = enumerate_projected(space, used_relations(*f), ordered_free(f, space), [&](const Case& c) {
            auto va = a.satisfies(c.model, c.team), vb = b.satisfies(c.model, c.team);
            if (va.exhausted() || vb.exhausted()) r.exhausted += c.weight;
            else if (*va.value != *vb.value) {
                json j = case_json(c);
                j["operator"] = oc.op;
                j["formula"] = oc.text;
                j["native"] = *va.value;
                j["desugared"] = *vb.value;
                fail(r, j, opts);
                if (opts.stop_at_first_failure) return false;
            }
            return true;
        });
        r.cases += n;
        r.lines.push_back(std::string(oc.op) + ": " + std::to_string(n) + " cases, " +
                          std::to_string(r.failures.size() - before) + " mismatches, " +
                          std::to_string(r.exhausted - exhausted) + " exhausted");
    }
    return r;
}

Report run_closure_suite(const CaseSpace& space, const HarnessOptions& opts) {
    Report r;
    r.suite = "closures";
    auto run = [&](const CorpusEntry& e, Closure c) {
        Report one = check_closure(corpus_formula(e.name), c, space, opts);
        r.lines.push_back(std::string(closure_name(c)) + " " + e.name + ": " + std::to_string(one.cases) + " cases, " +
                          std::to_string(one.failures.size()) + " violations");
        one.lines.clear();
        r.merge(one);
    };
    for (const auto& e : corpus()) {
        if (e.kind != CorpusKind::Team) continue;
        if (e.roles & kFirstOrder)
            for (Closure c : {Closure::Flatness, Closure::Locality, Closure::EmptyTeam}) run(e, c);
        if (e.roles & kExclusion) run(e, Closure::Downward);
        if (e.roles & kInclusion) run(e, Closure::Union);
    }
    return r;
}

namespace {

TranslationContext forward_context(const FormulaPtr& f, const CaseSpace& space) {
    auto fv = ordered_free(f, space);
    if (fv.empty()) fv.push_back(space.team_vars.at(0));
    int k = std::max(1, arity_profile(f).desugared.k());
    return inex_context(k, fv);
}

}  // namespace

Report run_forward_suite(const CaseSpace& space, const HarnessOptions& opts, Mutation mutation) {
    Report r;
    r.suite = mutation == Mutation::None ? "forward" : std::string("forward:") + mutation_name(mutation);
    for (const auto& e : corpus()) {
        if (!(e.roles & kForward)) continue;
        FormulaPtr f = corpus_formula(e.name);
        TranslationContext ctx = forward_context(f, space);
        ctx.mutation = mutation;
        Report one = check_equivalence_inex_eso(f, ctx, space, opts);
        r.lines.push_back(e.name + " (" + arity_profile(f).desugared.describe() + "): " + std::to_string(one.cases) +
                          " cases, " + std::to_string(one.failures.size()) + " mismatches, " +
                          std::to_string(one.exhausted) + " exhausted");
        one.lines.clear();
        r.merge(one);
        if (opts.stop_at_first_failure && !r.failures.empty()) break;
    }
    return r;
}

Report run_backward_suite(const CaseSpace& space, const HarnessOptions& opts) {
    Report r;
    r.suite = "backward";
    for (const auto& e : corpus()) {
        if (!(e.roles & kBackward)) continue;
        EsoFormula phi = corpus_eso(e.name);
        TranslationContext ctx;
        ctx.k = 1;
        for (const auto& [rv, a] : phi.free_relvars) {
            if (rv == "R") ctx.relvar_tuples[rv] = {"x"};
            else if (rv == "S") ctx.relvar_tuples[rv] = {"y"};
            else throw EvalError("backward corpus entries use only R and S");
        }
        Report one = check_equivalence_eso_inex(phi, ctx, space, opts);
        r.lines.push_back(e.name + ": " + std::to_string(one.cases) + " cases, " + std::to_string(one.failures.size()) +
                          " mismatches, " + std::to_string(one.exhausted) + " exhausted");
        one.lines.clear();
        r.merge(one);
    }
    return r;
}

Report run_normal_form_suite(int max_universe, const HarnessOptions& opts) {
    Report r;
    r.suite = "normal-form";
    EvalBudget enumerate;
    enumerate.engine = Engine::Search;
    enumerate.max_nodes = opts.eso.max_nodes;
    auto vocab = default_vocabulary();
    for (const auto& e : corpus()) {
        if (e.kind != CorpusKind::Eso || !(e.roles & kBackward)) continue;
        EsoFormula phi = corpus_eso(e.name);
        EsoFormula nf = eso_nonempty_normal_form(phi);
        auto rels = used_relations(*phi.matrix);
        std::vector<std::pair<std::string, int>> varying;
        for (const auto& [name, k] : vocab.relations)
            if (rels.count(name)) varying.push_back({name, k});
        for (const auto& fr : phi.free_relvars) varying.push_back(fr);
        std::uint64_t before = r.cases;
        size_t fails = r.failures.size();
        for (int n = 1; n <= max_universe; ++n) {
            ModelIter it(n, varying);
            do {
                Model full = it.model();
                Model m = universe(n);
                RelAssignment bind;
                for (const auto& [name, rel] : full.relations) {
                    if (vocab.relations.count(name)) m.relations[name] = rel;
                    else bind[name] = {rel.arity, relation_tuples(rel, n)};
                }
                ++r.cases;
                auto lhs = eso_satisfies(m, phi, bind, enumerate);
                if (lhs.exhausted()) {
                    ++r.exhausted;
                    continue;
                }
                bool rhs = nonempty_witness_search(m, nf, bind, opts.eso.max_nodes).has_value();
                if (*lhs.value != rhs) {
                    json j{{"eso", e.name}, {"model", json::parse(model_to_json(full))}, {"eso_verdict", *lhs.value},
                           {"nonempty_witness", rhs}};
                    fail(r, j, opts);
                }
            } while (it.advance());
        }
        r.lines.push_back(e.name + ": " + std::to_string(r.cases - before) + " cases, " +
                          std::to_string(r.failures.size() - fails) + " mismatches");
    }
    return r;
}

Report run_mutation_suite(const CaseSpace& space, const HarnessOptions& opts) {
    Report r;
    r.suite = "mutations";
    HarnessOptions first = opts;
    first.stop_at_first_failure = true;
    for (Mutation m : all_mutations()) {
        Report one = run_forward_suite(space, first, m);
        r.cases += one.cases;
        if (one.failures.empty()) {
            r.lines.push_back(std::string(mutation_name(m)) + ": not detected");
            fail(r, json{{"mutation", mutation_name(m)}, {"detected", false}}, opts);
        } else {
            auto j = json::parse(one.failures.front());
            r.lines.push_back(std::string(mutation_name(m)) + ": detected on " + j.value("formula", std::string("?")));
        }
    }
    return r;
}

Report run_function_suite(int max_universe, const HarnessOptions& opts) {
    Report r;
    r.suite = "functions";
    CaseSpace space;
    space.max_universe = max_universe;
    space.max_team_rows = max_universe * max_universe;
    space.team_vars = {"x1", "x2"};
    space.relations = {};
    space.nonempty_teams_only = true;
    for (const char* name : {"psi1", "psi2", "psi_inj", "psi_surj"}) {
        FormulaPtr f = corpus_formula(name);
        EsoFormula oracle = corpus_eso(std::string(name) + "_eso");
        Evaluator ev(f, opts.team);
        size_t fails = r.failures.size();
        std::uint64_t n = enumerate_projected(space, {}, {"x1", "x2"}, [&](const Case& c) {
            auto tv = ev.satisfies(c.model, c.team);
            auto ov = eso_satisfies(c.model, oracle, {{"F", image(c.team, {"x1", "x2"})}}, opts.eso);
            if (tv.exhausted() || ov.exhausted()) r.exhausted += c.weight;
            else if (*tv.value != *ov.value) {
                json j = case_json(c);
                j["formula"] = name;
                j["team_verdict"] = *tv.value;
                j["eso_verdict"] = *ov.value;
                fail(r, j, opts);
            }
            return true;
        });
        r.cases += n;
        r.lines.push_back(std::string(name) + ": " + std::to_string(n) + " cases, " +
                          std::to_string(r.failures.size() - fails) + " mismatches");
    }
    return r;
}

std::vector<std::string> suite_names() {
    return {"closures", "counterexamples", "graphs", "infinity", "relativization", "operators",
            "equivalence", "normal-form", "mutations", "functions", "all"};
}

Report run_suite(const std::string& name, const CaseSpace& space, const HarnessOptions& opts, int max_vertices) {
    if (name == "closures") return run_closure_suite(space, opts);
    if (name == "counterexamples") return run_counterexample_suite(opts);
    if (name == "graphs") return run_graph_suite(max_vertices, std::min(max_vertices, 3), opts);
    if (name == "infinity") return run_infinity_suite(space, opts);
    if (name == "relativization") return run_relativization_suite(space, opts);
    if (name == "operators") return run_operator_suite(space, opts);
    if (name == "normal-form") return run_normal_form_suite(std::min(space.max_universe, 2), opts);
    if (name == "mutations") return run_mutation_suite(space, opts);
    if (name == "functions") return run_function_suite(std::min(space.max_universe, 2), opts);
    if (name == "equivalence") {
        Report r = run_forward_suite(space, opts);
        r.merge(run_backward_suite(space, opts));
        r.suite = "equivalence";
        return r;
    }
    if (name == "all") {
        Report r;
        r.suite = "all";
        for (const auto& n : suite_names()) {
            if (n == "all") continue;
            Report one = run_suite(n, space, opts, max_vertices);
            r.lines.push_back(one.suite + ": " + (one.passed() ? "PASS" : "FAIL") + " (" + std::to_string(one.cases) +
                              " cases)");
            one.lines.clear();
            r.merge(one);
        }
        return r;
    }
    throw EvalError("unknown suite " + name);
}

}  // namespace teamlogic
