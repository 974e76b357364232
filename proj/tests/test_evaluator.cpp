#include "doctest.h"
#include "support.hpp"
#include "teamlogic/corpus.hpp"
#include "teamlogic/desugar.hpp"

using namespace support;
using tl::RowSet;

namespace {

tl::EvalBudget engine(tl::Engine e, tl::Mode mode = tl::Mode::NativeSugar, bool flat = false, bool split = false,
                      std::uint64_t nodes = 200'000) {
    tl::EvalBudget b;
    b.engine = e;
    b.mode = mode;
    b.flat_gate = flat;
    b.split_gate = split;
    b.max_nodes = nodes;
    return b;
}

const tl::Team x1 = team({"x", "y"}, {{0, 1}});
const tl::Team x2 = team({"x", "y"}, {{1, 0}});
const tl::Team both = team({"x", "y"}, {{0, 1}, {1, 0}});

}  // namespace

TEST_CASE("empty team satisfies everything") {
    auto m = model(2, {{0}}, {{0, 1}});
    auto empty = team({"x", "y"}, {});
    for (const auto& e : tl::corpus()) {
        if (e.kind != tl::CorpusKind::Team) continue;
        auto f = tl::corpus_formula(e.name);
        auto fv = tl::free_variables(*f);
        CAPTURE(e.name);
        CHECK(holds(m, tl::Team(fv, {}), f));
    }
    CHECK(holds(m, empty, parse("x != x")));
}

TEST_CASE("universal quantifier over an inclusion asks for the full universe") {
    auto f = parse("forall x. [x] sub [t]");
    auto m = model(2);
    CHECK(holds(m, team({"t"}, {{0}, {1}}), f));
    CHECK_FALSE(holds(m, team({"t"}, {{0}}), f));
}

TEST_CASE("quantifier closure counterexamples on M = {0,1,2}") {
    auto m = model(3);
    auto phi = parse("(forall [z] sub [x]) y != z");
    auto psi = parse("(forall [z] excl [x]) [y] sub [z]");
    auto theta = parse("(forall [z] excl [x]) y != z");
    for (auto e : {tl::Engine::Search, tl::Engine::Sat}) {
        auto b = engine(e);
        CHECK(holds(m, x1, phi, b));
        CHECK(holds(m, x2, phi, b));
        CHECK_FALSE(holds(m, both, phi, b));
        CHECK(holds(m, x1, psi, b));
        CHECK(holds(m, x2, psi, b));
        CHECK_FALSE(holds(m, both, psi, b));
        CHECK(holds(m, both, theta, b));
        CHECK_FALSE(holds(m, x1, theta, b));
    }
}

TEST_CASE("evaluation errors") {
    auto m = model(2);
    CHECK_THROWS_AS(tl::satisfies(m, team({"x"}, {{0}}), parse("x = y")), tl::EvalError);
    CHECK_THROWS_AS(tl::satisfies(m, team({"x"}, {{5}}), parse("x = x")), tl::EvalError);
    tl::EvalBudget core;
    core.mode = tl::Mode::CoreOnly;
    CHECK_THROWS_AS(tl::satisfies(m, team({"x"}, {{0}}), parse("dep(x)"), core), tl::EvalError);
}

TEST_CASE("budget exhaustion is reported, never a verdict") {
    auto f = parse("forall a. exists c. exists d. ([a, c] sub [x, d] or [c] excl [y]) and [x] sub [c]");
    auto m = model(3);
    auto x = team({"x", "y"}, {{0, 1}, {1, 2}, {2, 0}});
    auto tiny = tl::satisfies(m, x, f, engine(tl::Engine::Search, tl::Mode::NativeSugar, false, false, 5));
    CHECK(tiny.exhausted());
    CHECK(tiny.nodes_used >= 5);
    auto enough = tl::satisfies(m, x, f, engine(tl::Engine::Sat, tl::Mode::NativeSugar, false, false, 10'000'000));
    CHECK_FALSE(enough.exhausted());
    CHECK(enough.nodes_used <= 10'000'000);
}

TEST_CASE("satisfies_singleton") {
    auto m = model(3, {{1}}, {{0, 1}});
    CHECK(tl::satisfies_singleton(m, {{"x", 0}}, parse("x = x")));
    CHECK_THROWS(tl::satisfies_singleton(m, {{"x", 0}}, parse("[x] sub [x]")));
    // A sentence on {∅} is its Tarski truth.
    auto s = parse("exists z. exists v. E(z, v) and U(v)");
    CHECK(holds(m, tl::singleton_empty_team(), s) == tl::satisfies_singleton(m, {}, s));
    CHECK(tl::satisfies_singleton(m, {}, s));

    Gen gen(3);
    for (int i = 0; i < 100; ++i) {
        auto f = gen.first_order(3);
        for (int n = 1; n <= 3; ++n) {
            auto mm = model(n, {{0}}, {{0, n - 1}, {n - 1, 0}});
            for (int a = 0; a < n; ++a)
                for (int b = 0; b < n; ++b)
                    CHECK(tl::satisfies_singleton(mm, {{"x", a}, {"y", b}}, f) ==
                          holds(mm, team({"x", "y"}, {{a, b}}), f, engine(tl::Engine::Search)));
        }
    }
}

TEST_CASE("negated atoms") {
    auto m = model(3);
    auto inc = parse("[x] sub [y]");
    auto exc = parse("[x] excl [y]");
    // disjoint images
    CHECK(tl::check_negated_atom(m, team({"x", "y"}, {{0, 1}, {0, 2}}), inc, false));
    // equal images
    CHECK(tl::check_negated_atom(m, both, exc, false));
    CHECK_FALSE(tl::check_negated_atom(m, x1, exc, false));
    CHECK(tl::check_negated_atom(m, x1, exc, true));
    auto rev = parse("[y] excl [x]");
    for (int n = 1; n <= 3; ++n)
        each_team(n, {"x", "y"}, 3, [&](const tl::Team& x) {
            auto mm = model(n);
            CHECK(tl::check_negated_atom(mm, x, exc, false) == tl::check_negated_atom(mm, x, rev, false));
        });
}

TEST_CASE("atoms are definable with quantifiers") {
    struct Pair {
        const char* atom;
        const char* quantified;
    };
    const Pair pairs[] = {
        {"[x] sub [y]", "(exists [z] sub [y]) z = x"},
        {"[x] excl [y]", "(exists [z] excl [y]) z = x"},
        {"[x] sub [y]", "(forall [z] excl [y]) z != x"},
        {"[x] excl [y]", "(forall [z] sub [y]) z != x"},
    };
    for (const auto& p : pairs) {
        auto a = parse(p.atom), q = parse(p.quantified);
        for (int n = 1; n <= 3; ++n)
            each_team(n, {"x", "y"}, 3, [&](const tl::Team& x) {
                auto m = model(n);
                CHECK(holds(m, x, a) == holds(m, x, q));
            });
    }
}

TEST_CASE("contradictory negation of atoms on nonempty teams") {
    auto exc = parse("[x] excl [y]"), inc = parse("[x] sub [y]");
    auto not_exc = parse("exists z. ([z] sub [x] and [z] sub [y])");
    auto not_inc = parse("exists z. ([z] sub [x] and [z] excl [y])");
    for (int n = 1; n <= 3; ++n)
        each_team(n, {"x", "y"}, 3, [&](const tl::Team& x) {
            if (x.empty()) return;
            auto m = model(n);
            CHECK(!holds(m, x, exc) == holds(m, x, not_exc));
            CHECK(!holds(m, x, inc) == holds(m, x, not_inc));
        });
}

TEST_CASE("stepwise quantification equals choosing pairs at once") {
    const char* bodies[] = {"[z, v] sub [x, y]", "[z] excl [v] and E(z, v)", "z = x or [v] sub [z]"};
    for (const char* text : bodies) {
        auto body = parse(text);
        auto stepwise = tl::exists("z", tl::exists("v", body));
        for (int n = 1; n <= 2; ++n)
            each_model(n, [&](const tl::Model& m) {
                each_team(n, {"x", "y"}, 2, [&](const tl::Team& x) {
                    // Oracle: try every F from rows to nonempty sets of pairs.
                    std::vector<RowSet> choices;
                    int pairs = n * n;
                    for (int mask = 1; mask < (1 << pairs); ++mask) {
                        RowSet s;
                        for (int i = 0; i < pairs; ++i)
                            if ((mask >> i) & 1) s.insert({i / n, i % n});
                        choices.push_back(s);
                    }
                    std::vector<tl::Row> rows(x.rows.begin(), x.rows.end());
                    bool found = rows.empty();
                    std::vector<size_t> idx(rows.size(), 0);
                    while (!found) {
                        std::map<tl::Row, RowSet> f;
                        for (size_t i = 0; i < rows.size(); ++i) f[rows[i]] = choices[idx[i]];
                        auto ext = tl::extend_with_choice(x, [&](const tl::Row& r) { return f.at(r); }, {"z", "v"});
                        found = holds(m, ext, body);
                        size_t i = 0;
                        while (i < idx.size() && ++idx[i] == choices.size()) idx[i++] = 0;
                        if (i == idx.size()) break;
                    }
                    CHECK(holds(m, x, stepwise) == found);
                });
            });
    }
}

TEST_CASE("engines agree on random formulas") {
    Gen gen(42);
    int decided = 0, total = 0;
    for (int i = 0; i < 150; ++i) {
        auto f = gen.formula(3);
        tl::Evaluator plain(f, engine(tl::Engine::Search));
        tl::Evaluator gated(f, engine(tl::Engine::Search, tl::Mode::NativeSugar, true, true));
        tl::Evaluator sat(f, engine(tl::Engine::Sat, tl::Mode::NativeSugar, false, false, 10'000'000));
        tl::Evaluator sat_flat(f, engine(tl::Engine::Sat, tl::Mode::NativeSugar, true, false, 10'000'000));
        tl::FreshSupply fresh(*f);
        tl::Evaluator core(tl::desugar(f, fresh), engine(tl::Engine::Sat, tl::Mode::CoreOnly, false, false, 10'000'000));
        for (int n = 1; n <= 2; ++n) {
            auto m = model(n, {{n - 1}}, {{0, n - 1}});
            each_team(n, {"x", "y"}, 3, [&](const tl::Team& x) {
                ++total;
                auto a = plain.satisfies(m, x), b = gated.satisfies(m, x);
                auto c = sat.satisfies(m, x), d = sat_flat.satisfies(m, x), e = core.satisfies(m, x);
                REQUIRE_FALSE(c.exhausted());
                REQUIRE_FALSE(d.exhausted());
                REQUIRE_FALSE(e.exhausted());
                CAPTURE(tl::pretty_print(f));
                CAPTURE(tl::team_to_json(x));
                CHECK(*c.value == *d.value);
                CHECK(*c.value == *e.value);
                if (!a.exhausted()) {
                    ++decided;
                    CHECK(*a.value == *c.value);
                }
                if (!b.exhausted()) CHECK(*b.value == *c.value);
            });
        }
    }
    // The search engine must decide most cases within its budget.
    CHECK(decided * 10 >= total * 8);
}

TEST_CASE("native operators equal their expansions") {
    tl::CaseSpace small;
    small.max_universe = 2;
    auto r = tl::run_operator_suite(small);
    CHECK(r.passed());
    CHECK(r.exhausted == 0);
}

TEST_CASE("more budget never changes a verdict") {
    Gen gen(5);
    for (int i = 0; i < 40; ++i) {
        auto f = gen.formula(3);
        auto m = model(2, {{1}}, {{0, 1}});
        each_team(2, {"x", "y"}, 3, [&](const tl::Team& x) {
            std::optional<bool> seen;
            for (std::uint64_t nodes : {10, 100, 1000, 100000}) {
                auto o = tl::satisfies(m, x, f, engine(tl::Engine::Search, tl::Mode::NativeSugar, false, false, nodes));
                if (o.exhausted()) continue;
                if (seen) CHECK(*seen == *o.value);
                seen = o.value;
            }
        });
    }
}

TEST_CASE("locality on the whole corpus") {
    auto m = model(2, {{0}}, {{0, 1}, {1, 1}});
    for (const auto& e : tl::corpus()) {
        if (e.kind != tl::CorpusKind::Team || (e.roles & tl::kFunction)) continue;
        auto f = tl::corpus_formula(e.name);
        auto fv = tl::free_variables(*f);
        std::vector<std::string> dom = fv;
        for (const char* extra : {"q1", "q2"}) dom.push_back(extra);
        if (dom.size() > 4) continue;
        CAPTURE(e.name);
        each_team(2, dom, 3, [&](const tl::Team& x) {
            auto b = engine(tl::Engine::Sat, tl::Mode::NativeSugar, true, false, 10'000'000);
            CHECK(holds(m, x, f, b) == holds(m, tl::restrict(x, fv), f, b));
        });
    }
}
