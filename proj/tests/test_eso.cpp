#include "doctest.h"
#include "support.hpp"
#include "teamlogic/corpus.hpp"

using namespace support;
using tl::RowSet;

namespace {

tl::EsoFormula eso(const std::string& s) { return tl::parse_eso(s, vocab()); }

tl::EvalBudget with(tl::Engine e) {
    tl::EvalBudget b;
    b.engine = e;
    return b;
}

bool eso_holds(const tl::Model& m, const tl::EsoFormula& phi, const tl::RelAssignment& bind, tl::Engine e) {
    auto o = tl::eso_satisfies(m, phi, bind, with(e));
    REQUIRE_FALSE(o.exhausted());
    return *o.value;
}

RowSet all_of(int n) {
    RowSet s;
    for (int a = 0; a < n; ++a) s.insert({a});
    return s;
}

}  // namespace

TEST_CASE("eso examples") {
    for (auto e : {tl::Engine::Search, tl::Engine::Sat}) {
        CHECK(eso_holds(model(2), eso("EX P:1 . forall x. P(x)"), {}, e));
        // |M| = 1: P is ∅ or M, and neither has a member and a non-member.
        CHECK_FALSE(eso_holds(model(1), eso("EX P:1 . (exists x. P(x)) and exists x. !P(x)"), {}, e));
        auto all = eso("forall x. R(x)");
        for (int n = 1; n <= 3; ++n) {
            CHECK(eso_holds(model(n), all, {{"R", {1, all_of(n)}}}, e));
            CHECK_FALSE(eso_holds(model(n), all, {{"R", {1, {}}}}, e));
        }
    }
}

TEST_CASE("eso errors") {
    auto phi = eso("forall x. R(x)");
    CHECK_THROWS_AS(tl::eso_satisfies(model(2), phi, {}), tl::EvalError);
    tl::EsoFormula open{{}, parse("U(x)"), {}};
    CHECK_THROWS_AS(tl::eso_satisfies(model(2), open, {}), tl::EvalError);
}

TEST_CASE("eso budget counts interpretations") {
    auto phi = eso("EX P:2 . forall x. forall y. (P(x, y) and x != y)");
    tl::EvalBudget b;
    b.engine = tl::Engine::Search;
    b.max_nodes = 10;
    CHECK(tl::eso_satisfies(model(3), phi, {}, b).exhausted());
}

TEST_CASE("enumeration and SAT grounding agree") {
    std::vector<tl::EsoFormula> all;
    for (const auto& e : tl::corpus())
        if (e.kind == tl::CorpusKind::Eso) all.push_back(tl::corpus_eso(e.name));
    all.push_back(eso("EX P:2 . forall x. exists y. (P(x, y) and !P(y, x))"));
    all.push_back(eso("EX P:1 . EX Q:2 . forall x. (P(x) or exists y. (Q(x, y) and E(y, x)))"));
    for (const auto& phi : all) {
        CAPTURE(tl::pretty_print(phi));
        for (int n = 1; n <= 2; ++n)
            each_model(n, [&](const tl::Model& m) {
                for (int r = 0; r < (1 << n); ++r)
                    for (int s = 0; s < (1 << n); ++s) {
                        tl::RelAssignment bind;
                        RowSet rs, ss, fs;
                        for (int a = 0; a < n; ++a) {
                            if ((r >> a) & 1) rs.insert({a});
                            if ((s >> a) & 1) ss.insert({a});
                            fs.insert({a, (a + r) % n});
                        }
                        for (const auto& [name, k] : phi.free_relvars)
                            bind[name] = name == "R" ? tl::RelValue{1, rs} : name == "S" ? tl::RelValue{1, ss} : tl::RelValue{2, fs};
                        CHECK(eso_holds(m, phi, bind, tl::Engine::Search) == eso_holds(m, phi, bind, tl::Engine::Sat));
                    }
            });
    }
}

TEST_CASE("nonempty witness search") {
    auto phi = eso("EX P:1 . forall x. P(x)");
    auto nf = tl::eso_nonempty_normal_form(phi);
    auto w = tl::nonempty_witness_search(model(3), nf, {});
    REQUIRE(w.has_value());
    CHECK(w->at("P").tuples == all_of(3));
    CHECK(tl::eso_matrix_holds(model(3), nf, *w));

    CHECK_FALSE(tl::nonempty_witness_search(model(2), eso("EX P:1 . exists x. (P(x) and x != x)"), {}).has_value());

    // deterministic: same witness twice
    auto split = eso("EX P:1 . (exists x. P(x)) and exists x. !P(x)");
    auto a = tl::nonempty_witness_search(model(3), split, {});
    auto b = tl::nonempty_witness_search(model(3), split, {});
    REQUIRE(a.has_value());
    CHECK(*a == *b);
    CHECK(tl::eso_matrix_holds(model(3), split, *a));
}

TEST_CASE("matrix truth agrees with singleton team semantics") {
    Gen gen(17, false, false);
    for (int i = 0; i < 60; ++i) {
        auto f = gen.first_order(3);
        auto closed = tl::forall("x", tl::exists("y", f));
        tl::EsoFormula phi{{}, closed, {}};
        for (int n = 1; n <= 3; ++n) {
            auto m = model(n, {{0}}, {{n - 1, 0}});
            CHECK(tl::eso_matrix_holds(m, phi, {}) == tl::satisfies_singleton(m, {}, closed));
        }
    }
}

TEST_CASE("normal form against enumeration") {
    auto r = tl::run_normal_form_suite(2);
    CHECK(r.passed());
    CHECK(r.exhausted == 0);
    CHECK(r.cases > 0);
}
