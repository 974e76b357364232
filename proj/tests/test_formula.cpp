#include "doctest.h"
#include "support.hpp"
#include "teamlogic/corpus.hpp"
#include "teamlogic/desugar.hpp"

using namespace support;
using tl::Op;
using tl::Term;

TEST_CASE("parse literals and atoms") {
    auto f = parse("x = y");
    CHECK(f->op == Op::Eq);
    CHECK(f->lhs[0] == Term::var("x"));
    CHECK(f->rhs[0] == Term::var("y"));

    auto g = parse("[x,y] sub [u,v]");
    REQUIRE(g->op == Op::Inc);
    CHECK(g->lhs == tl::var_tuple({"x", "y"}));
    CHECK(g->rhs == tl::var_tuple({"u", "v"}));

    CHECK_THROWS_AS(parse("!(x = y or x = z)"), tl::ParseError);
    CHECK_THROWS_AS(parse("[x] sub [y, z]"), tl::FormulaError);
    CHECK_THROWS_AS(parse("E(x)"), tl::ParseError);
    CHECK_THROWS_AS(parse("x = $0"), tl::ParseError);
}

TEST_CASE("parse errors carry a position") {
    try {
        parse("x = y and");
        FAIL("expected a parse error");
    } catch (const tl::ParseError& e) {
        CHECK(e.position() == 9);
    }
}

TEST_CASE("parse_eso") {
    auto phi = tl::parse_eso("EX P:1 . forall x. P(x)", vocab());
    REQUIRE(phi.quantified.size() == 1);
    CHECK(phi.quantified[0] == std::pair<std::string, int>{"P", 1});
    CHECK(phi.matrix->op == Op::Forall);
    CHECK(phi.free_relvars.empty());

    auto psi = tl::parse_eso("forall x. (R(x) or !R(x))", vocab());
    CHECK(psi.quantified.empty());
    REQUIRE(psi.free_relvars.size() == 1);
    CHECK(psi.free_relvars[0] == std::pair<std::string, int>{"R", 1});

    CHECK_THROWS_AS(tl::parse_eso("forall x. EX P:1 . P(x)", vocab()), tl::ParseError);
    CHECK_THROWS_AS(tl::parse_eso("EX P:1 . [x] sub [x]", vocab()), tl::FormulaError);
}

TEST_CASE("free variables") {
    CHECK(tl::free_variables(*parse("[x] sub [y]")) == std::vector<std::string>{"x", "y"});
    CHECK(tl::free_variables(*parse("(exists [x] sub [y]) x = z")) == std::vector<std::string>{"y", "z"});
    auto sentence = parse("forall z. exists v. E(z, v)");
    CHECK(tl::free_variables(*tl::relativized(sentence, "y")) == std::vector<std::string>{"y"});
    CHECK(tl::free_variables(*parse("store [x] -> [w]. w = y")) == std::vector<std::string>{"x", "y"});
}

TEST_CASE("arity profiles") {
    auto fo = tl::arity_profile(parse("x = y"));
    CHECK(fo.raw.fragment == tl::Fragment::FO);
    CHECK(fo.raw.k() == 0);

    auto inc2 = tl::arity_profile(parse("[x,y] sub [u,v]"));
    CHECK(inc2.raw.fragment == tl::Fragment::INC);
    CHECK(inc2.raw.describe() == "INC[2]");

    auto d = tl::arity_profile(parse("dep(x)"));
    CHECK(d.desugared.describe() == "EXC[1]");

    CHECK(tl::arity_profile(parse("[x] sub [y] and [x] excl [y]")).raw.describe() == "INEX[1]");
}

TEST_CASE("desugar constancy atom") {
    tl::FreshSupply fresh;
    auto d = tl::desugar(parse("dep(x)"), fresh);
    // ∀$0($0 = x ∨ $0 | x)
    auto want = tl::forall("$0", tl::disj(tl::eq(Term::var("$0"), Term::var("x")),
                                          tl::exc({Term::var("$0")}, {Term::var("x")})));
    CHECK(tl::structurally_equal(d, want));
}

TEST_CASE("one expansion step of the existential inclusion quantifier stores the bound") {
    tl::FreshSupply fresh;
    auto f = parse("(exists [z] sub [y]) z = x");
    auto once = tl::expand_once(f, fresh);
    REQUIRE(once->op == Op::Store);
    CHECK(once->lhs == tl::var_tuple({"y"}));
    REQUIRE(once->a->op == Op::Exists);
    CHECK(once->a->vars == std::vector<std::string>{"z"});
    auto body = once->a->a;
    REQUIRE(body->op == Op::And);
    CHECK(body->a->op == Op::Inc);
    CHECK(body->a->lhs == tl::var_tuple({"z"}));
    CHECK(body->a->rhs == tl::var_tuple(once->vars));
}

TEST_CASE("relativization of an existential is a bounded quantifier") {
    tl::FreshSupply fresh;
    auto r = tl::relativize(parse("exists z. U(z)"), "y", fresh);
    REQUIRE(r->op == Op::EIncQ);
    CHECK(r->vars == std::vector<std::string>{"z"});
    CHECK(r->lhs == tl::var_tuple({"y"}));
    CHECK(r->a->op == Op::Rel);
}

TEST_CASE("desugar output is core and store rejects overlapping tuples") {
    Gen gen(7);
    for (int i = 0; i < 200; ++i) {
        auto f = gen.formula(3);
        tl::FreshSupply fresh(*f);
        CHECK(tl::is_core(*tl::desugar(f, fresh)));
    }
    CHECK_THROWS_AS(tl::store({Term::var("x")}, {"x"}, parse("x = x")), tl::FormulaError);
}

TEST_CASE("pad_atoms_to_arity") {
    auto padded = tl::pad_atoms_to_arity(parse("[x] excl [y]"), 2);
    CHECK(tl::structurally_equal(padded, parse("[x, x] excl [y, y]")));
    auto same = parse("[x, y] sub [y, x]");
    CHECK(tl::structurally_equal(tl::pad_atoms_to_arity(same, 2), same));
    CHECK(tl::structurally_equal(tl::pad_atoms_to_arity(parse("[x] sub [y]"), 3), parse("[x,x,x] sub [y,y,y]")));
    CHECK_THROWS(tl::pad_atoms_to_arity(same, 1));
}

TEST_CASE("padding preserves satisfaction") {
    const char* texts[] = {"[x] excl [y]", "[x] sub [y]", "exists z. ([z] sub [x] and [z] excl [y])",
                           "forall z. ([x, z] excl [y, y] or [z] sub [x])"};
    for (const char* t : texts) {
        auto f = parse(t);
        for (int k : {2, 3}) {
            auto g = tl::pad_atoms_to_arity(f, k);
            for (int n = 1; n <= 3; ++n)
                each_team(n, {"x", "y"}, 3, [&](const tl::Team& x) {
                    auto m = model(n);
                    CHECK(holds(m, x, f) == holds(m, x, g));
                });
        }
    }
}

TEST_CASE("pretty_print") {
    CHECK(tl::pretty_print(parse("x = y")) == "x = y");
    CHECK(tl::pretty_print(parse("[x] sub [y]")) == "[x] sub [y]");
}

TEST_CASE("parse and pretty_print round-trip") {
    std::vector<tl::FormulaPtr> all;
    for (const auto& e : tl::corpus())
        if (e.kind == tl::CorpusKind::Team) all.push_back(tl::corpus_formula(e.name));
    Gen gen(11);
    while (all.size() < 120) all.push_back(gen.formula(4));
    for (const auto& f : all) {
        auto text = tl::pretty_print(f);
        CAPTURE(text);
        CHECK(tl::structurally_equal(tl::parse_formula(text, vocab()), f));
    }
    for (const auto& e : tl::corpus()) {
        if (e.kind != tl::CorpusKind::Eso) continue;
        auto phi = tl::corpus_eso(e.name);
        auto again = tl::parse_eso(tl::pretty_print(phi), vocab());
        CHECK(again.quantified == phi.quantified);
        CHECK(again.free_relvars == phi.free_relvars);
        CHECK(tl::structurally_equal(again.matrix, phi.matrix));
    }
}

TEST_CASE("every corpus entry parses and has a profile") {
    for (const auto& e : tl::corpus()) {
        CAPTURE(e.name);
        if (e.kind == tl::CorpusKind::Team) {
            auto f = tl::corpus_formula(e.name);
            auto p = tl::arity_profile(f);
            if (e.roles & tl::kFirstOrder) CHECK(p.desugared.fragment == tl::Fragment::FO);
            if (e.roles & tl::kForward) CHECK(p.desugared.k() <= 2);
        } else {
            CHECK_NOTHROW(tl::corpus_eso(e.name));
        }
    }
}

TEST_CASE("gamma_at_most spells out the bounded-size sentence") {
    CHECK(tl::gamma_at_most(2) == "exists x1. exists x2. forall y. (y = x1 or y = x2)");
    auto g = parse(tl::gamma_at_most(2));
    for (int n = 1; n <= 4; ++n) CHECK(holds(model(n), tl::singleton_empty_team(), g) == (n <= 2));
}

TEST_CASE("desugaring with disjoint supplies is equivalent") {
    Gen gen(23);
    for (int i = 0; i < 40; ++i) {
        auto f = gen.formula(2);
        tl::FreshSupply a(*f), b(*f);
        for (int j = 0; j < 50; ++j) b.next();
        auto da = tl::desugar(f, a), db = tl::desugar(f, b);
        auto va = tl::all_variables(*da), vb = tl::all_variables(*db);
        for (const auto& v : va)
            if (tl::is_reserved_name(v)) CHECK(std::find(vb.begin(), vb.end(), v) == vb.end());
        tl::EvalBudget sat;
        sat.engine = tl::Engine::Sat;
        for (int n = 1; n <= 2; ++n)
            each_team(n, {"x", "y"}, 3, [&](const tl::Team& x) {
                auto m = model(n, {{0}}, {{0, n - 1}});
                CHECK(holds(m, x, da, sat) == holds(m, x, db, sat));
            });
    }
}
