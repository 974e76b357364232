#include "doctest.h"
#include "support.hpp"

using namespace support;
using tl::RowSet;
using tl::Term;

namespace {

tl::Model succ_model() {
    tl::Model m;
    m.size = 3;
    tl::set_function(m, "f", 1, [](const tl::Row& a) { return (a[0] + 1) % 3; });
    m.constants["c"] = 1;
    return m;
}

// s01: x↦0, y↦1 and s10: x↦1, y↦0
tl::Team s01_s10() { return team({"x", "y"}, {{0, 1}, {1, 0}}); }

}  // namespace

TEST_CASE("eval_term") {
    auto m = succ_model();
    tl::Assignment s{{"x", 2}};
    CHECK(tl::eval_term(m, s, Term::var("x")) == 2);
    CHECK(tl::eval_term(m, s, Term::app("f", {Term::var("x")})) == 0);
    // f(c) = successor of 1
    CHECK(tl::eval_term(m, s, Term::app("f", {Term::constant("c")})) == 2);
    CHECK_THROWS(tl::eval_term(m, s, Term::var("y")));
    CHECK_THROWS(tl::eval_term(m, s, Term::app("g", {Term::var("x")})));
}

TEST_CASE("team_values") {
    tl::Model m = model(3);
    CHECK(tl::team_values(m, team({"x", "y"}, {}), tl::var_tuple({"x"})).empty());
    CHECK(tl::team_values(m, s01_s10(), tl::var_tuple({"x"})) == RowSet{{0}, {1}});
    CHECK(tl::team_values(m, s01_s10(), tl::var_tuple({"x", "y"})) == RowSet{{0, 1}, {1, 0}});
    CHECK_THROWS(tl::team_values(m, s01_s10(), tl::var_tuple({"z"})));
}

TEST_CASE("extend_with_set") {
    auto x1 = team({"x", "y"}, {{0, 1}});
    auto z1 = tl::extend_with_set(x1, {{1}, {2}}, {"z"});
    CHECK(z1.domain == std::vector<std::string>{"x", "y", "z"});
    CHECK(z1.rows == RowSet{{0, 1, 1}, {0, 1, 2}});

    auto none = tl::extend_with_set(x1, {}, {"z"});
    CHECK(none.empty());
    CHECK(none.domain == std::vector<std::string>{"x", "y", "z"});

    CHECK(tl::extend_with_set(team({"x"}, {}), {{0}}, {"z"}).empty());
    // overwriting an existing variable collapses rows
    CHECK(tl::extend_with_set(s01_s10(), {{2}}, {"x"}).rows == RowSet{{2, 0}, {2, 1}});
}

TEST_CASE("extend_with_choice") {
    auto x = s01_s10();
    auto c = tl::extend_with_choice(x, [](const tl::Row&) { return RowSet{{2}}; }, {"z"});
    CHECK(c.size() == x.size());

    auto full = tl::extend_with_choice(x, [](const tl::Row&) { return RowSet{{0}, {1}, {2}}; }, {"z"});
    CHECK(full == tl::extend_with_set(x, {{0}, {1}, {2}}, {"z"}));

    // F(s01) = {0}, F(s10) = {1, 2}: 1 + 2 rows
    auto f = tl::extend_with_choice(
        x, [](const tl::Row& r) { return r[0] == 0 ? RowSet{{0}} : RowSet{{1}, {2}}; }, {"z"});
    CHECK(f.size() == 3);
    CHECK_THROWS(tl::extend_with_choice(x, [](const tl::Row&) { return RowSet{}; }, {"z"}));
}

TEST_CASE("restrict") {
    auto x = s01_s10();
    CHECK(tl::restrict(x, {"x", "y"}) == x);
    CHECK(tl::restrict(x, {"x"}).rows == RowSet{{0}, {1}});
    CHECK(tl::restrict(team({"x", "y"}, {{0, 0}, {0, 1}}), {"x"}).size() == 1);
    CHECK_THROWS(tl::restrict(x, {"z"}));
}

TEST_CASE("bind_relvars") {
    tl::Model m = model(2);
    auto empty = tl::bind_relvars(m, {{"P", {}}}, {{"P", 1}});
    auto notp = tl::parse_eso("forall x. !P(x)", vocab());
    CHECK(tl::eso_matrix_holds(empty, notp, {}));

    auto x = s01_s10();
    auto bound = tl::bind_relvars(m, {{"R", tl::team_values(m, x, tl::var_tuple({"x", "y"}))}});
    CHECK(tl::relation_tuples(bound.relvars.at("R"), 2) == RowSet{{0, 1}, {1, 0}});

    auto again = tl::bind_relvars(bound, {{"R", RowSet{{1, 1}}}});
    CHECK(tl::relation_tuples(again.relvars.at("R"), 2) == RowSet{{1, 1}});
    CHECK_THROWS(tl::bind_relvars(m, {{"P", RowSet{{0}, {0, 1}}}}));
}

TEST_CASE("submodel renumbers elements") {
    tl::Model m = model(3, {{2}}, {{0, 2}, {2, 2}});
    auto sub = tl::submodel(m, {0, 2});
    CHECK(sub.size == 2);
    CHECK(tl::relation_tuples(sub.relations.at("U"), 2) == RowSet{{1}});
    CHECK(tl::relation_tuples(sub.relations.at("E"), 2) == RowSet{{0, 1}, {1, 1}});
    CHECK_THROWS(tl::submodel(m, {}));
}

TEST_CASE("json files") {
    auto m = tl::model_from_json(R"({"universe": 3, "relations": {"E": [[0,1],[1,2]]},
        "functions": {"f": [1,2,0]}, "constants": {"c": 2}})");
    CHECK(m.size == 3);
    CHECK(tl::relation_tuples(m.relations.at("E"), 3) == RowSet{{0, 1}, {1, 2}});
    CHECK(m.functions.at("f").table == std::vector<int>{1, 2, 0});
    CHECK(m.constants.at("c") == 2);
    CHECK(tl::model_from_json(tl::model_to_json(m)) == m);

    auto t = tl::team_from_json(R"({"domain": ["x","y"], "rows": [[0,1],[1,0],[0,1]]})");
    CHECK(t.had_duplicates);
    CHECK(t.team == s01_s10());
    CHECK(tl::team_from_json(tl::team_to_json(t.team)).team == t.team);

    auto e = tl::team_from_json(R"({"domain": ["x"], "rows": []})");
    CHECK(e.team.empty());
    CHECK(e.team.domain == std::vector<std::string>{"x"});

    CHECK_THROWS(tl::model_from_json(R"({"universe": 0})"));
    CHECK_THROWS(tl::model_from_json(R"({"universe": 2, "relations": {"E": [[0,5]]}})"));
    CHECK_THROWS(tl::team_from_json(R"({"domain": ["x"], "rows": [[0,1]]})"));
}

TEST_CASE("team algebra properties") {
    tl::Model m = model(3);
    for (int n = 1; n <= 3; ++n)
        each_team(n, {"x", "y"}, 3, [&](const tl::Team& x) {
            RowSet a{{0}}, b;
            for (int v = 0; v < n; ++v)
                if (v % 2 == 1) b.insert({v});
            RowSet ab = a;
            ab.insert(b.begin(), b.end());
            CHECK(tl::extend_with_set(x, ab, {"z"}) ==
                  tl::team_union(tl::extend_with_set(x, a, {"z"}), tl::extend_with_set(x, b, {"z"})));

            auto r = tl::restrict(x, {"y"});
            CHECK(tl::restrict(r, {"y"}) == r);
            CHECK(tl::team_values(m, r, tl::var_tuple({"y"})) == tl::team_values(m, x, tl::var_tuple({"y"})));

            if (!ab.empty())
                CHECK(tl::extend_with_choice(x, [&](const tl::Row&) { return ab; }, {"z"}) ==
                      tl::extend_with_set(x, ab, {"z"}));
        });
}
