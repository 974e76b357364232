#include "doctest.h"
#include "json.hpp"
#include "support.hpp"
#include "teamlogic/corpus.hpp"

using namespace support;
using tl::RowSet;

namespace {

tl::CaseSpace tiny() {
    tl::CaseSpace s;
    s.max_universe = 2;
    s.max_team_rows = 2;
    s.team_vars = {"x"};
    s.relations = {{"U", 1}};
    return s;
}

tl::Model graph(int n, std::initializer_list<std::pair<int, int>> edges) {
    RowSet e;
    for (auto [a, b] : edges) {
        e.insert({a, b});
        e.insert({b, a});
    }
    return model(n, {}, e);
}

bool sentence(const char* name, const tl::Model& m) {
    return holds(m, tl::singleton_empty_team(), tl::corpus_formula(name));
}

}  // namespace

TEST_CASE("case enumeration") {
    // n = 1: 2 relations × 2 teams; n = 2: 4 relations × (1 + 2 + 1) teams
    CHECK(tl::count_cases(tiny()) == 20);
    std::uint64_t seen = 0;
    CHECK(tl::enumerate_cases(tiny(), [&](const tl::Case& c) {
              seen += c.weight;
              return true;
          }) == 20);
    CHECK(seen == 20);

    auto one = tiny();
    one.max_universe = 1;
    one.max_team_rows = 1;
    std::vector<size_t> sizes;
    tl::enumerate_cases(one, [&](const tl::Case& c) {
        sizes.push_back(c.team.size());
        CHECK(c.model.size == 1);
        return true;
    });
    CHECK(sizes == std::vector<size_t>{0, 1, 0, 1});
}

TEST_CASE("projected weights add up to the full space") {
    tl::CaseSpace s;
    s.max_universe = 2;
    std::uint64_t full = tl::count_cases(s);
    CHECK(tl::enumerate_projected(s, {"U"}, {"y"}, [](const tl::Case&) { return true; }) == full);
    CHECK(tl::enumerate_projected(s, {}, {}, [](const tl::Case&) { return true; }) == full);
}

TEST_CASE("sampling is seeded") {
    tl::CaseSpace s;
    s.sample_cap = 10;
    s.samples = 25;
    s.seed = 99;
    auto run = [&] {
        std::vector<std::string> out;
        tl::enumerate_cases(s, [&](const tl::Case& c) {
            out.push_back(tl::model_to_json(c.model) + tl::team_to_json(c.team));
            return true;
        });
        return out;
    };
    auto a = run(), b = run();
    CHECK(a.size() == 25);
    CHECK(a == b);
    s.seed = 100;
    CHECK(run() != a);
}

TEST_CASE("forward equivalence examples") {
    tl::CaseSpace s;
    for (const char* t : {"[x] sub [y]", "[x] excl [y]"}) {
        auto r = tl::check_equivalence_inex_eso(parse(t), tl::inex_context(1, {"x", "y"}), s);
        CHECK(r.passed());
        CHECK(r.exhausted == 0);
        CHECK(r.cases == tl::count_cases(s));
    }
    auto ctx = tl::inex_context(1, {"x", "y"});
    ctx.mutation = tl::Mutation::DropNegatedExclusionSide;
    CHECK_FALSE(tl::check_equivalence_inex_eso(parse("[x] excl [y]"), ctx, s).passed());
}

TEST_CASE("closure checks") {
    tl::CaseSpace s;
    CHECK(tl::check_closure(tl::corpus_formula("exc_edge"), tl::Closure::Downward, s).passed());
    CHECK(tl::check_closure(tl::corpus_formula("inc_edge"), tl::Closure::Union, s).passed());
    CHECK(tl::check_closure(tl::corpus_formula("fo_mixed"), tl::Closure::Flatness, s).passed());

    auto phi = tl::check_closure(tl::corpus_formula("obs_phi"), tl::Closure::Union, s);
    CHECK_FALSE(phi.passed());
    auto theta = tl::check_closure(tl::corpus_formula("obs_theta"), tl::Closure::Downward, s);
    CHECK_FALSE(theta.passed());
    CHECK_THROWS(tl::check_closure(parse("[x] sub [y]"), tl::Closure::Flatness, s));
}

TEST_CASE("failure reports reproduce through the evaluator") {
    tl::HarnessOptions o;
    o.stop_at_first_failure = true;
    auto r = tl::check_closure(tl::corpus_formula("obs_phi"), tl::Closure::Union, tl::CaseSpace{}, o);
    REQUIRE(r.failures.size() == 1);
    auto j = nlohmann::json::parse(r.failures[0]);
    auto m = tl::model_from_json(j["model"].dump());
    auto x = tl::team_from_json(j["team"].dump()).team;
    auto f = parse(j["formula"].get<std::string>());
    CHECK_FALSE(holds(m, x, f));
    CHECK(holds(m, tl::team_from_json(j["part1"].dump()).team, f));
    CHECK(holds(m, tl::team_from_json(j["part2"].dump()).team, f));

    auto js = nlohmann::json::parse(r.json());
    CHECK(js["suite"].get<std::string>().rfind("closure:union", 0) == 0);
    CHECK(js["failures"].size() == 1);
}

TEST_CASE("counterexample suite") {
    auto r = tl::run_counterexample_suite();
    CHECK(r.passed());
    CHECK(r.cases == 9);
}

TEST_CASE("graph sentences on hand-made graphs") {
    auto path = graph(3, {{0, 1}, {1, 2}});
    CHECK_FALSE(sentence("disconnected", path));
    CHECK(sentence("two_colorable", path));
    auto split = graph(3, {{0, 1}});
    CHECK(sentence("disconnected", split));
    auto triangle = graph(3, {{0, 1}, {1, 2}, {0, 2}});
    CHECK_FALSE(sentence("two_colorable", triangle));
    CHECK_FALSE(sentence("disconnected", triangle));

    auto loop = model(2, {}, {{1, 1}});
    CHECK(sentence("cycle", loop));
    CHECK_FALSE(sentence("cycle", model(3, {}, {{0, 1}, {1, 2}})));
    CHECK(sentence("cycle", model(3, {}, {{0, 1}, {1, 2}, {2, 0}})));
}

TEST_CASE("graph suite") {
    auto r = tl::run_graph_suite(4, 3);
    CHECK(r.passed());
    // 1 + 2 + 8 + 64 undirected graphs with two sentences each, then 2 + 16 + 512 directed ones
    CHECK(r.cases == 75 * 2 + 530);
    CHECK_THROWS(tl::run_graph_suite(6, 3));
}

TEST_CASE("infinity formulas fail on finite models") {
    auto d = tl::corpus_formula("delta_inf");
    for (int n = 1; n <= 3; ++n) CHECK_FALSE(holds(model(n), tl::singleton_empty_team(), d));
    auto rel = tl::relativized(d, "y");
    CHECK_FALSE(holds(model(3), team({"y"}, {{0}, {2}}), rel));
    CHECK(tl::run_infinity_suite().passed());
}

TEST_CASE("relativization examples") {
    auto s = parse("forall z. exists v. E(z, v)");
    auto rel = tl::relativized(s, "y");
    auto m = model(3, {}, {{0, 1}, {1, 0}, {2, 2}});
    CHECK(holds(m, team({"y"}, {{0}, {1}, {2}}), rel) == holds(m, tl::singleton_empty_team(), s));
    m = model(3, {}, {{0, 1}, {1, 2}, {2, 2}});
    // {0, 1}: 1 has no successor inside; {1, 2} is closed
    CHECK_FALSE(holds(m, team({"y"}, {{0}, {1}}), rel));
    CHECK(holds(m, team({"y"}, {{1}, {2}}), rel));
    CHECK(holds(m, team({"y"}, {{2}}), rel));
    CHECK_FALSE(holds(m, team({"y"}, {{0}}), rel));
}

TEST_CASE("function quantification formulas") {
    auto r = tl::run_function_suite(2);
    CHECK(r.passed());
    CHECK(r.exhausted == 0);
}

TEST_CASE("suites are deterministic") {
    tl::CaseSpace s;
    s.max_universe = 2;
    auto a = tl::run_suite("relativization", s, {});
    auto b = tl::run_suite("relativization", s, {});
    CHECK(a.text() == b.text());
    CHECK_THROWS(tl::run_suite("nope", s, {}));
}
