#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "teamlogic/eso.hpp"
#include "teamlogic/evaluator.hpp"
#include "teamlogic/translate.hpp"

namespace teamlogic {

struct CaseSpace {
    int min_universe = 1;
    int max_universe = 3;
    int max_team_rows = 3;
    std::vector<std::string> team_vars{"x", "y"};
    std::map<std::string, int> relations{{"U", 1}, {"E", 2}};
    bool nonempty_teams_only = false;
    // Above sample_cap cases (0 = never) enumerate_cases draws `samples`
    // seeded random cases instead.
    std::uint64_t sample_cap = 0;
    std::uint64_t samples = 1000;
    std::uint64_t seed = 0;
};

struct Case {
    Model model;
    Team team;
    std::uint64_t weight = 1;   // full-space cases this one stands for
};

using CaseFn = std::function<bool(const Case&)>;   // false stops the stream

std::uint64_t count_cases(const CaseSpace& space);
// Returns the number of cases visited (sum of weights).
std::uint64_t enumerate_cases(const CaseSpace& space, const CaseFn& fn);
// Exhaustive enumeration where only `rels` vary and teams range over `vars`
// (a subset of space.team_vars). By locality every verdict on a projected
// case is the verdict on each full case it stands for, and the weight counts
// those.
std::uint64_t enumerate_projected(const CaseSpace& space, const std::set<std::string>& rels,
                                  const std::vector<std::string>& vars, const CaseFn& fn);

struct Report {
    std::string suite;
    std::uint64_t cases = 0;
    std::uint64_t exhausted = 0;
    std::vector<std::string> failures;   // one JSON object each, self-contained
    std::vector<std::string> lines;

    bool passed() const { return failures.empty(); }
    void merge(const Report& other);
    std::string text() const;
    std::string json() const;
};

struct HarnessOptions {
    EvalBudget team{10'000'000, Mode::NativeSugar, Engine::Sat, true, false};
    EvalBudget eso{10'000'000, Mode::NativeSugar, Engine::Sat, false, false};
    bool stop_at_first_failure = false;
    size_t max_failures = 20;
};

Vocabulary default_vocabulary();

// Team side against ESO side for inex_to_eso(φ). The team is projected to
// ctx.free_tuple.
Report check_equivalence_inex_eso(const FormulaPtr& phi, const TranslationContext& ctx, const CaseSpace& space,
                                  const HarnessOptions& opts = {});
// The same check for a translation Φ produced elsewhere.
Report check_forward_translation(const FormulaPtr& phi, const EsoFormula& translation, const TranslationContext& ctx,
                                 const CaseSpace& space, const HarnessOptions& opts = {});
// eso_to_inex(Φ) against Φ on nonempty teams; ctx.relvar_tuples names the
// team variables for each free relvar.
Report check_equivalence_eso_inex(const EsoFormula& phi, const TranslationContext& ctx, const CaseSpace& space,
                                  const HarnessOptions& opts = {});

enum class Closure { Downward, Union, Flatness, Locality, EmptyTeam };
const char* closure_name(Closure c);
Report check_closure(const FormulaPtr& phi, Closure property, const CaseSpace& space,
                     const HarnessOptions& opts = {});

Report run_counterexample_suite(const HarnessOptions& opts = {});
Report run_graph_suite(int max_vertices = 4, int max_directed_vertices = 3, const HarnessOptions& opts = {});
Report run_infinity_suite(const CaseSpace& space = {}, const HarnessOptions& opts = {});
Report run_relativization_suite(const CaseSpace& space = {}, const HarnessOptions& opts = {});
Report run_operator_suite(const CaseSpace& space = {}, const HarnessOptions& opts = {});
Report run_closure_suite(const CaseSpace& space = {}, const HarnessOptions& opts = {});
Report run_forward_suite(const CaseSpace& space = {}, const HarnessOptions& opts = {},
                         Mutation mutation = Mutation::None);
Report run_backward_suite(const CaseSpace& space = {}, const HarnessOptions& opts = {});
Report run_normal_form_suite(int max_universe = 2, const HarnessOptions& opts = {});
Report run_mutation_suite(const CaseSpace& space = {}, const HarnessOptions& opts = {});
Report run_function_suite(int max_universe = 2, const HarnessOptions& opts = {});

// Names accepted by run_suite: closures, counterexamples, graphs, infinity,
// relativization, operators, equivalence (forward and backward),
// normal-form, mutations, functions, all.
std::vector<std::string> suite_names();
Report run_suite(const std::string& name, const CaseSpace& space, const HarnessOptions& opts, int max_vertices = 4);

}  // namespace teamlogic
