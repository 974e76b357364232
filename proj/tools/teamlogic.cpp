// Command-line front end. Exit codes: 0 true/pass, 1 false/fail,
// 2 budget exceeded, 3 usage or input error.
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "teamlogic/corpus.hpp"
#include "teamlogic/desugar.hpp"
#include "teamlogic/harness.hpp"
#include "teamlogic/parse.hpp"
#include "teamlogic/print.hpp"

using namespace teamlogic;

namespace {

constexpr int kTrue = 0, kFalse = 1, kBudget = 2, kUsage = 3;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot read " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == sep) {
            out.push_back(cur);
            cur.clear();
        } else if (!std::isspace(static_cast<unsigned char>(c))) {
            cur += c;
        }
    }
    if (!cur.empty() || !out.empty()) out.push_back(cur);
    return out;
}

struct Globals {
    std::uint64_t budget = 10'000'000;
    bool budget_set = false;
    std::string engine = "sat";
    bool core_only = false;

    std::uint64_t resolved_budget() const {
        std::uint64_t b = budget;
        if (!budget_set) {
            if (const char* env = std::getenv("TEAMLOGIC_BUDGET")) {
                try {
                    b = std::stoull(env);
                } catch (const std::exception&) {
                    throw UsageError(std::string("TEAMLOGIC_BUDGET is not a number: ") + env);
                }
            }
        }
        if (b < 1) throw UsageError("budget must be at least 1");
        return b;
    }

    EvalBudget team_budget() const {
        EvalBudget b;
        b.max_nodes = resolved_budget();
        b.mode = core_only ? Mode::CoreOnly : Mode::NativeSugar;
        b.engine = engine == "search" ? Engine::Search : Engine::Sat;
        b.flat_gate = true;
        return b;
    }

    HarnessOptions harness() const {
        HarnessOptions o;
        o.team = team_budget();
        o.eso.max_nodes = o.team.max_nodes;
        o.eso.engine = o.team.engine;
        return o;
    }
};

struct FormulaInput {
    std::string text;
    std::string file;

    std::string get() const {
        if (!file.empty()) {
            if (!text.empty()) throw UsageError("give the formula inline or with --formula-file, not both");
            return slurp(file);
        }
        if (text.empty()) throw UsageError("no formula given");
        return text;
    }
};

void add_formula(CLI::App* cmd, FormulaInput& in) {
    cmd->add_option("formula", in.text, "Formula text");
    cmd->add_option("--formula-file", in.file, "Read the formula from a file");
}

Vocabulary open_vocabulary() {
    Vocabulary v = default_vocabulary();
    v.open = true;
    return v;
}

int print_outcome(const EvalOutcome& o) {
    if (o.exhausted()) {
        std::cout << "budget-exceeded\n";
        return kBudget;
    }
    std::cout << (*o.value ? "true" : "false") << "\n";
    return *o.value ? kTrue : kFalse;
}

int report_exit(const Report& r, bool allow_exhaustion) {
    if (!r.passed()) return kFalse;
    if (r.exhausted > 0 && !allow_exhaustion) return kBudget;
    return kTrue;
}

// R=y1,y2 for each free relvar; otherwise fresh names r, r2, ... that avoid
// the formula's variables.
std::map<std::string, std::vector<std::string>> relvar_tuples(const EsoFormula& phi, int k,
                                                              const std::vector<std::string>& specs) {
    std::map<std::string, std::vector<std::string>> out;
    for (const auto& spec : specs) {
        auto eq = spec.find('=');
        if (eq == std::string::npos) throw UsageError("--free for to-inex takes NAME=v1,...,vk, got " + spec);
        out[spec.substr(0, eq)] = split(spec.substr(eq + 1), ',');
    }
    auto used = all_variables(*phi.matrix);
    std::set<std::string> taken(used.begin(), used.end());
    for (const auto& [n, v] : out) taken.insert(v.begin(), v.end());
    for (const auto& [name, arity] : phi.free_relvars) {
        if (out.count(name)) continue;
        std::string base;
        for (char c : name) base += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
        std::vector<std::string> vars;
        for (int j = 1; j <= k; ++j) {
            std::string v = k == 1 ? base : base + std::to_string(j);
            while (taken.count(v)) v += "_";
            taken.insert(v);
            vars.push_back(v);
        }
        out[name] = vars;
    }
    for (const auto& [name, vars] : out)
        if (static_cast<int>(vars.size()) != k)
            throw UsageError("relvar " + name + " needs " + std::to_string(k) + " team variables");
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Team semantics evaluator, ESO translations and verification suites"};
    app.require_subcommand(1);
    app.fallthrough();
    Globals g;
    app.add_option("--budget", g.budget, "Node budget (default 10^7; TEAMLOGIC_BUDGET when absent)")
        ->each([&](const std::string&) { g.budget_set = true; });
    app.add_option("--engine", g.engine, "Team engine")->check(CLI::IsMember({"search", "sat"}));
    app.add_flag("--core-only", g.core_only, "Desugar before evaluating");

    // eval
    auto* eval = app.add_subcommand("eval", "Evaluate a formula on a model and team");
    std::string model_path, team_path;
    FormulaInput eval_formula;
    eval->add_option("model", model_path, "Model JSON file")->required();
    eval->add_option("team", team_path, "Team JSON file")->required();
    add_formula(eval, eval_formula);

    // translate
    auto* translate = app.add_subcommand("translate", "Translate between INEX and ESO");
    std::string direction;
    FormulaInput tr_formula;
    std::vector<std::string> free_spec;
    int arity = 0;
    bool verify = false;
    translate->add_option("direction", direction, "to-eso or to-inex")
        ->required()
        ->check(CLI::IsMember({"to-eso", "to-inex"}));
    add_formula(translate, tr_formula);
    translate->add_option("--free", free_spec,
                          "to-eso: the tuple y (x,y); to-inex: NAME=v1,...,vk per free relvar");
    translate->add_option("--arity", arity, "k (default: the formula's arity)")->check(CLI::PositiveNumber);
    translate->add_flag("--verify", verify, "Check the translation over the default space");

    // suite
    auto* suite = app.add_subcommand("suite", "Run a verification suite");
    std::string suite_name;
    bool allow_exhaustion = false, json_out = false;
    int max_vertices = 4;
    CaseSpace space;
    suite->add_option("name", suite_name, "Suite name")->required();
    suite->add_flag("--allow-exhaustion", allow_exhaustion, "Budget exhaustion is not fatal");
    suite->add_option("--max-vertices", max_vertices, "Graph suite bound")->check(CLI::Range(1, 5));
    suite->add_option("--max-universe", space.max_universe, "Largest model size")->check(CLI::Range(1, 4));
    suite->add_option("--max-rows", space.max_team_rows, "Largest team size")->check(CLI::PositiveNumber);
    suite->add_option("--seed", space.seed, "Seed for sampled spaces");
    suite->add_flag("--json", json_out, "Print the JSON summary instead of text");

    // desugar
    auto* desugar_cmd = app.add_subcommand("desugar", "Print the core expansion");
    FormulaInput ds_formula;
    add_formula(desugar_cmd, ds_formula);

    // corpus
    auto* corpus_cmd = app.add_subcommand("corpus", "List or show built-in formulas");
    corpus_cmd->require_subcommand(1);
    auto* corpus_list = corpus_cmd->add_subcommand("list", "List entries");
    auto* corpus_show = corpus_cmd->add_subcommand("show", "Show one entry");
    std::string entry_name;
    corpus_show->add_option("name", entry_name)->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : kUsage;
    }

    try {
        if (*eval) {
            Model m = model_from_json(slurp(model_path));
            ParsedTeam t = team_from_json(slurp(team_path));
            if (t.had_duplicates) std::cerr << "warning: duplicate team rows merged\n";
            Vocabulary vocab = vocabulary_of(m);
            FormulaPtr f = parse_formula(eval_formula.get(), vocab);
            return print_outcome(satisfies(m, t.team, f, g.team_budget()));
        }

        if (*translate) {
            std::string text = tr_formula.get();
            if (direction == "to-eso") {
                FormulaPtr f = parse_formula(text, open_vocabulary());
                std::vector<std::string> ys;
                for (const auto& s : free_spec)
                    for (const auto& v : split(s, ',')) ys.push_back(v);
                if (free_spec.empty()) ys = free_variables(*f);
                int k = arity > 0 ? arity : std::max(1, arity_profile(f).desugared.k());
                // Pure fragments get the single-stage translations.
                TranslationContext ctx = inex_context(k, ys);
                EsoFormula phi;
                switch (arity_profile(f).desugared.fragment) {
                    case Fragment::FO:
                    case Fragment::EXC: ctx.inc_prefix = "P"; phi = exc_to_eso(f, ctx); break;
                    case Fragment::INC: ctx.inc_prefix = "P"; phi = inc_to_eso(f, ctx); break;
                    case Fragment::INEX: phi = inex_to_eso(f, ctx); break;
                }
                std::cout << pretty_print(phi) << "\n";
                if (!verify) return kTrue;
                CaseSpace vs;
                if (!ys.empty()) vs.team_vars = ys;
                std::set<std::string> rels = relation_symbols(*f);
                for (const auto& r : rels)
                    if (!default_vocabulary().has_relation(r))
                        throw UsageError("--verify needs the default vocabulary (U unary, E binary)");
                Report r = check_forward_translation(f, phi, ctx, vs, g.harness());
                std::cout << "verified: " << r.cases << " cases, " << r.failures.size() << " mismatches";
                if (r.exhausted) std::cout << ", " << r.exhausted << " exhausted";
                std::cout << "\n";
                for (const auto& fl : r.failures) std::cout << "mismatch: " << fl << "\n";
                return report_exit(r, false);
            }
            EsoFormula phi = parse_eso(text, default_vocabulary());
            int k = arity;
            if (k == 0) {
                k = 1;
                for (const auto& [n, a] : phi.quantified) k = std::max(k, a);
                for (const auto& [n, a] : phi.free_relvars) k = std::max(k, a);
            }
            TranslationContext ctx;
            ctx.k = k;
            ctx.relvar_tuples = relvar_tuples(phi, k, free_spec);
            FormulaPtr f = eso_to_inex(phi, ctx);
            std::cout << pretty_print(f) << "\n";
            if (!verify) return kTrue;
            CaseSpace vs;
            vs.team_vars.clear();
            for (const auto& [n, vars] : ctx.relvar_tuples)
                for (const auto& v : vars)
                    if (std::find(vs.team_vars.begin(), vs.team_vars.end(), v) == vs.team_vars.end())
                        vs.team_vars.push_back(v);
            if (vs.team_vars.empty()) vs.team_vars.push_back("y");
            Report r = check_equivalence_eso_inex(phi, ctx, vs, g.harness());
            std::cout << "verified: " << r.cases << " cases, " << r.failures.size() << " mismatches";
            if (r.exhausted) std::cout << ", " << r.exhausted << " exhausted";
            std::cout << "\n";
            for (const auto& fl : r.failures) std::cout << "mismatch: " << fl << "\n";
            return report_exit(r, false);
        }

        if (*suite) {
            auto names = suite_names();
            if (std::find(names.begin(), names.end(), suite_name) == names.end())
                throw UsageError("unknown suite " + suite_name);
            Report r = run_suite(suite_name, space, g.harness(), max_vertices);
            if (json_out) std::cout << r.json() << "\n";
            else std::cout << r.text();
            return report_exit(r, allow_exhaustion);
        }

        if (*desugar_cmd) {
            FormulaPtr f = parse_formula(ds_formula.get(), open_vocabulary());
            FreshSupply fresh(*f);
            std::cout << pretty_print(desugar(f, fresh)) << "\n";
            return kTrue;
        }

        if (*corpus_list) {
            for (const auto& e : corpus())
                std::cout << e.name << "\t" << (e.kind == CorpusKind::Team ? "team" : "eso") << "\t" << e.note << "\n";
            return kTrue;
        }
        if (*corpus_show) {
            const auto& e = corpus_entry(entry_name);
            std::cout << e.text << "\n";
            if (e.kind == CorpusKind::Team) {
                FormulaPtr f = corpus_formula(e.name);
                std::cout << "# " << arity_profile(f).desugared.describe() << "\n";
            }
            return kTrue;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    }
    return kUsage;
}
