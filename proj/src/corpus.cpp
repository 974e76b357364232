#include "teamlogic/corpus.hpp"

#include "teamlogic/harness.hpp"
#include "teamlogic/parse.hpp"

namespace teamlogic {

std::string gamma_at_most(int k) {
    std::string out, body;
    for (int i = 1; i <= k; ++i) {
        out += "exists x" + std::to_string(i) + ". ";
        body += (i > 1 ? " or " : "") + std::string("y = x") + std::to_string(i);
    }
    return out + "forall y. (" + body + ")";
}

namespace {

const std::string kPsi1 = "(forall y. exists z. [y, z] sub [x1, x2])";
const std::string kPsi2 =
    "(forall y. forall z1. forall z2. (([y, z1] excl [x1, x2] orp{[x1, x2]} [y, z2] excl [x1, x2]) "
    "orp{[x1, x2]} z1 = z2))";
const std::string kPsiInj =
    "(forall y1. forall y2. forall z. (([y1, z] excl [x1, x2] orp{[x1, x2]} [y2, z] excl [x1, x2]) "
    "orp{[x1, x2]} y1 = y2))";
const std::string kPsiSurj = "(forall z. exists y. [y, z] sub [x1, x2])";

// δ_inf with the inner y's spelled v so that it can be relativized to y.
const std::string kDeltaInf =
    "exists x1. exists x2. ((forall v. exists z. [v, z] sub [x1, x2]) and "
    "(forall v. forall z1. forall z2. (([v, z1] excl [x1, x2] orp{[x1, x2]} [v, z2] excl [x1, x2]) "
    "orp{[x1, x2]} z1 = z2)) and "
    "(forall v1. forall v2. forall z. (([v1, z] excl [x1, x2] orp{[x1, x2]} [v2, z] excl [x1, x2]) "
    "orp{[x1, x2]} v1 = v2)) and "
    "(exists z. forall v. [v, z] excl [x1, x2]))";

const std::string kDisconnected =
    "exists x1. exists x2. ([x1] excl [x2] and (forall z. ([z] sub [x1] or [z] sub [x2])) and "
    "(forall [y1] sub [x1]) (forall [y2] sub [x2]) !E(y1, y2))";

std::string two_colorable() {
    return "(" + gamma_at_most(2) +
           ") or exists x1. exists x2. ([x1] excl [x2] and (forall z. ([z] sub [x1] or [z] sub [x2])) and "
           "((forall [y1] sub [x1]) (forall [y2] sub [x1]) !E(y1, y2)) and "
           "(forall [y1] sub [x2]) (forall [y2] sub [x2]) !E(y1, y2))";
}

std::vector<CorpusEntry> build() {
    const auto T = CorpusKind::Team;
    const auto S = CorpusKind::Eso;
    return {
        // translation corpus over x, y
        {"inc_unary", T, "[x] sub [y]", kForward | kInclusion, "unary inclusion"},
        {"exc_unary", T, "[x] excl [y]", kForward | kExclusion, "unary exclusion"},
        {"inc_binary_swap", T, "[x, y] sub [y, x]", kForward | kInclusion, "binary inclusion"},
        {"exc_binary_diag", T, "[x, x] excl [y, x]", kForward | kExclusion, "binary exclusion, repeated variable"},
        {"eq_or_inc", T, "x = y or [x] sub [y]", kForward | kInclusion, "disjunction with an equality"},
        {"neq_and_inc", T, "x != y and [y] sub [x]", kForward | kInclusion, "conjunction with an inequality"},
        {"exists_mixed", T, "exists z. ([z] sub [x] and [z] excl [y])", kForward, "existential over both atoms"},
        {"forall_split", T, "forall z. ([z] sub [x] or [z] excl [y])", kForward, "universal over a split"},
        {"unary_relation", T, "U(x) or (!U(y) and [x] sub [y])", kForward | kInclusion, "relation literals"},
        {"edge_witness", T, "exists z. (E(x, z) and [z] sub [y])", kForward | kInclusion, "binary relation"},
        {"edge_exclusion", T, "forall z. (!E(x, z) or [x, z] excl [y, y])", kForward | kExclusion,
         "binary exclusion under a universal"},
        {"inc_or_exc", T, "[x] sub [y] or [y] excl [x]", kForward, "both atoms in a disjunction"},
        {"nested_binary", T, "exists z. forall v. ([z, v] sub [x, y] or v = z)", kForward | kInclusion,
         "quantifier alternation, binary inclusion"},
        {"dep_or_inc", T, "dep(x) or [x] sub [y]", kForward, "constancy atom"},
        {"ior_inc", T, "[x] sub [y] ior x = y", kForward, "intuitionistic disjunction"},
        {"bounded_exists", T, "(exists [z] sub [x]) [z] excl [y]", kForward, "inclusion quantifier"},
        {"forall_exists", T, "forall z. exists v. ([v] sub [x] and v != z)", kForward | kInclusion,
         "universal then existential"},
        {"exists_bridge", T, "exists z. ([x] excl [z] and [y] sub [z])", kForward, "mixed atoms on a witness"},
        {"first_order", T, "x = y or !U(x)", kForward | kFirstOrder, "no atoms"},
        {"sentence_excl", T, "forall z. exists v. [z] excl [v]", kForward | kExclusion | kSentence,
         "sentence, true iff at least two elements"},
        {"store_rebind", T, "store [x] -> [w]. exists x. ([x] excl [w] and [y] sub [x])", kForward,
         "storing operator"},
        {"tvp_exc", T, "x = y orp{[x]} [x] excl [y]", kForward, "value preserving disjunction"},

        // further closure material
        {"fo_exists_edge", T, "exists z. (E(x, z) and !E(z, y))", kFirstOrder, ""},
        {"fo_forall", T, "forall z. (z = x or z != y)", kFirstOrder, ""},
        {"fo_mixed", T, "U(x) and (x != y or E(y, y))", kFirstOrder, ""},
        {"exc_forall", T, "forall z. ([z] excl [x] or z = y)", kExclusion, ""},
        {"exc_edge", T, "exists z. ([z] excl [x] and E(z, y))", kExclusion, ""},
        {"dep_x", T, "dep(x)", kExclusion, "constancy atoms are exclusion-definable"},
        {"inc_edge", T, "exists z. ([z] sub [x] and E(y, z))", kInclusion, ""},
        {"inc_forall", T, "forall z. ([z] sub [y] or U(z))", kInclusion, ""},

        // relational sentences
        {"total_edges", T, "forall z. exists v. E(z, v)", kSentence | kFirstOrder, ""},
        {"unary_loops", T, "(exists z. U(z)) and (forall v. (!U(v) or E(v, v)))", kSentence | kFirstOrder, ""},
        {"full_inclusion", T, "exists z. forall v. [v] sub [z]", kSentence | kInclusion, "always true"},
        {"cycle", T, "exists u. (exists [v] sub [u]) E(u, v)", kSentence | kExample,
         "directed graph has a cycle"},
        {"disconnected", T, kDisconnected, kSentence | kExample, "undirected graph is disconnected"},
        {"two_colorable", T, two_colorable(), kExample, "undirected graph is 2-colorable"},
        {"gamma_le_2", T, gamma_at_most(2), kExample, "at most two elements"},
        {"delta_inf", T, kDeltaInf, kExample, "infinite models only"},

        // quantifier closure counterexamples
        {"obs_phi", T, "(forall [z] sub [x]) y != z", kExample, "not closed under unions"},
        {"obs_psi", T, "(forall [z] excl [x]) [y] sub [z]", kExample, "not closed under unions"},
        {"obs_theta", T, "(forall [z] excl [x]) y != z", kExample, "not closed downwards"},

        // function quantification over x1 x2
        {"psi1", T, kPsi1, kFunction, "total"},
        {"psi2", T, kPsi2, kFunction, "functional"},
        {"psi_inj", T, kPsiInj, kFunction, "injective"},
        {"psi_surj", T, kPsiSurj, kFunction, "surjective"},
        {"psi1_eso", S, "forall y. exists z. F(y, z)", kFunction, "oracle for psi1"},
        {"psi2_eso", S, "forall y. forall z1. forall z2. (!F(y, z1) or !F(y, z2) or z1 = z2)", kFunction,
         "oracle for psi2"},
        {"psi_inj_eso", S, "forall y1. forall y2. forall z. (!F(y1, z) or !F(y2, z) or y1 = y2)", kFunction,
         "oracle for psi_inj"},
        {"psi_surj_eso", S, "forall z. exists y. F(y, z)", kFunction, "oracle for psi_surj"},

        // ESO[1] with free R (x) and S (y)
        {"eso_cover", S, "EX P:1 . forall z. (P(z) or !R(z))", kBackward, "always true"},
        {"eso_nonempty", S, "EX P:1 . (forall z. (!P(z) or R(z))) and exists z. P(z)", kBackward, "R nonempty"},
        {"eso_complement", S, "EX P:1 . forall z. ((P(z) and !R(z)) or (!P(z) and R(z)))", kBackward,
         "always true"},
        {"eso_subset", S, "forall z. (!R(z) or S(z))", kBackward, "R within S"},
        {"eso_bipartite", S,
         "EX P:1 . forall z. forall v. (!E(z, v) or !R(z) or !R(v) or (P(z) and !P(v)) or (!P(z) and P(v)))",
         kBackward, "R induces a bipartite subgraph"},
        {"eso_partition", S, "EX P:1 . EX Q:1 . forall z. ((P(z) or Q(z)) and (!P(z) or !Q(z)) and (!R(z) or P(z)))",
         kBackward, "two relvars"},
        {"eso_meet", S, "exists z. (R(z) and S(z))", kBackward, "R and S meet"},
        {"eso_through_u", S, "EX P:1 . (forall z. (!U(z) or P(z))) and forall z. (!P(z) or R(z))", kBackward,
         "U within R"},
        {"eso_outside", S, "EX P:1 . (exists z. (P(z) and !R(z))) and forall z. (!P(z) or S(z))", kBackward,
         "S not within R"},
        {"eso_edges_into", S,
         "EX P:1 . (forall z. (!R(z) or exists v. (E(z, v) and P(v)))) and forall z. (!P(z) or S(z))", kBackward,
         "every R element has an edge into S"},
        {"eso_at_most_one", S, "forall z. forall v. (!R(z) or !R(v) or z = v)", kBackward, "R has one element"},
        {"eso_disjoint_witness", S, "EX P:1 . (exists z. (P(z) and S(z))) and forall z. (!P(z) or !R(z))",
         kBackward, "S not within R"},
        {"eso_full", S, "EX P:1 . forall z. P(z)", kBackward, "sentence"},
        {"eso_split", S, "EX P:1 . (exists z. P(z)) and exists z. !P(z)", kBackward,
         "sentence, at least two elements"},
    };
}

}  // namespace

const std::vector<CorpusEntry>& corpus() {
    static const std::vector<CorpusEntry> entries = build();
    return entries;
}

const CorpusEntry& corpus_entry(const std::string& name) {
    for (const auto& e : corpus())
        if (e.name == name) return e;
    throw FormulaError("no corpus entry named " + name);
}

FormulaPtr corpus_formula(const std::string& name) {
    const auto& e = corpus_entry(name);
    if (e.kind != CorpusKind::Team) throw FormulaError(name + " is an ESO entry");
    return parse_formula(e.text, default_vocabulary());
}

EsoFormula corpus_eso(const std::string& name) {
    const auto& e = corpus_entry(name);
    if (e.kind != CorpusKind::Eso) throw FormulaError(name + " is a team-semantics entry");
    return parse_eso(e.text, default_vocabulary());
}

}  // namespace teamlogic
