#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "teamlogic/formula.hpp"

namespace teamlogic {

using Row = std::vector<int>;
using RowSet = std::set<Row>;

class StructureError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Characteristic vector over the n^arity tuples in row-major order. An empty
// relation read from a file may have unknown arity (-1); it is empty at every
// arity.
struct Relation {
    int arity = -1;
    std::vector<std::uint8_t> bits;

    bool contains(const int* tuple, int k, int n) const;
    bool contains(const Row& t, int n) const { return contains(t.data(), static_cast<int>(t.size()), n); }
    friend bool operator==(const Relation&, const Relation&) = default;
};

struct Function {
    int arity = 1;
    std::vector<int> table;   // row-major over argument tuples
    friend bool operator==(const Function&, const Function&) = default;
};

struct Model {
    int size = 1;
    std::map<std::string, Relation> relations;
    std::map<std::string, Function> functions;
    std::map<std::string, int> constants;
    std::map<std::string, Relation> relvars;

    // Relation variables shadow vocabulary relations of the same name.
    const Relation* find_relation(const std::string& name) const;
    void validate() const;
    friend bool operator==(const Model&, const Model&) = default;
};

std::int64_t int_pow(std::int64_t base, int exp);
std::int64_t tuple_index(const int* t, int k, int n);
Row tuple_at(std::int64_t index, int k, int n);

Relation make_relation(int n, int arity, const RowSet& tuples);
RowSet relation_tuples(const Relation& r, int n);
Relation full_relation(int n, int arity);

void set_relation(Model& m, const std::string& name, int arity, const RowSet& tuples);
void set_function(Model& m, const std::string& name, int arity, const std::function<int(const Row&)>& f);

Vocabulary vocabulary_of(const Model& m);

using Assignment = std::map<std::string, int>;

struct Team {
    std::vector<std::string> domain;
    RowSet rows;

    Team() = default;
    Team(std::vector<std::string> dom, RowSet r);

    size_t size() const { return rows.size(); }
    bool empty() const { return rows.empty(); }
    int index_of(const std::string& var) const;   // -1 when absent
    Assignment assignment(const Row& row) const;
    friend bool operator==(const Team&, const Team&) = default;
};

// {∅}: a single empty assignment over the empty domain.
Team singleton_empty_team();
Team team_of(const std::vector<Assignment>& assignments, const std::vector<std::string>& domain);

int eval_term(const Model& m, const Assignment& s, const Term& t);
RowSet team_values(const Model& m, const Team& x, const Tuple& ts);

// X[A/x̄]; existing bindings of x̄ are overwritten and new variables are
// appended to the domain.
Team extend_with_set(const Team& x, const RowSet& a, const std::vector<std::string>& xs);
// X[F/x̄] with F(s) nonempty for every row s.
Team extend_with_choice(const Team& x, const std::function<RowSet(const Row&)>& f,
                        const std::vector<std::string>& xs);
Team restrict(const Team& x, const std::vector<std::string>& vars);
Team team_union(const Team& a, const Team& b);

// M[Ā/P̄]; bindings replace earlier ones of the same name.
Model bind_relvars(const Model& m, const std::map<std::string, RowSet>& bindings,
                   const std::map<std::string, int>& arities = {});
// M↾A for a relational vocabulary; elements are renumbered in increasing
// order.
Model submodel(const Model& m, const std::set<int>& universe);

struct ParsedTeam {
    Team team;
    bool had_duplicates = false;
};

Model model_from_json(const std::string& text);
std::string model_to_json(const Model& m);
ParsedTeam team_from_json(const std::string& text);
std::string team_to_json(const Team& x);

}  // namespace teamlogic
