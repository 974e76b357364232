#include <cmath>

#include "json.hpp"
#include "teamlogic/structures.hpp"

namespace teamlogic {

using nlohmann::json;

namespace {

Row json_tuple(const json& j) {
    if (j.is_number_integer()) return {j.get<int>()};
    if (!j.is_array()) throw StructureError("tuple must be an integer or an array of integers");
    Row r;
    for (const auto& v : j) {
        if (!v.is_number_integer()) throw StructureError("tuple elements must be integers");
        r.push_back(v.get<int>());
    }
    return r;
}

Relation json_relation(const std::string& name, const json& j, int n) {
    int arity = -1;
    const json* tuples = &j;
    if (j.is_object()) {
        if (!j.contains("arity") || !j.contains("tuples")) throw StructureError("relation " + name + " needs arity and tuples");
        arity = j.at("arity").get<int>();
        tuples = &j.at("tuples");
    }
    if (!tuples->is_array()) throw StructureError("relation " + name + " must list its tuples");
    RowSet set;
    for (const auto& t : *tuples) {
        Row r = json_tuple(t);
        if (arity < 0) arity = static_cast<int>(r.size());
        set.insert(r);
    }
    if (arity < 0) return Relation{};
    return make_relation(n, arity, set);
}

json relation_json(const Relation& r, int n) {
    json tuples = json::array();
    for (const auto& t : relation_tuples(r, n)) tuples.push_back(t);
    if (r.arity < 0) return tuples;
    return json{{"arity", r.arity}, {"tuples", tuples}};
}

}  // namespace

Model model_from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw StructureError(std::string("model file: ") + e.what());
    }
    try {
        Model m;
        m.size = j.at("universe").get<int>();
        if (m.size < 1) throw StructureError("universe must be nonempty");
        if (j.contains("relations"))
            for (const auto& [name, r] : j.at("relations").items()) m.relations[name] = json_relation(name, r, m.size);
        if (j.contains("relvars"))
            for (const auto& [name, r] : j.at("relvars").items()) m.relvars[name] = json_relation(name, r, m.size);
        if (j.contains("functions")) {
            for (const auto& [name, f] : j.at("functions").items()) {
                Function fn;
                const json* table = &f;
                if (f.is_object()) {
                    fn.arity = f.at("arity").get<int>();
                    table = &f.at("table");
                } else {
                    // Infer k from n^k = length; with n = 1 every arity fits and 1 is taken.
                    size_t len = f.size();
                    fn.arity = 0;
                    std::int64_t cells = 1;
                    while (cells < static_cast<std::int64_t>(len)) {
                        cells *= m.size;
                        ++fn.arity;
                        if (m.size == 1) break;
                    }
                    if (fn.arity == 0) fn.arity = 1;
                }
                fn.table = table->get<std::vector<int>>();
                m.functions[name] = fn;
            }
        }
        if (j.contains("constants"))
            for (const auto& [name, c] : j.at("constants").items()) m.constants[name] = c.get<int>();
        m.validate();
        return m;
    } catch (const json::exception& e) {
        throw StructureError(std::string("model file: ") + e.what());
    }
}

std::string model_to_json(const Model& m) {
    json j;
    j["universe"] = m.size;
    json rels = json::object();
    for (const auto& [n, r] : m.relations) rels[n] = relation_json(r, m.size);
    j["relations"] = rels;
    if (!m.relvars.empty()) {
        json rv = json::object();
        for (const auto& [n, r] : m.relvars) rv[n] = relation_json(r, m.size);
        j["relvars"] = rv;
    }
    if (!m.functions.empty()) {
        json fs = json::object();
        for (const auto& [n, f] : m.functions) fs[n] = json{{"arity", f.arity}, {"table", f.table}};
        j["functions"] = fs;
    }
    if (!m.constants.empty()) j["constants"] = m.constants;
    return j.dump();
}

ParsedTeam team_from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw StructureError(std::string("team file: ") + e.what());
    }
    try {
        ParsedTeam out;
        auto domain = j.at("domain").get<std::vector<std::string>>();
        RowSet rows;
        size_t listed = 0;
        for (const auto& r : j.at("rows")) {
            rows.insert(json_tuple(r));
            ++listed;
        }
        out.had_duplicates = listed != rows.size();
        out.team = Team(std::move(domain), std::move(rows));
        return out;
    } catch (const json::exception& e) {
        throw StructureError(std::string("team file: ") + e.what());
    }
}

std::string team_to_json(const Team& x) {
    json rows = json::array();
    for (const auto& r : x.rows) rows.push_back(r);
    return json{{"domain", x.domain}, {"rows", rows}}.dump();
}

}  // namespace teamlogic
