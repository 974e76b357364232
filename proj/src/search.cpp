// Exhaustive team-semantics search. Teams are byte strings: rows of
// max(1, |fv|) bytes, sorted and deduplicated (a width-0 row is one zero
// byte). Every call to eval counts against the budget, memo hits included.

#include <algorithm>
#include <set>
#include <unordered_map>

#include "program.hpp"

namespace teamlogic::detail {

namespace {

size_t row_bytes(const Node& nd) { return std::max<size_t>(1, nd.fv.size()); }

class Search {
public:
    Search(const Program& p, const Bound& b, std::uint64_t max_nodes, const EvalBudget& opts)
        : p_(p), b_(b), max_(max_nodes), opts_(opts), memo_(p.nodes.size()) {}

    std::uint64_t used() const { return used_; }

    bool eval(int id, const std::string& team) {
        if (++used_ > max_) throw BudgetExceeded{};
        if (team.empty()) return true;
        auto& memo = memo_[id];
        auto it = memo.find(team);
        if (it != memo.end()) return it->second;
        bool r = compute(id, team);
        memo.emplace(team, r);
        return r;
    }

private:
    using Rows = std::vector<std::string>;

    static std::string pack(Rows& rows) {
        std::sort(rows.begin(), rows.end());
        rows.erase(std::unique(rows.begin(), rows.end()), rows.end());
        std::string out;
        for (const auto& r : rows) out += r;
        return out;
    }

    Rows split(const Node& nd, const std::string& team) const {
        size_t w = row_bytes(nd);
        Rows rows;
        for (size_t i = 0; i < team.size(); i += w) rows.push_back(team.substr(i, w));
        return rows;
    }

    std::string child(const Node& nd, int side, const std::string& row, const int* chosen, const int* stored) const {
        int cid = side == 0 ? nd.a : nd.b;
        std::string out(row_bytes(p_.nodes[cid]), '\0');
        child_row(nd, side, reinterpret_cast<const std::uint8_t*>(row.data()), chosen, stored,
                  reinterpret_cast<std::uint8_t*>(out.data()));
        return out;
    }

    std::string project(const Node& nd, int side, const Rows& rows) const {
        Rows out;
        for (const auto& r : rows) out.push_back(child(nd, side, r, nullptr, nullptr));
        return pack(out);
    }

    static const std::uint8_t* bytes(const std::string& s) { return reinterpret_cast<const std::uint8_t*>(s.data()); }

    std::set<std::int64_t> image(const std::vector<CTerm>& ts, const Rows& rows) const {
        std::set<std::int64_t> out;
        for (const auto& r : rows) out.insert(eval_code(ts, bytes(r), b_));
        return out;
    }

    std::vector<std::vector<int>> decode(const std::set<std::int64_t>& codes, int k) const {
        std::vector<std::vector<int>> out;
        for (auto c : codes) {
            Row t = tuple_at(c, k, b_.n);
            out.push_back(t);
        }
        return out;
    }

    std::set<std::int64_t> complement(const std::set<std::int64_t>& s, int k) const {
        std::set<std::int64_t> out;
        std::int64_t total = int_pow(b_.n, k);
        for (std::int64_t c = 0; c < total; ++c)
            if (!s.count(c)) out.insert(c);
        return out;
    }

    bool chosen_used(const Node& nd) const {
        return std::any_of(nd.amap.begin(), nd.amap.end(),
                           [](const SlotSource& s) { return s.kind == SlotSource::Kind::Chosen; });
    }

    // Every row gets a nonempty subset of the candidate tuples.
    bool choose(const Node& nd, const Rows& rows, const std::vector<std::vector<int>>& cands) {
        if (cands.empty()) return false;
        if (!chosen_used(nd)) return eval(nd.a, project(nd, 0, rows));
        size_t c = cands.size();
        if (c > 20) throw EvalError("choice over more than 20 candidate tuples");
        bool singles = opts_.split_gate && p_.nodes[nd.a].dc;
        std::vector<std::uint32_t> masks(rows.size(), 1);
        // child rows per (row, candidate)
        std::vector<std::vector<std::string>> ext(rows.size());
        for (size_t i = 0; i < rows.size(); ++i)
            for (size_t j = 0; j < c; ++j) ext[i].push_back(child(nd, 0, rows[i], cands[j].data(), nullptr));
        const std::uint32_t top = (1u << c) - 1;
        for (;;) {
            Rows team;
            for (size_t i = 0; i < rows.size(); ++i)
                for (size_t j = 0; j < c; ++j)
                    if (masks[i] >> j & 1u) team.push_back(ext[i][j]);
            if (eval(nd.a, pack(team))) return true;
            size_t i = rows.size();
            while (i > 0) {
                --i;
                std::uint32_t& m = masks[i];
                if (singles) {
                    if (m < (1u << (c - 1))) {
                        m <<= 1;
                        break;
                    }
                } else if (m < top) {
                    ++m;
                    break;
                }
                m = 1;
                if (i == 0) return false;
            }
        }
    }

    bool extend_all(const Node& nd, const Rows& rows, const std::vector<std::vector<int>>& vals) {
        Rows team;
        for (const auto& r : rows)
            for (const auto& v : vals) team.push_back(child(nd, 0, r, v.data(), nullptr));
        return eval(nd.a, pack(team));
    }

    bool cover(const Node& nd, const Rows& rows) {
        size_t n = rows.size();
        bool two_way = opts_.split_gate && nd.op == Op::Or && p_.nodes[nd.a].dc && p_.nodes[nd.b].dc;
        int labels = two_way ? 2 : 3;   // 0 left, 1 right, 2 both
        std::vector<std::string> left, right;
        for (const auto& r : rows) {
            left.push_back(child(nd, 0, r, nullptr, nullptr));
            right.push_back(child(nd, 1, r, nullptr, nullptr));
        }
        std::vector<std::set<std::int64_t>> whole;
        for (const auto& t : nd.preserved) whole.push_back(image(t, rows));
        std::vector<int> lab(n, 0);
        for (;;) {
            Rows ya, yb, sa, sb;
            for (size_t i = 0; i < n; ++i) {
                if (lab[i] != 1) {
                    ya.push_back(left[i]);
                    sa.push_back(rows[i]);
                }
                if (lab[i] != 0) {
                    yb.push_back(right[i]);
                    sb.push_back(rows[i]);
                }
            }
            bool ok = true;
            if (nd.op == Op::TvpOr && !sa.empty() && !sb.empty()) {
                for (size_t t = 0; t < nd.preserved.size() && ok; ++t)
                    ok = image(nd.preserved[t], sa) == whole[t] && image(nd.preserved[t], sb) == whole[t];
            }
            if (ok && eval(nd.a, pack(ya)) && eval(nd.b, pack(yb))) return true;
            size_t i = n;
            while (i > 0) {
                --i;
                if (++lab[i] < labels) break;
                lab[i] = 0;
                if (i == 0) return false;
            }
        }
    }

    bool compute(int id, const std::string& team) {
        const Node& nd = p_.nodes[id];
        Rows rows = split(nd, team);
        if (opts_.flat_gate && nd.fo) {
            for (const auto& r : rows)
                if (!tarski(p_, b_, id, bytes(r))) return false;
            return true;
        }
        switch (nd.op) {
            case Op::Eq: case Op::NegEq: case Op::Rel: case Op::NegRel:
                for (const auto& r : rows)
                    if (!literal_holds(nd, bytes(r), b_)) return false;
                return true;
            case Op::Inc: {
                auto l = image(nd.t1, rows), r = image(nd.t2, rows);
                return std::includes(r.begin(), r.end(), l.begin(), l.end());
            }
            case Op::Exc: {
                auto l = image(nd.t1, rows), r = image(nd.t2, rows);
                for (auto v : l)
                    if (r.count(v)) return false;
                return true;
            }
            case Op::EquiExt:
                return image(nd.t1, rows) == image(nd.t2, rows);
            case Op::Dep:
                return image(nd.t1, rows).size() <= 1;
            case Op::And:
                return eval(nd.a, project(nd, 0, rows)) && eval(nd.b, project(nd, 1, rows));
            case Op::IOr:
                return eval(nd.a, project(nd, 0, rows)) || eval(nd.b, project(nd, 1, rows));
            case Op::Or: case Op::TvpOr:
                return cover(nd, rows);
            case Op::Exists: {
                std::vector<std::vector<int>> all;
                for (int v = 0; v < b_.n; ++v) all.push_back({v});
                return choose(nd, rows, all);
            }
            case Op::Forall: {
                std::vector<std::vector<int>> all;
                for (int v = 0; v < b_.n; ++v) all.push_back({v});
                return extend_all(nd, rows, all);
            }
            case Op::Store: {
                Rows out;
                std::vector<int> stored(nd.t1.size());
                for (const auto& r : rows) {
                    for (size_t j = 0; j < nd.t1.size(); ++j) stored[j] = detail::eval(nd.t1[j], bytes(r), b_);
                    out.push_back(child(nd, 0, r, nullptr, stored.data()));
                }
                return eval(nd.a, pack(out));
            }
            case Op::EIncQ:
                return choose(nd, rows, decode(image(nd.t1, rows), nd.width));
            case Op::EExcQ:
                return choose(nd, rows, decode(complement(image(nd.t1, rows), nd.width), nd.width));
            case Op::UIncQ: case Op::UIncQExc:
                return extend_all(nd, rows, decode(image(nd.t1, rows), nd.width));
            case Op::UExcQ:
                return extend_all(nd, rows, decode(complement(image(nd.t1, rows), nd.width), nd.width));
            case Op::Relativized:
                break;
        }
        throw EvalError("internal: unexpected node");
    }

    const Program& p_;
    const Bound& b_;
    std::uint64_t max_;
    EvalBudget opts_;
    std::vector<std::unordered_map<std::string, bool>> memo_;
    std::uint64_t used_ = 0;
};

}  // namespace

bool search_satisfies(const Program& p, const Bound& b, const std::string& rows, std::uint64_t max_nodes,
                      const EvalBudget& opts, std::uint64_t& used) {
    Search s(p, b, max_nodes, opts);
    try {
        bool r = s.eval(p.root, rows);
        used = s.used();
        return r;
    } catch (const BudgetExceeded&) {
        used = s.used();
        throw;
    }
}

}  // namespace teamlogic::detail
