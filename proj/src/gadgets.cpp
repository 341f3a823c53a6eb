#include "cirsolve/gadgets.hpp"

#include <algorithm>
#include <cerrno>
#include <cstdlib>
#include <numeric>
#include <set>
#include <sstream>
#include <string>

#include "cirsolve/errors.hpp"

namespace cirsolve {

namespace {

std::string literal_name(int lit) { return (lit > 0 ? "+x" : "-x") + std::to_string(std::abs(lit)); }

std::vector<int> dedup(const std::vector<int>& clause) {
    std::vector<int> out;
    for (int lit : clause)
        if (std::find(out.begin(), out.end(), lit) == out.end()) out.push_back(lit);
    return out;
}

}  // namespace

void CnfFormula::validate() const {
    if (variables < 0) throw MisuseError("negative variable count");
    for (std::size_t i = 0; i < clauses.size(); ++i) {
        if (clauses[i].empty()) throw MisuseError("clause " + std::to_string(i + 1) + " is empty");
        for (int lit : clauses[i])
            if (lit == 0 || std::abs(lit) > variables)
                throw MisuseError("clause " + std::to_string(i + 1) + " has literal " + std::to_string(lit) +
                                  " outside 1.." + std::to_string(variables));
    }
}

bool CnfFormula::non_mixed() const {
    return std::all_of(clauses.begin(), clauses.end(), [](const std::vector<int>& c) {
        return std::all_of(c.begin(), c.end(), [](int l) { return l > 0; }) ||
               std::all_of(c.begin(), c.end(), [](int l) { return l < 0; });
    });
}

bool CnfFormula::satisfiable() const {
    validate();
    if (variables > 30) throw ResourceError("brute-force SAT limited to 30 variables", variables);
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << variables); ++mask) {
        const bool ok = std::all_of(clauses.begin(), clauses.end(), [&](const std::vector<int>& c) {
            return std::any_of(c.begin(), c.end(), [&](int l) {
                const bool value = (mask >> (std::abs(l) - 1)) & 1;
                return l > 0 ? value : !value;
            });
        });
        if (ok) return true;
    }
    return false;
}

void BipartiteGraph::validate() const {
    for (const auto& [u, v] : edges)
        if (u >= left || v >= right)
            throw MisuseError("edge (" + std::to_string(u) + ", " + std::to_string(v) + ") leaves the vertex ranges");
}

std::vector<std::size_t> BipartiteGraph::neighbours(std::size_t v) const {
    std::set<std::size_t> out;
    for (const auto& [a, b] : edges)
        if (a == v) out.insert(b);
    return {out.begin(), out.end()};
}

BigInt BipartiteGraph::count_perfect_matchings() const {
    validate();
    if (left != right) return 0;
    std::set<std::pair<std::size_t, std::size_t>> adjacent(edges.begin(), edges.end());
    std::vector<std::size_t> perm(right);
    std::iota(perm.begin(), perm.end(), 0);
    BigInt count = 0;
    do {
        bool ok = true;
        for (std::size_t v = 0; v < left && ok; ++v) ok = adjacent.count({v, perm[v]}) != 0;
        if (ok) ++count;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return count;
}

Gadget gadget_nm_sat(const CnfFormula& phi) {
    phi.validate();
    if (!phi.non_mixed()) throw MisuseError("NM-SAT encoding needs every clause all-positive or all-negative");
    Schema schema({"A", "B"}, {"A"});
    std::map<TupleId, Cir::Row> rows;
    for (std::size_t i = 0; i < phi.clauses.size(); ++i) {
        std::vector<Value> vars;
        for (int lit : dedup(phi.clauses[i])) vars.emplace_back("x:" + std::to_string(std::abs(lit)));
        const bool positive = phi.clauses[i].front() > 0;
        rows.emplace("c:" + std::to_string(i + 1),
                     Cir::Row{Distribution::uniform(vars), Value(positive ? "true" : "false")});
    }
    Cir cir(schema, std::move(rows));
    FdSet fds(schema, {Fd{{"A"}, {"B"}}});
    return {std::move(cir), std::move(fds), 1};
}

Gadget gadget_perfect_matching(const BipartiteGraph& g) {
    g.validate();
    if (g.left != g.right)
        throw MisuseError("perfect-matching encoding needs equal sides, got " + std::to_string(g.left) + " and " +
                          std::to_string(g.right));
    Schema schema({"A", "B"}, {"B"});
    std::map<TupleId, Cir::Row> rows;
    BigInt scale = 1;
    for (std::size_t v = 0; v < g.left; ++v) {
        const auto n = g.neighbours(v);
        if (n.empty()) throw MisuseError("left vertex " + std::to_string(v) + " has no neighbour");
        std::vector<Value> values;
        for (std::size_t u : n) values.emplace_back("v:" + std::to_string(u));
        scale *= static_cast<unsigned long>(n.size());
        rows.emplace("t:" + std::to_string(v), Cir::Row{Value("v:" + std::to_string(v)), Distribution::uniform(values)});
    }
    Cir cir(schema, std::move(rows));
    FdSet fds(schema, {Fd{{"A"}, {"B"}}, Fd{{"B"}, {"A"}}});
    return {std::move(cir), std::move(fds), scale};
}

Gadget gadget_sat_matching(const CnfFormula& phi) {
    phi.validate();
    Schema schema({"A", "B"}, {"A", "B"});
    std::map<TupleId, Cir::Row> rows;
    std::vector<std::vector<int>> clauses;
    for (const auto& c : phi.clauses) clauses.push_back(dedup(c));

    auto pair_value = [](std::size_t clause, int lit) {
        return Value("p:c" + std::to_string(clause + 1) + ":" + literal_name(lit));
    };
    for (std::size_t i = 0; i < clauses.size(); ++i) {
        std::vector<Value> pairs;
        for (int lit : clauses[i]) pairs.push_back(pair_value(i, lit));
        rows.emplace("c:" + std::to_string(i + 1),
                     Cir::Row{Value("c:" + std::to_string(i + 1)), Distribution::uniform(pairs)});
    }
    std::size_t conflicts = 0;
    for (std::size_t i = 0; i < clauses.size(); ++i)
        for (std::size_t j = i + 1; j < clauses.size(); ++j)
            for (int lit : clauses[i]) {
                if (std::find(clauses[j].begin(), clauses[j].end(), -lit) == clauses[j].end()) continue;
                const auto d = Distribution::uniform({pair_value(i, lit), pair_value(j, -lit)});
                rows.emplace("k:" + std::to_string(++conflicts), Cir::Row{d, d});
            }
    Cir cir(schema, std::move(rows));
    FdSet fds(schema, {Fd{{"A"}, {"B"}}, Fd{{"B"}, {"A"}}});
    return {std::move(cir), std::move(fds), 1};
}

namespace {

std::string location(std::size_t line) { return "line " + std::to_string(line); }

// Parses a whole token as a signed integer.
bool to_long(const std::string& token, long& out) {
    char* end = nullptr;
    errno = 0;
    out = std::strtol(token.c_str(), &end, 10);
    return !token.empty() && end == token.c_str() + token.size() && errno == 0;
}

}  // namespace

CnfFormula parse_dimacs(std::string_view text) {
    std::istringstream in{std::string(text)};
    std::string line;
    std::size_t number = 0;
    CnfFormula phi;
    bool header = false;
    long declared_clauses = 0;
    std::vector<int> current;
    while (std::getline(in, line)) {
        ++number;
        std::istringstream tokens(line);
        std::string first;
        if (!(tokens >> first) || first == "c" || first[0] == '%') continue;
        if (first == "p") {
            std::string format, vars, count;
            long v = 0;
            if (header) throw ParseError(location(number), "duplicate problem line");
            if (!(tokens >> format >> vars >> count) || format != "cnf" || !to_long(vars, v) ||
                !to_long(count, declared_clauses) || v < 0 || declared_clauses < 0)
                throw ParseError(location(number), "expected 'p cnf <variables> <clauses>'");
            phi.variables = static_cast<int>(v);
            header = true;
            continue;
        }
        if (!header) throw ParseError(location(number), "clause before the 'p cnf' line");
        std::string token = first;
        do {
            long lit = 0;
            if (!to_long(token, lit)) throw ParseError(location(number), "bad literal '" + token + "'");
            if (lit == 0) {
                if (current.empty()) throw ParseError(location(number), "empty clause");
                phi.clauses.push_back(std::move(current));
                current.clear();
                continue;
            }
            if (std::abs(lit) > phi.variables)
                throw ParseError(location(number), "literal " + token + " exceeds the declared variable count");
            current.push_back(static_cast<int>(lit));
        } while (tokens >> token);
    }
    if (!header) throw ParseError(location(number), "missing 'p cnf' line");
    if (!current.empty()) phi.clauses.push_back(std::move(current));
    if (static_cast<long>(phi.clauses.size()) != declared_clauses)
        throw ParseError(location(number), "header declares " + std::to_string(declared_clauses) + " clauses, found " +
                                               std::to_string(phi.clauses.size()));
    return phi;
}

BipartiteGraph parse_edge_list(std::string_view text) {
    std::istringstream in{std::string(text)};
    std::string line;
    std::size_t number = 0;
    BipartiteGraph g;
    bool sized = false;
    std::size_t max_left = 0, max_right = 0;
    while (std::getline(in, line)) {
        ++number;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        std::istringstream tokens(line);
        std::string a, b, extra;
        if (!(tokens >> a)) continue;
        if (a == "p") {
            long l = 0, r = 0;
            std::string ls, rs;
            if (!(tokens >> ls >> rs) || !to_long(ls, l) || !to_long(rs, r) || l < 0 || r < 0 || (tokens >> extra))
                throw ParseError(location(number), "expected 'p <left> <right>'");
            g.left = static_cast<std::size_t>(l);
            g.right = static_cast<std::size_t>(r);
            sized = true;
            continue;
        }
        long u = 0, v = 0;
        if (!(tokens >> b) || (tokens >> extra) || !to_long(a, u) || !to_long(b, v) || u < 0 || v < 0)
            throw ParseError(location(number), "expected an edge 'u v' of non-negative ids");
        g.edges.emplace_back(static_cast<std::size_t>(u), static_cast<std::size_t>(v));
        max_left = std::max(max_left, static_cast<std::size_t>(u) + 1);
        max_right = std::max(max_right, static_cast<std::size_t>(v) + 1);
    }
    if (!sized) {
        g.left = max_left;
        g.right = max_right;
    }
    try {
        g.validate();
    } catch (const MisuseError& e) {
        throw ParseError("edge list", e.what());
    }
    return g;
}

}  // namespace cirsolve
