#pragma once

#include <cstddef>
#include <string_view>
#include <utility>
#include <vector>

#include "cirsolve/model.hpp"

namespace cirsolve {

/// CNF over variables 1..variables; a literal is +v or -v.
struct CnfFormula {
    int variables = 0;
    std::vector<std::vector<int>> clauses;

    /// Throws MisuseError on an empty clause or a literal outside the
    /// declared variables.
    void validate() const;
    /// Every clause all-positive or all-negative.
    bool non_mixed() const;
    /// Brute force over all 2^variables assignments.
    bool satisfiable() const;
};

/// Bipartite graph with left vertices 0..left-1 and right vertices 0..right-1.
struct BipartiteGraph {
    std::size_t left = 0;
    std::size_t right = 0;
    std::vector<std::pair<std::size_t, std::size_t>> edges;

    /// Throws MisuseError when an edge leaves the vertex ranges.
    void validate() const;
    /// Neighbours of left vertex v, ascending and deduplicated.
    std::vector<std::size_t> neighbours(std::size_t v) const;
    /// Number of perfect matchings by brute-force permutation search.
    BigInt count_perfect_matchings() const;
};

struct Gadget {
    Cir cir;
    FdSet fds;
    /// Multiplier turning Pr_U(F) into a count; 1 where not meaningful.
    BigInt scale = 1;
};

/// Non-mixed SAT encoding over {?A, B} with {?A -> B}: one tuple per clause,
/// ?A uniform over the clause's variables "x:i", B "true" or "false" by clause
/// sign. Possibly consistent iff the formula is satisfiable. Throws
/// MisuseError on a mixed clause.
Gadget gadget_nm_sat(const CnfFormula& phi);

/// Perfect-matching counting encoding over {A, ?B} with {A <-> ?B}: one tuple
/// per left vertex v with A = "v:v" and ?B uniform over its neighbours.
/// Pr_U(F) * scale is the number of perfect matchings, scale = prod |N_v|.
/// Throws MisuseError when the sides differ in size or a left vertex is
/// isolated.
Gadget gadget_perfect_matching(const BipartiteGraph& g);

/// SAT encoding over {?A, ?B} with {?A <-> ?B}: one tuple per clause c with
/// ?A the point "c:i" and ?B uniform over "p:c<i>:<literal>", plus one tuple
/// per complementary literal pair across two clauses, uniform over the two
/// pair values in both columns. Possibly consistent iff satisfiable.
Gadget gadget_sat_matching(const CnfFormula& phi);

/// DIMACS CNF ("c" comments, "p cnf V C" header, 0-terminated clauses).
/// Throws ParseError with a line location.
CnfFormula parse_dimacs(std::string_view text);

/// Edge list: one "u v" pair of 0-based vertex ids per line; "#" starts a
/// comment; an optional "p <left> <right>" line declares the side sizes,
/// which otherwise default to one past the largest id on each side.
BipartiteGraph parse_edge_list(std::string_view text);

}  // namespace cirsolve
