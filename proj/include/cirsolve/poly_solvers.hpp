#pragma once

#include <map>
#include <vector>

#include "cirsolve/model.hpp"

namespace cirsolve {

/// Chosen values for the uncertain cells one solver owns.
struct ComponentSolution {
    std::map<CellRef, Value> assignment;
    /// Product of the chosen cells' probabilities; zero when infeasible.
    Rational probability;
    bool feasible = false;
};

/// Most probable consistent choice for FD sets whose left-hand sides are all
/// certain. Tuples that agree on the left-hand side of any FD with right-hand
/// side ?A are joined into one group; each group takes the value maximising
/// the product of its members' probabilities (smallest value on ties).
/// Owns every marked cell of the attributes the FDs mention.
/// Throws MisuseError if some left-hand side holds an uncertain attribute.
ComponentSolution solve_left_certain(const Cir& cir, const FdSet& fds);

/// Exact probability of consistency for left-certain FD sets: the product over
/// groups of the sum over candidate values of the group's joint probability.
Rational prob_left_certain(const Cir& cir, const FdSet& fds);

/// Most probable consistent choice under the matching constraint X <-> Y where
/// one side is all-certain. Each row's Y cells are tupled into a product
/// distribution and groups of equal X-projections are matched injectively to
/// Y-tuples by maximum product. Owns the marked cells of the uncertain side.
/// Throws MisuseError if neither side is all-certain or one side contains the
/// other.
ComponentSolution solve_matching(const Cir& cir, const AttrSet& x, const AttrSet& y);

/// Most probable consistent choice for unary FD sets in which every uncertain
/// attribute is a sink or equivalent to a certain attribute. Each non-sink ?A
/// is matched against its certain partner; the rest, with partners
/// substituted, is solved as a left-certain set.
ComponentSolution solve_unary_tractable(const Cir& cir, const FdSet& fds);

/// Same, with partners taken from an enclosing FD set of which `fds` is a
/// decomposition component.
ComponentSolution solve_unary_tractable(const Cir& cir, const FdSet& fds,
                                        const std::map<Attribute, Attribute>& certain_partner);

/// Per-cell argmax (smallest value on ties) for the marked cells of `attrs`.
std::map<CellRef, Value> free_cell_choices(const Cir& cir, const AttrSet& attrs);

struct CombinedSolution {
    bool feasible = false;
    Relation sample;
    Rational probability;
};

/// Joins component solutions and free-cell choices into one full sample.
/// Throws MisuseError if two owners claim the same cell or a marked cell is
/// left without an owner.
CombinedSolution combine_solutions(const Cir& cir, const std::vector<ComponentSolution>& parts,
                                   const std::map<CellRef, Value>& free_cells);

}  // namespace cirsolve
