#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "cirsolve/rational.hpp"

namespace cirsolve {

/// Maximum-product assignment of every row to a distinct column.
///
/// `weights[r][c]` is the exact weight of edge (r, c); zero marks a forbidden
/// edge. Rows may be fewer than columns; surplus columns stay unmatched, which
/// is the same as pairing them with zero-cost dummy rows. The optimisation runs
/// a Hungarian solver over -log costs, then re-scores in exact arithmetic and
/// fixes rows one at a time to return the lexicographically smallest
/// column vector among all maximum-product assignments. Near-ties in floating
/// point (within 2^-40 relative log-cost) are settled by exhaustive search.
///
/// Returns nullopt when no assignment uses positive edges only.
std::optional<std::vector<std::size_t>> max_product_assignment(const std::vector<std::vector<Rational>>& weights);

/// Exhaustive reference for max_product_assignment, exponential in the row
/// count. Same tie-breaking.
std::optional<std::vector<std::size_t>> max_product_assignment_exhaustive(
    const std::vector<std::vector<Rational>>& weights);

}  // namespace cirsolve
