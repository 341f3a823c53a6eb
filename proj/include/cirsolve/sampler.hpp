#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "cirsolve/model.hpp"

namespace cirsolve {

/// Order in which the uncertain cells are drawn; a permutation of all of them.
using CellOrder = std::vector<CellRef>;

/// Exact Pr_U(F) for any CIR over the same schema.
using ProbabilityBackend = std::function<Rational(const Cir&, const FdSet&)>;

/// (tuple-id, attribute name) lexicographic order.
CellOrder default_cell_order(const Cir& cir);

/// Uniform draw in [0, 1) on the grid k / 2^53 for cell `index` of a run with
/// `seed`. Counter-based: each cell has its own substream, so draws do not
/// depend on how many values earlier cells consumed.
Rational uniform_draw(std::uint64_t seed, std::uint64_t index);

/// Seed for the `draw`-th sample of a batch started with `seed`.
std::uint64_t batch_seed(std::uint64_t seed, std::uint64_t draw);

/// Draws a sample from Pr(r | r satisfies F) one cell at a time. Each
/// candidate value a of the next cell is weighted by Pr(a) times the backend's
/// probability of consistency with the prefix and a fixed as point
/// distributions. Throws InfeasibleError when Pr_U(F) = 0 and StructuralError
/// when `order` is not a permutation of the uncertain cells. An empty order
/// selects the default.
Relation conditional_sample(const Cir& cir, const FdSet& fds, const ProbabilityBackend& backend, std::uint64_t seed,
                            const CellOrder& order = {});

/// Per-cell sampling from the CIR's own distributions, with the same draw
/// procedure as conditional_sample.
Relation unconditional_sample(const Cir& cir, std::uint64_t seed, const CellOrder& order = {});

/// Exact probability that conditional_sample emits r: the product of the
/// adjusted conditional weights along r's values. Equals Pr(r) / Pr_U(F).
/// Throws MisuseError when r is not a consistent sample.
Rational path_weight(const Cir& cir, const FdSet& fds, const Relation& r, const ProbabilityBackend& backend,
                     const CellOrder& order = {});

}  // namespace cirsolve
