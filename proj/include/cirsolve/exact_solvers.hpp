#pragma once

#include <cstdint>
#include <optional>
#include <utility>

#include "cirsolve/errors.hpp"
#include "cirsolve/model.hpp"

namespace cirsolve {

using WeightedSample = std::pair<Relation, Rational>;

struct OracleResult {
    /// First consistent sample of strictly maximal probability in enumeration
    /// order; nullopt when no sample is consistent.
    std::optional<WeightedSample> best;
    /// Sum of the probabilities of all consistent samples.
    Rational total;
    std::uint64_t worlds = 0;
    std::uint64_t consistent = 0;
};

/// Reference oracle: enumerates every sample of the CIR, without pruning or
/// decomposition, and checks each one against the FDs. Throws ResourceError
/// carrying the world count when it exceeds `world_cap`.
OracleResult oracle_enumerate(const Cir& cir, const FdSet& fds, std::uint64_t world_cap = 1u << 20);

/// Raised by the search solvers when the node budget runs out.
class BudgetExceeded : public ResourceError {
public:
    BudgetExceeded(std::uint64_t nodes, std::optional<WeightedSample> incumbent)
        : ResourceError("node budget exhausted after " + std::to_string(nodes) + " nodes", nodes),
          incumbent_(std::move(incumbent)) {}
    /// Best consistent sample found before the budget ran out, if any.
    const std::optional<WeightedSample>& incumbent() const { return incumbent_; }

private:
    std::optional<WeightedSample> incumbent_;
};

/// Exact most probable consistent sample by depth-first branch and bound.
/// Cells outside the FD attributes take their most probable value. A
/// `node_budget` of zero means unlimited. Returns nullopt when Pr_U(F) = 0.
std::optional<WeightedSample> bnb_mpd(const Cir& cir, const FdSet& fds, std::uint64_t node_budget = 0);

/// Exact Pr_U(F) by depth-first enumeration with consistency pruning.
Rational exact_prob(const Cir& cir, const FdSet& fds, std::uint64_t node_budget = 0);

}  // namespace cirsolve
