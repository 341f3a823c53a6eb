#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "cirsolve/model.hpp"

namespace cirsolve {

enum class SolverChoice {
    Auto,    ///< polynomial plan per component, exact search for the rest
    Poly,    ///< polynomial plans only; MisuseError when some component has none
    Exact,   ///< branch and bound / exact enumeration on the whole instance
    Oracle,  ///< brute-force enumeration of every sample
};

std::string_view name(SolverChoice s);
/// Parses "auto", "poly", "exact" or "oracle"; nullopt otherwise.
std::optional<SolverChoice> parse_solver(std::string_view text);

struct SolveOptions {
    SolverChoice solver = SolverChoice::Auto;
    /// Exponential solvers refuse instances (or components) with more samples.
    std::uint64_t world_budget = 1u << 20;
    /// Search node budget; zero means unlimited.
    std::uint64_t node_budget = 0;
};

struct MpdResult {
    bool feasible = false;
    /// A most probable consistent sample, when one exists.
    std::optional<Relation> sample;
    Rational probability;
    /// Which solvers produced the answer, e.g. "auto[LeftCertain,Exact]".
    std::string solver;
};

struct ProbabilityResult {
    Rational probability;
    std::string solver;
};

/// Most probable consistent sample. Throws ResourceError when an exponential
/// solver would exceed the world budget.
MpdResult solve_mpd(const Cir& cir, const FdSet& fds, const SolveOptions& options = {});

/// Pr_U(F), the probability that a random sample satisfies the FDs.
ProbabilityResult solve_probability(const Cir& cir, const FdSet& fds, const SolveOptions& options = {});

/// True iff some sample satisfies the FDs.
bool possibly_consistent(const Cir& cir, const FdSet& fds, const SolveOptions& options = {});

}  // namespace cirsolve
