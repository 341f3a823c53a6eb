#pragma once

#include <map>
#include <string_view>
#include <vector>

#include "cirsolve/model.hpp"

namespace cirsolve {

/// Splits right-hand sides into single attributes, drops trivial FDs and
/// duplicates. The result is sorted.
FdSet normalize(const FdSet& fds);

/// Least superset of `attrs` closed under the FDs.
AttrSet closure(const AttrSet& attrs, const FdSet& fds);

/// True iff the closure of {attr} is {attr}.
bool is_sink(const Attribute& attr, const FdSet& fds);

/// True iff {a} and {b} have the same closure.
bool equivalent(const Attribute& a, const Attribute& b, const FdSet& fds);

/// Independent sub-problems: FDs connected through shared uncertain
/// attributes. Distinct components share certain attributes only.
struct Decomposition {
    std::vector<FdSet> components;
    /// Schema attributes that no FD mentions.
    AttrSet free_attributes;
};

Decomposition decompose(const FdSet& fds);

// ---- Classification --------------------------------------------------------

enum class Problem { Possibility, Mpd, Probability };
enum class Complexity { PolyTime, NPHard, SharpPHard, Unknown };

/// Result that justifies a verdict.
enum class Theorem {
    BinaryTable,
    SingletonDichotomy,
    MatchingDichotomy,
    AllUncertain,
    UnaryTrichotomy,
    LhsCertain,
    Decomposition,
};

std::string_view name(Problem p);
std::string_view name(Complexity c);
std::string_view name(Theorem t);
/// One-line statement of the result behind a theorem tag.
std::string_view citation(Theorem t);

struct Verdict {
    Complexity complexity = Complexity::Unknown;
    Theorem theorem = Theorem::Decomposition;
    friend bool operator==(const Verdict&, const Verdict&) = default;
};

/// Solver assigned to one decomposition component.
enum class PlanKind {
    LeftCertain,     ///< grouped solver over union-find components
    Matching,        ///< X <-> Y with one all-certain side
    UnaryTractable,  ///< equivalence rewriting into matchings plus a left-certain rest
    Exact,           ///< exponential fallback
};

std::string_view name(PlanKind k);

struct PlanComponent {
    FdSet fds;
    PlanKind kind = PlanKind::Exact;
    /// For Matching: the all-certain side and the other side.
    AttrSet certain_side;
    AttrSet other_side;
    Verdict possibility;
    Verdict mpd;
    Verdict probability;

    const Verdict& verdict(Problem p) const;
};

struct Classification {
    FdSet normalized;
    std::vector<PlanComponent> components;
    /// Attributes outside every FD; their marked cells are solved per cell.
    AttrSet free_attributes;
    Verdict possibility;
    Verdict mpd;
    Verdict probability;
    /// Closure of every single attribute under the full FD set.
    std::map<Attribute, AttrSet> closures;
    /// Uncertain attribute -> smallest equivalent certain attribute.
    std::map<Attribute, Attribute> certain_partner;

    const Verdict& verdict(Problem p) const;
    bool polytime(Problem p) const { return verdict(p).complexity == Complexity::PolyTime; }
};

/// Complexity verdict per problem plus an executable solver plan. Hard and
/// unknown components are planned as Exact; classification never blocks
/// solving.
Classification classify(const FdSet& fds);

/// Detects a matching constraint X <-> Y among normalized FDs: exactly two
/// distinct left-hand sides L1, L2 with right-hand sides L2 \ L1 and L1 \ L2.
bool as_matching(const FdSet& normalized, AttrSet& x, AttrSet& y);

}  // namespace cirsolve
