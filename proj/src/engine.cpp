#include "cirsolve/engine.hpp"

#include "cirsolve/errors.hpp"
#include "cirsolve/exact_solvers.hpp"
#include "cirsolve/fd_theory.hpp"
#include "cirsolve/poly_solvers.hpp"

namespace cirsolve {

std::string_view name(SolverChoice s) {
    switch (s) {
        case SolverChoice::Auto: return "auto";
        case SolverChoice::Poly: return "poly";
        case SolverChoice::Exact: return "exact";
        case SolverChoice::Oracle: return "oracle";
    }
    return "?";
}

std::optional<SolverChoice> parse_solver(std::string_view text) {
    for (auto s : {SolverChoice::Auto, SolverChoice::Poly, SolverChoice::Exact, SolverChoice::Oracle})
        if (name(s) == text) return s;
    return std::nullopt;
}

namespace {

void require_compatible(const Cir& cir, const FdSet& fds) {
    if (!(cir.schema() == fds.schema())) throw StructuralError("FD set and CIR have different schemas");
}

void check_worlds(std::uint64_t worlds, const SolveOptions& options) {
    if (worlds > options.world_budget)
        throw ResourceError("exact search refuses " + std::to_string(worlds) + " samples (budget " +
                                std::to_string(options.world_budget) + ")",
                            worlds);
}

AttrSet marked_of(const AttrSet& attrs, const Schema& schema) {
    AttrSet out;
    for (const auto& a : attrs)
        if (schema.is_marked(a)) out.insert(a);
    return out;
}

// Label such as "auto[LeftCertain,Exact]" listing the plan kinds used.
std::string label(std::string_view head, const std::set<std::string_view>& kinds) {
    std::string out(head);
    if (kinds.empty()) return out;
    out += '[';
    bool first = true;
    for (auto k : kinds) {
        if (!first) out += ',';
        out += k;
        first = false;
    }
    return out + ']';
}

ComponentSolution exact_component(const Cir& cir, const PlanComponent& pc, const SolveOptions& options) {
    check_worlds(cir.world_count(pc.fds.attributes()), options);
    ComponentSolution sol;
    auto best = bnb_mpd(cir, pc.fds, options.node_budget);
    if (!best) return sol;
    sol.probability = Rational(1);
    for (const auto& a : marked_of(pc.fds.attributes(), cir.schema())) {
        for (const auto& [tid, row] : cir.rows()) {
            const Value& v = best->first.value(tid, a);
            sol.assignment.emplace(CellRef{tid, a}, v);
            sol.probability *= cir.distribution(tid, a).probability(v);
        }
    }
    sol.feasible = true;
    return sol;
}

ComponentSolution poly_component(const Cir& cir, const PlanComponent& pc, const Classification& cls) {
    switch (pc.kind) {
        case PlanKind::LeftCertain: return solve_left_certain(cir, pc.fds);
        case PlanKind::Matching: return solve_matching(cir, pc.certain_side, pc.other_side);
        case PlanKind::UnaryTractable: return solve_unary_tractable(cir, pc.fds, cls.certain_partner);
        case PlanKind::Exact: break;
    }
    throw MisuseError("no polynomial plan for component");
}

MpdResult from_weighted(const std::optional<WeightedSample>& best, std::string solver) {
    MpdResult out;
    out.solver = std::move(solver);
    if (!best) return out;
    out.feasible = true;
    out.sample = best->first;
    out.probability = best->second;
    return out;
}

}  // namespace

MpdResult solve_mpd(const Cir& cir, const FdSet& fds, const SolveOptions& options) {
    require_compatible(cir, fds);
    switch (options.solver) {
        case SolverChoice::Oracle: {
            check_worlds(cir.world_count(), options);
            return from_weighted(oracle_enumerate(cir, fds, options.world_budget).best, "oracle");
        }
        case SolverChoice::Exact:
            check_worlds(cir.world_count(fds.attributes()), options);
            return from_weighted(bnb_mpd(cir, fds, options.node_budget), "exact");
        case SolverChoice::Auto:
        case SolverChoice::Poly: break;
    }

    const Classification cls = classify(fds);
    const bool poly_only = options.solver == SolverChoice::Poly;
    if (poly_only)
        for (const auto& pc : cls.components)
            if (pc.kind == PlanKind::Exact)
                throw MisuseError("no polynomial MPD plan for component " + std::string(name(pc.mpd.theorem)));

    std::vector<ComponentSolution> parts;
    std::set<std::string_view> kinds;
    for (const auto& pc : cls.components) {
        kinds.insert(name(pc.kind));
        parts.push_back(pc.kind == PlanKind::Exact ? exact_component(cir, pc, options) : poly_component(cir, pc, cls));
        if (!parts.back().feasible) {
            MpdResult out;
            out.solver = label(name(options.solver), kinds);
            return out;
        }
    }
    CombinedSolution combined = combine_solutions(cir, parts, free_cell_choices(cir, cls.free_attributes));
    MpdResult out;
    out.solver = label(name(options.solver), kinds);
    out.feasible = combined.feasible;
    out.probability = combined.probability;
    if (combined.feasible) out.sample = std::move(combined.sample);
    return out;
}

ProbabilityResult solve_probability(const Cir& cir, const FdSet& fds, const SolveOptions& options) {
    require_compatible(cir, fds);
    switch (options.solver) {
        case SolverChoice::Oracle:
            check_worlds(cir.world_count(), options);
            return {oracle_enumerate(cir, fds, options.world_budget).total, "oracle"};
        case SolverChoice::Exact:
            check_worlds(cir.world_count(fds.attributes()), options);
            return {exact_prob(cir, fds, options.node_budget), "exact"};
        case SolverChoice::Auto:
        case SolverChoice::Poly: break;
    }

    const Classification cls = classify(fds);
    if (options.solver == SolverChoice::Poly)
        for (const auto& pc : cls.components)
            if (pc.kind != PlanKind::LeftCertain)
                throw MisuseError("no polynomial probability plan for component " +
                                  std::string(name(pc.probability.theorem)));

    Rational total(1);
    std::set<std::string_view> kinds;
    for (const auto& pc : cls.components) {
        if (pc.kind == PlanKind::LeftCertain) {
            kinds.insert(name(PlanKind::LeftCertain));
            total *= prob_left_certain(cir, pc.fds);
        } else {
            kinds.insert(name(PlanKind::Exact));
            check_worlds(cir.world_count(pc.fds.attributes()), options);
            total *= exact_prob(cir, pc.fds, options.node_budget);
        }
        if (total.is_zero()) break;
    }
    return {total, label(name(options.solver), kinds)};
}

bool possibly_consistent(const Cir& cir, const FdSet& fds, const SolveOptions& options) {
    return solve_mpd(cir, fds, options).feasible;
}

}  // namespace cirsolve
