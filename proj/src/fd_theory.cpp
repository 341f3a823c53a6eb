#include "cirsolve/fd_theory.hpp"

#include <algorithm>
#include <numeric>

#include "cirsolve/errors.hpp"

namespace cirsolve {

FdSet normalize(const FdSet& fds) {
    std::set<Fd> out;
    for (const auto& fd : fds.fds())
        for (const auto& a : fd.rhs)
            if (!fd.lhs.count(a)) out.insert(Fd{fd.lhs, {a}});
    return FdSet(fds.schema(), std::vector<Fd>(out.begin(), out.end()));
}

AttrSet closure(const AttrSet& attrs, const FdSet& fds) {
    for (const auto& a : attrs)
        if (!fds.schema().contains(a)) throw StructuralError("unknown attribute '" + a + "'");
    AttrSet result = attrs;
    bool changed = true;
    while (changed) {
        changed = false;
        for (const auto& fd : fds.fds()) {
            if (!std::includes(result.begin(), result.end(), fd.lhs.begin(), fd.lhs.end())) continue;
            for (const auto& a : fd.rhs) changed |= result.insert(a).second;
        }
    }
    return result;
}

bool is_sink(const Attribute& attr, const FdSet& fds) { return closure({attr}, fds) == AttrSet{attr}; }

bool equivalent(const Attribute& a, const Attribute& b, const FdSet& fds) {
    return closure({a}, fds) == closure({b}, fds);
}

namespace {

struct DisjointSet {
    std::vector<std::size_t> parent;
    explicit DisjointSet(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    std::size_t find(std::size_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    }
    void unite(std::size_t a, std::size_t b) {
        a = find(a);
        b = find(b);
        if (a != b) parent[std::max(a, b)] = std::min(a, b);
    }
};

}  // namespace

Decomposition decompose(const FdSet& fds) {
    const auto& list = fds.fds();
    const Schema& schema = fds.schema();
    DisjointSet ds(list.size());
    std::map<Attribute, std::size_t> owner;
    for (std::size_t i = 0; i < list.size(); ++i) {
        for (const auto* side : {&list[i].lhs, &list[i].rhs}) {
            for (const auto& a : *side) {
                if (!schema.is_marked(a)) continue;
                auto [it, inserted] = owner.emplace(a, i);
                if (!inserted) ds.unite(it->second, i);
            }
        }
    }
    std::map<std::size_t, std::vector<Fd>> groups;
    for (std::size_t i = 0; i < list.size(); ++i) groups[ds.find(i)].push_back(list[i]);

    Decomposition out;
    for (auto& [root, members] : groups) out.components.emplace_back(schema, std::move(members));
    AttrSet used = fds.attributes();
    for (const auto& a : schema.attributes())
        if (!used.count(a)) out.free_attributes.insert(a);
    return out;
}

// ---- Names ----------------------------------------------------------------

std::string_view name(Problem p) {
    switch (p) {
        case Problem::Possibility: return "Possibility";
        case Problem::Mpd: return "MPD";
        case Problem::Probability: return "Probability";
    }
    return "?";
}

std::string_view name(Complexity c) {
    switch (c) {
        case Complexity::PolyTime: return "PolyTime";
        case Complexity::NPHard: return "NPHard";
        case Complexity::SharpPHard: return "SharpPHard";
        case Complexity::Unknown: return "Unknown";
    }
    return "?";
}

std::string_view name(Theorem t) {
    switch (t) {
        case Theorem::BinaryTable: return "BinaryTable";
        case Theorem::SingletonDichotomy: return "Singleton";
        case Theorem::MatchingDichotomy: return "Matching";
        case Theorem::AllUncertain: return "AllUncertain";
        case Theorem::UnaryTrichotomy: return "UnaryTrichotomy";
        case Theorem::LhsCertain: return "LhsCertain";
        case Theorem::Decomposition: return "Decomposition";
    }
    return "?";
}

std::string_view citation(Theorem t) {
    switch (t) {
        case Theorem::BinaryTable:
            return "binary schema: A->?B tractable; A<->?B tractable MPD, #P-hard probability; "
                   "?A->B and ?A<->?B NP-complete possibility";
        case Theorem::SingletonDichotomy:
            return "single FD X->Y: tractable iff X is all-certain, otherwise NP-complete possibility "
                   "and #P-complete probability";
        case Theorem::MatchingDichotomy:
            return "matching X<->Y: tractable MPD iff one side is all-certain, otherwise NP-hard possibility; "
                   "probability #P-complete";
        case Theorem::AllUncertain:
            return "all attributes uncertain, no consensus FD, nontrivial: possibility NP-complete";
        case Theorem::UnaryTrichotomy:
            return "unary FDs: MPD tractable iff every uncertain attribute is a sink or equivalent to a certain "
                   "attribute; probability tractable iff every uncertain attribute is a sink";
        case Theorem::LhsCertain:
            return "left-hand sides all-certain: all three problems tractable";
        case Theorem::Decomposition:
            return "FD sets sharing only certain attributes decompose into independent sub-problems";
    }
    return "?";
}

std::string_view name(PlanKind k) {
    switch (k) {
        case PlanKind::LeftCertain: return "LeftCertain";
        case PlanKind::Matching: return "Matching";
        case PlanKind::UnaryTractable: return "UnaryTractable";
        case PlanKind::Exact: return "Exact";
    }
    return "?";
}

const Verdict& PlanComponent::verdict(Problem p) const {
    switch (p) {
        case Problem::Possibility: return possibility;
        case Problem::Mpd: return mpd;
        case Problem::Probability: return probability;
    }
    return probability;
}

const Verdict& Classification::verdict(Problem p) const {
    switch (p) {
        case Problem::Possibility: return possibility;
        case Problem::Mpd: return mpd;
        case Problem::Probability: return probability;
    }
    return probability;
}

// ---- Classifier -----------------------------------------------------------

bool as_matching(const FdSet& normalized, AttrSet& x, AttrSet& y) {
    std::map<AttrSet, AttrSet> by_lhs;
    for (const auto& fd : normalized.fds()) by_lhs[fd.lhs].insert(fd.rhs.begin(), fd.rhs.end());
    if (by_lhs.size() != 2) return false;
    const auto& [l1, r1] = *by_lhs.begin();
    const auto& [l2, r2] = *std::next(by_lhs.begin());
    AttrSet l2_minus_l1, l1_minus_l2;
    std::set_difference(l2.begin(), l2.end(), l1.begin(), l1.end(), std::inserter(l2_minus_l1, l2_minus_l1.end()));
    std::set_difference(l1.begin(), l1.end(), l2.begin(), l2.end(), std::inserter(l1_minus_l2, l1_minus_l2.end()));
    if (r1 != l2_minus_l1 || r2 != l1_minus_l2 || r1.empty() || r2.empty()) return false;
    x = l1;
    y = l2;
    return true;
}

namespace {

bool all_certain(const AttrSet& attrs, const Schema& schema) {
    return std::none_of(attrs.begin(), attrs.end(), [&](const Attribute& a) { return schema.is_marked(a); });
}

PlanComponent classify_component(const FdSet& comp, const Classification& whole) {
    const Schema& schema = comp.schema();
    PlanComponent pc;
    pc.fds = comp;

    const AttrSet attrs = comp.attributes();
    AttrSet uncertain;
    for (const auto& a : attrs)
        if (schema.is_marked(a)) uncertain.insert(a);
    const bool binary = schema.size() == 2 && !uncertain.empty();

    auto set_all = [&](Complexity poss, Complexity mpd, Complexity prob, Theorem t) {
        pc.possibility = {poss, t};
        pc.mpd = {mpd, t};
        pc.probability = {prob, t};
    };

    const bool lhs_certain = std::all_of(comp.fds().begin(), comp.fds().end(),
                                         [&](const Fd& fd) { return all_certain(fd.lhs, schema); });
    if (lhs_certain) {
        pc.kind = PlanKind::LeftCertain;
        set_all(Complexity::PolyTime, Complexity::PolyTime, Complexity::PolyTime,
                binary ? Theorem::BinaryTable : Theorem::LhsCertain);
        return pc;
    }

    const bool unary = std::all_of(comp.fds().begin(), comp.fds().end(), [](const Fd& fd) { return fd.is_unary(); });
    if (unary) {
        const Theorem t = binary ? Theorem::BinaryTable : Theorem::UnaryTrichotomy;
        bool tractable = true;
        for (const auto& a : uncertain) {
            const bool sink = whole.closures.at(a) == AttrSet{a};
            if (!sink && !whole.certain_partner.count(a)) tractable = false;
        }
        if (tractable) {
            pc.kind = PlanKind::UnaryTractable;
            set_all(Complexity::PolyTime, Complexity::PolyTime, Complexity::SharpPHard, t);
        } else {
            pc.kind = PlanKind::Exact;
            set_all(Complexity::NPHard, Complexity::NPHard, Complexity::SharpPHard, t);
        }
        return pc;
    }

    std::set<AttrSet> lhs_groups;
    for (const auto& fd : comp.fds()) lhs_groups.insert(fd.lhs);
    if (lhs_groups.size() == 1) {
        // The single left-hand side holds an uncertain attribute here.
        pc.kind = PlanKind::Exact;
        set_all(Complexity::NPHard, Complexity::NPHard, Complexity::SharpPHard, Theorem::SingletonDichotomy);
        return pc;
    }

    AttrSet x, y;
    if (as_matching(comp, x, y)) {
        const bool x_certain = all_certain(x, schema);
        const bool y_certain = all_certain(y, schema);
        if (x_certain || y_certain) {
            pc.kind = PlanKind::Matching;
            pc.certain_side = x_certain ? x : y;
            pc.other_side = x_certain ? y : x;
            set_all(Complexity::PolyTime, Complexity::PolyTime, Complexity::SharpPHard, Theorem::MatchingDichotomy);
        } else {
            pc.kind = PlanKind::Exact;
            set_all(Complexity::NPHard, Complexity::NPHard, Complexity::SharpPHard, Theorem::MatchingDichotomy);
        }
        return pc;
    }

    const bool no_consensus =
        std::none_of(comp.fds().begin(), comp.fds().end(), [](const Fd& fd) { return fd.lhs.empty(); });
    if (uncertain == attrs && no_consensus) {
        pc.kind = PlanKind::Exact;
        set_all(Complexity::NPHard, Complexity::NPHard, Complexity::NPHard, Theorem::AllUncertain);
        return pc;
    }

    pc.kind = PlanKind::Exact;
    set_all(Complexity::Unknown, Complexity::Unknown, Complexity::Unknown, Theorem::Decomposition);
    return pc;
}

int hardness_rank(Complexity c) {
    switch (c) {
        case Complexity::NPHard: return 3;
        case Complexity::SharpPHard: return 2;
        case Complexity::Unknown: return 1;
        case Complexity::PolyTime: return 0;
    }
    return 0;
}

Verdict combine(const std::vector<PlanComponent>& comps, Problem p) {
    if (comps.empty()) return {Complexity::PolyTime, Theorem::LhsCertain};
    const PlanComponent* worst = &comps.front();
    for (const auto& c : comps)
        if (hardness_rank(c.verdict(p).complexity) > hardness_rank(worst->verdict(p).complexity)) worst = &c;
    Verdict v = worst->verdict(p);
    if (v.complexity == Complexity::PolyTime && comps.size() > 1) v.theorem = Theorem::Decomposition;
    return v;
}

}  // namespace

Classification classify(const FdSet& fds) {
    Classification out;
    out.normalized = normalize(fds);
    const Schema& schema = out.normalized.schema();

    for (const auto& a : schema.attributes()) out.closures.emplace(a, closure({a}, out.normalized));
    for (const auto& a : schema.marked()) {
        for (const auto& b : schema.attributes()) {
            if (schema.is_marked(b)) continue;
            if (out.closures.at(a) == out.closures.at(b)) {
                out.certain_partner.emplace(a, b);
                break;
            }
        }
    }
    // Attribute order in the schema is not alphabetical; keep the smallest name.
    for (auto& [a, partner] : out.certain_partner)
        for (const auto& b : schema.attributes())
            if (!schema.is_marked(b) && out.closures.at(a) == out.closures.at(b) && b < partner) partner = b;

    Decomposition d = decompose(out.normalized);
    out.free_attributes = d.free_attributes;
    for (const auto& comp : d.components) out.components.push_back(classify_component(comp, out));

    out.possibility = combine(out.components, Problem::Possibility);
    out.mpd = combine(out.components, Problem::Mpd);
    out.probability = combine(out.components, Problem::Probability);
    return out;
}

}  // namespace cirsolve
