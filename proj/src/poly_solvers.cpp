#include "cirsolve/poly_solvers.hpp"

#include <algorithm>
#include <numeric>

#include "cirsolve/assignment.hpp"
#include "cirsolve/errors.hpp"
#include "cirsolve/fd_theory.hpp"

namespace cirsolve {

namespace {

void require_compatible(const Cir& cir, const FdSet& fds) {
    if (!(cir.schema() == fds.schema())) throw StructuralError("FD set and CIR have different schemas");
}

bool all_certain(const AttrSet& attrs, const Schema& schema) {
    return std::none_of(attrs.begin(), attrs.end(), [&](const Attribute& a) { return schema.is_marked(a); });
}

std::vector<Value> certain_projection(const Cir& cir, const TupleId& tid, const AttrSet& attrs) {
    std::vector<Value> key;
    key.reserve(attrs.size());
    for (const auto& a : attrs) key.push_back(cir.certain(tid, a));
    return key;
}

class Groups {
public:
    explicit Groups(std::vector<TupleId> tids) : tids_(std::move(tids)), parent_(tids_.size()) {
        std::iota(parent_.begin(), parent_.end(), 0);
    }
    std::size_t find(std::size_t x) {
        while (parent_[x] != x) x = parent_[x] = parent_[parent_[x]];
        return x;
    }
    void unite(std::size_t a, std::size_t b) {
        a = find(a);
        b = find(b);
        if (a != b) parent_[std::max(a, b)] = std::min(a, b);
    }
    std::vector<std::vector<TupleId>> members() {
        std::map<std::size_t, std::vector<TupleId>> by_root;
        for (std::size_t i = 0; i < tids_.size(); ++i) by_root[find(i)].push_back(tids_[i]);
        std::vector<std::vector<TupleId>> out;
        for (auto& [root, m] : by_root) out.push_back(std::move(m));
        return out;
    }

private:
    std::vector<TupleId> tids_;
    std::vector<std::size_t> parent_;
};

struct LeftCertainShape {
    bool certain_violation = false;
    /// Per uncertain attribute: groups of tuples forced to agree.
    std::map<Attribute, std::vector<std::vector<TupleId>>> groups;
};

LeftCertainShape analyse_left_certain(const Cir& cir, const FdSet& fds) {
    require_compatible(cir, fds);
    const FdSet f = normalize(fds);
    const Schema& schema = cir.schema();
    for (const auto& fd : f.fds())
        if (!all_certain(fd.lhs, schema))
            throw MisuseError("left-certain solver given an FD with uncertain left-hand side: " + to_string(fd));

    LeftCertainShape shape;
    std::vector<TupleId> tids;
    for (const auto& [tid, row] : cir.rows()) tids.push_back(tid);

    std::map<Attribute, std::vector<const Fd*>> by_rhs;
    for (const auto& fd : f.fds()) by_rhs[*fd.rhs.begin()].push_back(&fd);

    for (const auto& [rhs, list] : by_rhs) {
        if (!schema.is_marked(rhs)) {
            for (const Fd* fd : list) {
                std::map<std::vector<Value>, Value> seen;
                for (const auto& tid : tids) {
                    auto [it, inserted] = seen.emplace(certain_projection(cir, tid, fd->lhs), cir.certain(tid, rhs));
                    if (!inserted && it->second != cir.certain(tid, rhs)) shape.certain_violation = true;
                }
            }
            continue;
        }
        Groups groups(tids);
        for (const Fd* fd : list) {
            std::map<std::vector<Value>, std::size_t> first;
            for (std::size_t i = 0; i < tids.size(); ++i) {
                auto [it, inserted] = first.emplace(certain_projection(cir, tids[i], fd->lhs), i);
                if (!inserted) groups.unite(it->second, i);
            }
        }
        shape.groups.emplace(rhs, groups.members());
    }
    return shape;
}

// Joint probability that every member takes `v`.
Rational joint(const Cir& cir, const std::vector<TupleId>& members, const Attribute& a, const Value& v) {
    Rational p(1);
    for (const auto& tid : members) {
        p *= cir.distribution(tid, a).probability(v);
        if (p.is_zero()) break;
    }
    return p;
}

}  // namespace

ComponentSolution solve_left_certain(const Cir& cir, const FdSet& fds) {
    LeftCertainShape shape = analyse_left_certain(cir, fds);
    ComponentSolution sol;
    if (shape.certain_violation) return sol;
    sol.probability = Rational(1);
    for (const auto& [attr, groups] : shape.groups) {
        for (const auto& members : groups) {
            const Distribution& first = cir.distribution(members.front(), attr);
            Rational best;
            const Value* choice = nullptr;
            for (const auto& [v, p] : first.entries()) {
                Rational q = joint(cir, members, attr, v);
                if (q > best) {
                    best = q;
                    choice = &v;
                }
            }
            if (choice == nullptr) return ComponentSolution{};
            sol.probability *= best;
            for (const auto& tid : members) sol.assignment.emplace(CellRef{tid, attr}, *choice);
        }
    }
    sol.feasible = true;
    return sol;
}

Rational prob_left_certain(const Cir& cir, const FdSet& fds) {
    LeftCertainShape shape = analyse_left_certain(cir, fds);
    if (shape.certain_violation) return Rational();
    Rational total(1);
    for (const auto& [attr, groups] : shape.groups) {
        for (const auto& members : groups) {
            Rational agree;
            for (const auto& [v, p] : cir.distribution(members.front(), attr).entries())
                agree += joint(cir, members, attr, v);
            total *= agree;
            if (total.is_zero()) return total;
        }
    }
    return total;
}

ComponentSolution solve_matching(const Cir& cir, const AttrSet& x, const AttrSet& y) {
    const Schema& schema = cir.schema();
    for (const auto* side : {&x, &y})
        for (const auto& a : *side)
            if (!schema.contains(a)) throw StructuralError("unknown attribute '" + a + "'");
    if (std::includes(x.begin(), x.end(), y.begin(), y.end()) || std::includes(y.begin(), y.end(), x.begin(), x.end()))
        throw MisuseError("matching sides must not contain one another");

    const bool x_certain = all_certain(x, schema);
    if (!x_certain && !all_certain(y, schema))
        throw MisuseError("matching solver needs one all-certain side: " + to_string(x) + " <-> " + to_string(y));
    const AttrSet& key_side = x_certain ? x : y;
    const AttrSet& value_side = x_certain ? y : x;
    const std::vector<Attribute> value_attrs(value_side.begin(), value_side.end());

    using YTuple = std::vector<Value>;
    std::map<std::vector<Value>, std::vector<TupleId>> groups;
    for (const auto& [tid, row] : cir.rows()) groups[certain_projection(cir, tid, key_side)].push_back(tid);

    // Distribution of one row over Y-tuples, certain cells as point masses.
    auto row_distribution = [&](const TupleId& tid) {
        std::map<YTuple, Rational> dist{{YTuple{}, Rational(1)}};
        for (const auto& a : value_attrs) {
            std::map<YTuple, Rational> next;
            const Cell& c = cir.cell(tid, a);
            for (const auto& [prefix, p] : dist) {
                if (const auto* v = std::get_if<Value>(&c)) {
                    YTuple t = prefix;
                    t.push_back(*v);
                    next.emplace(std::move(t), p);
                } else {
                    for (const auto& [v, q] : std::get<Distribution>(c).entries()) {
                        YTuple t = prefix;
                        t.push_back(v);
                        next.emplace(std::move(t), p * q);
                    }
                }
            }
            dist = std::move(next);
        }
        return dist;
    };

    std::vector<std::map<YTuple, Rational>> group_weights;
    std::set<YTuple> candidates;
    for (const auto& [key, members] : groups) {
        std::map<YTuple, Rational> w = row_distribution(members.front());
        for (std::size_t i = 1; i < members.size(); ++i) {
            std::map<YTuple, Rational> d = row_distribution(members[i]);
            for (auto it = w.begin(); it != w.end();) {
                auto found = d.find(it->first);
                if (found == d.end()) {
                    it = w.erase(it);
                } else {
                    it->second *= found->second;
                    ++it;
                }
            }
        }
        for (const auto& [t, p] : w) candidates.insert(t);
        group_weights.push_back(std::move(w));
    }

    ComponentSolution sol;
    if (groups.size() > candidates.size()) return sol;
    const std::vector<YTuple> columns(candidates.begin(), candidates.end());
    std::vector<std::vector<Rational>> weights(group_weights.size(), std::vector<Rational>(columns.size()));
    for (std::size_t g = 0; g < group_weights.size(); ++g)
        for (std::size_t c = 0; c < columns.size(); ++c) {
            auto it = group_weights[g].find(columns[c]);
            if (it != group_weights[g].end()) weights[g][c] = it->second;
        }

    auto assignment = max_product_assignment(weights);
    if (!assignment) return sol;

    sol.probability = Rational(1);
    std::size_t g = 0;
    for (const auto& [key, members] : groups) {
        const std::size_t col = (*assignment)[g];
        sol.probability *= weights[g][col];
        for (const auto& tid : members)
            for (std::size_t k = 0; k < value_attrs.size(); ++k)
                if (schema.is_marked(value_attrs[k]))
                    sol.assignment.emplace(CellRef{tid, value_attrs[k]}, columns[col][k]);
        ++g;
    }
    sol.feasible = true;
    return sol;
}

namespace {

Attribute substitute(const Attribute& a, const std::map<Attribute, Attribute>& rewrite) {
    auto it = rewrite.find(a);
    return it == rewrite.end() ? a : it->second;
}

}  // namespace

ComponentSolution solve_unary_tractable(const Cir& cir, const FdSet& fds,
                                        const std::map<Attribute, Attribute>& certain_partner) {
    require_compatible(cir, fds);
    const FdSet f = normalize(fds);
    const Schema& schema = cir.schema();

    std::map<Attribute, Attribute> rewrite;
    for (const auto& fd : f.fds()) {
        if (!fd.is_unary()) throw MisuseError("unary solver given a non-unary FD: " + to_string(fd));
        const Attribute& a = *fd.lhs.begin();
        if (!schema.is_marked(a)) continue;
        auto it = certain_partner.find(a);
        if (it == certain_partner.end() || schema.is_marked(it->second))
            throw MisuseError("uncertain attribute '" + a + "' is neither a sink nor equivalent to a certain attribute");
        rewrite.emplace(a, it->second);
    }

    std::set<Fd> rest;
    for (const auto& fd : f.fds()) {
        Fd g;
        for (const auto& a : fd.lhs) g.lhs.insert(substitute(a, rewrite));
        for (const auto& a : fd.rhs) g.rhs.insert(substitute(a, rewrite));
        if (!g.is_trivial()) rest.insert(std::move(g));
    }

    std::vector<ComponentSolution> parts;
    parts.push_back(solve_left_certain(cir, FdSet(schema, std::vector<Fd>(rest.begin(), rest.end()))));
    for (const auto& [uncertain, partner] : rewrite) parts.push_back(solve_matching(cir, {partner}, {uncertain}));

    ComponentSolution out;
    out.probability = Rational(1);
    for (auto& part : parts) {
        if (!part.feasible) return ComponentSolution{};
        out.probability *= part.probability;
        out.assignment.merge(part.assignment);
    }
    out.feasible = true;
    return out;
}

ComponentSolution solve_unary_tractable(const Cir& cir, const FdSet& fds) {
    require_compatible(cir, fds);
    const FdSet f = normalize(fds);
    const Schema& schema = cir.schema();
    std::map<Attribute, Attribute> partners;
    for (const auto& a : schema.marked()) {
        const AttrSet ca = closure({a}, f);
        for (const auto& b : schema.attributes()) {
            if (schema.is_marked(b) || closure({b}, f) != ca) continue;
            auto [it, inserted] = partners.emplace(a, b);
            if (!inserted && b < it->second) it->second = b;
        }
    }
    return solve_unary_tractable(cir, fds, partners);
}

std::map<CellRef, Value> free_cell_choices(const Cir& cir, const AttrSet& attrs) {
    std::map<CellRef, Value> out;
    for (const auto& [tid, row] : cir.rows()) {
        for (const auto& a : attrs) {
            if (!cir.schema().is_marked(a)) continue;
            const Distribution& d = cir.distribution(tid, a);
            const Value* best = nullptr;
            for (const auto& [v, p] : d.entries())
                if (p == d.max_probability()) {
                    best = &v;
                    break;
                }
            out.emplace(CellRef{tid, a}, *best);
        }
    }
    return out;
}

CombinedSolution combine_solutions(const Cir& cir, const std::vector<ComponentSolution>& parts,
                                   const std::map<CellRef, Value>& free_cells) {
    std::map<CellRef, const Value*> owned;
    auto claim = [&](const CellRef& ref, const Value& v) {
        if (!owned.emplace(ref, &v).second)
            throw MisuseError("cell (" + ref.tid + ", " + ref.attribute + ") is owned by two solutions");
    };
    for (const auto& part : parts)
        for (const auto& [ref, v] : part.assignment) claim(ref, v);
    for (const auto& [ref, v] : free_cells) claim(ref, v);

    CombinedSolution out;
    for (const auto& part : parts)
        if (!part.feasible) return out;

    const Schema& schema = cir.schema();
    std::map<TupleId, Relation::Row> rows;
    out.probability = Rational(1);
    for (const auto& part : parts) out.probability *= part.probability;
    for (const auto& [tid, row] : cir.rows()) {
        Relation::Row values(schema.size());
        for (std::size_t i = 0; i < schema.size(); ++i) {
            const Attribute& a = schema.attributes()[i];
            if (const auto* v = std::get_if<Value>(&row[i])) {
                values[i] = *v;
                continue;
            }
            auto it = owned.find(CellRef{tid, a});
            if (it == owned.end()) throw MisuseError("cell (" + tid + ", " + a + ") has no owner");
            values[i] = *it->second;
        }
        rows.emplace(tid, std::move(values));
    }
    for (const auto& [ref, v] : free_cells) out.probability *= cir.distribution(ref.tid, ref.attribute).probability(v);
    out.sample = Relation(schema, std::move(rows));
    out.feasible = !out.probability.is_zero();
    return out;
}

}  // namespace cirsolve
