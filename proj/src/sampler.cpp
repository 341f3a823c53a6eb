#include "cirsolve/sampler.hpp"

#include <set>

#include "cirsolve/errors.hpp"

namespace cirsolve {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

CellOrder resolve_order(const Cir& cir, const CellOrder& order) {
    CellOrder cells = default_cell_order(cir);
    if (order.empty()) return cells;
    const std::set<CellRef> expected(cells.begin(), cells.end());
    const std::set<CellRef> given(order.begin(), order.end());
    if (given.size() != order.size() || given != expected)
        throw StructuralError("cell order is not a permutation of the uncertain cells");
    return order;
}

// Picks the first candidate whose cumulative weight exceeds u * total.
template <typename Weights>
std::size_t pick(const Weights& weights, const Rational& total, const Rational& u) {
    const Rational threshold = u * total;
    Rational cumulative;
    std::size_t last = 0;
    for (std::size_t i = 0; i < weights.size(); ++i) {
        if (weights[i].second.is_zero()) continue;
        cumulative += weights[i].second;
        last = i;
        if (cumulative > threshold) return i;
    }
    return last;
}

// Candidate values of one cell with adjusted weights Pr(a) * Pr(F | prefix, a).
std::vector<std::pair<Value, Rational>> adjusted(const Cir& fixed, const FdSet& fds, const CellRef& ref,
                                                 const ProbabilityBackend& backend) {
    std::vector<std::pair<Value, Rational>> out;
    for (const auto& [v, p] : fixed.distribution(ref.tid, ref.attribute).entries()) {
        Rational w = p * backend(fixed.with_cell(ref, Distribution::point(v)), fds);
        out.emplace_back(v, std::move(w));
    }
    return out;
}

Relation to_relation(const Cir& fixed) {
    const Schema& schema = fixed.schema();
    std::map<TupleId, Relation::Row> rows;
    for (const auto& [tid, row] : fixed.rows()) {
        Relation::Row values;
        for (const auto& cell : row) {
            if (const auto* v = std::get_if<Value>(&cell))
                values.push_back(*v);
            else
                values.push_back(std::get<Distribution>(cell).entries().begin()->first);
        }
        rows.emplace(tid, std::move(values));
    }
    return Relation(schema, std::move(rows));
}

}  // namespace

CellOrder default_cell_order(const Cir& cir) { return cir.uncertain_cells(); }

Rational uniform_draw(std::uint64_t seed, std::uint64_t index) {
    const std::uint64_t k = splitmix64(seed ^ splitmix64(index)) >> 11;
    BigInt denominator = 1;
    denominator <<= 53;
    return Rational(BigInt(static_cast<unsigned long>(k)), denominator);
}

std::uint64_t batch_seed(std::uint64_t seed, std::uint64_t draw) { return splitmix64(seed + splitmix64(~draw)); }

Relation conditional_sample(const Cir& cir, const FdSet& fds, const ProbabilityBackend& backend, std::uint64_t seed,
                            const CellOrder& order) {
    const CellOrder cells = resolve_order(cir, order);
    Rational current = backend(cir, fds);
    if (current.is_zero()) throw InfeasibleError("no consistent sample: probability of consistency is 0");

    Cir fixed = cir;
    for (std::size_t i = 0; i < cells.size(); ++i) {
        const CellRef& ref = cells[i];
        auto weights = adjusted(fixed, fds, ref, backend);
        Rational total;
        for (const auto& [v, w] : weights) total += w;
        if (total.is_zero())
            throw std::logic_error("sampler invariant violated: every candidate of cell (" + ref.tid + ", " +
                                   ref.attribute + ") has weight 0 after a prefix of positive probability");
        const std::size_t k = pick(weights, total, uniform_draw(seed, i));
        fixed = fixed.with_cell(ref, Distribution::point(weights[k].first));
    }
    return to_relation(fixed);
}

Relation unconditional_sample(const Cir& cir, std::uint64_t seed, const CellOrder& order) {
    const CellOrder cells = resolve_order(cir, order);
    Cir fixed = cir;
    for (std::size_t i = 0; i < cells.size(); ++i) {
        const CellRef& ref = cells[i];
        const auto& entries = fixed.distribution(ref.tid, ref.attribute).entries();
        const std::vector<std::pair<Value, Rational>> weights(entries.begin(), entries.end());
        const std::size_t k = pick(weights, Rational(1), uniform_draw(seed, i));
        fixed = fixed.with_cell(ref, Distribution::point(weights[k].first));
    }
    return to_relation(fixed);
}

Rational path_weight(const Cir& cir, const FdSet& fds, const Relation& r, const ProbabilityBackend& backend,
                     const CellOrder& order) {
    if (!is_sample(cir, r) || !satisfies(r, fds)) throw MisuseError("path weight requested for an inconsistent sample");
    const CellOrder cells = resolve_order(cir, order);
    Cir fixed = cir;
    Rational before = backend(fixed, fds);
    Rational weight(1);
    for (const auto& ref : cells) {
        const Value& v = r.value(ref.tid, ref.attribute);
        const Rational p = fixed.distribution(ref.tid, ref.attribute).probability(v);
        fixed = fixed.with_cell(ref, Distribution::point(v));
        const Rational after = backend(fixed, fds);
        weight *= p * after / before;
        before = after;
    }
    return weight;
}

}  // namespace cirsolve
