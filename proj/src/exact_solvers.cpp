#include "cirsolve/exact_solvers.hpp"

#include <algorithm>

#include "cirsolve/fd_theory.hpp"

namespace cirsolve {

namespace {

void require_compatible(const Cir& cir, const FdSet& fds) {
    if (!(cir.schema() == fds.schema())) throw StructuralError("FD set and CIR have different schemas");
}

Relation assemble(const Cir& cir, const std::map<CellRef, Value>& chosen) {
    const Schema& schema = cir.schema();
    std::map<TupleId, Relation::Row> rows;
    for (const auto& [tid, row] : cir.rows()) {
        Relation::Row values(schema.size());
        for (std::size_t i = 0; i < schema.size(); ++i) {
            if (const auto* v = std::get_if<Value>(&row[i]))
                values[i] = *v;
            else
                values[i] = chosen.at(CellRef{tid, schema.attributes()[i]});
        }
        rows.emplace(tid, std::move(values));
    }
    return Relation(schema, std::move(rows));
}

// Incremental FD checker over a partially assigned table. Values are interned
// per attribute; every normalized FD keeps an index from complete left-hand
// keys to the right-hand value they force and the number of tuples behind it.
class ConsistencyTracker {
public:
    ConsistencyTracker(const Cir& cir, const FdSet& normalized) {
        const Schema& schema = cir.schema();
        for (const auto& [tid, row] : cir.rows()) {
            tuple_index_.emplace(tid, tids_.size());
            tids_.push_back(tid);
        }
        intern_.resize(schema.size());
        values_.assign(tids_.size(), std::vector<int>(schema.size(), -1));

        for (const auto& fd : normalized.fds()) {
            FdIndex f;
            for (const auto& a : fd.lhs) f.lhs.push_back(schema.index_of(a));
            f.rhs = schema.index_of(*fd.rhs.begin());
            f.remaining.assign(tids_.size(), fd.lhs.size() + 1);
            fds_.push_back(std::move(f));
        }
        by_attribute_.resize(schema.size());
        for (std::size_t k = 0; k < fds_.size(); ++k) {
            for (std::size_t a : fds_[k].lhs) by_attribute_[a].push_back(k);
            by_attribute_[fds_[k].rhs].push_back(k);
        }

        for (std::size_t t = 0; t < tids_.size(); ++t) {
            const auto& row = cir.rows().at(tids_[t]);
            for (std::size_t a = 0; a < schema.size(); ++a)
                if (const auto* v = std::get_if<Value>(&row[a]))
                    if (!assign(t, a, *v)) consistent_ = false;
        }
    }

    bool consistent() const { return consistent_; }
    std::size_t tuple(const TupleId& tid) const { return tuple_index_.at(tid); }

    /// Assigns cell (t, a) unless that would violate an FD.
    bool assign(std::size_t t, std::size_t a, const Value& v) {
        const int id = intern(a, v);
        for (std::size_t k : by_attribute_[a]) {
            const FdIndex& f = fds_[k];
            if (f.remaining[t] != 1) continue;
            auto it = f.index.find(key(f, t, a, id));
            if (it == f.index.end()) continue;
            const int rhs = f.rhs == a ? id : values_[t][f.rhs];
            if (it->second.first != rhs) return false;
        }
        values_[t][a] = id;
        for (std::size_t k : by_attribute_[a]) {
            FdIndex& f = fds_[k];
            if (--f.remaining[t] != 0) continue;
            auto [it, inserted] = f.index.emplace(key(f, t, a, id), std::make_pair(values_[t][f.rhs], 0));
            ++it->second.second;
        }
        return true;
    }

    void unassign(std::size_t t, std::size_t a) {
        for (std::size_t k : by_attribute_[a]) {
            FdIndex& f = fds_[k];
            if (f.remaining[t]++ != 0) continue;
            auto it = f.index.find(key(f, t, a, values_[t][a]));
            if (--it->second.second == 0) f.index.erase(it);
        }
        values_[t][a] = -1;
    }

private:
    struct FdIndex {
        std::vector<std::size_t> lhs;
        std::size_t rhs = 0;
        std::vector<std::size_t> remaining;
        std::map<std::vector<int>, std::pair<int, int>> index;
    };

    int intern(std::size_t a, const Value& v) {
        auto [it, inserted] = intern_[a].emplace(v, static_cast<int>(intern_[a].size()));
        return it->second;
    }

    // Left-hand key of tuple t, reading `id` for attribute a.
    std::vector<int> key(const FdIndex& f, std::size_t t, std::size_t a, int id) const {
        std::vector<int> k;
        k.reserve(f.lhs.size());
        for (std::size_t b : f.lhs) k.push_back(b == a ? id : values_[t][b]);
        return k;
    }

    std::vector<TupleId> tids_;
    std::map<TupleId, std::size_t> tuple_index_;
    std::vector<std::map<Value, int>> intern_;
    std::vector<std::vector<int>> values_;
    std::vector<FdIndex> fds_;
    std::vector<std::vector<std::size_t>> by_attribute_;
    bool consistent_ = true;
};

struct Branch {
    CellRef ref;
    std::size_t tuple = 0;
    std::size_t attribute = 0;
    /// Support in descending probability, ties by value.
    std::vector<std::pair<Value, Rational>> options;
};

// Marked cells over FD attributes, ordered by support size then (tid, attr).
std::vector<Branch> branching_cells(const Cir& cir, const AttrSet& fd_attrs, const ConsistencyTracker& tracker) {
    std::vector<Branch> out;
    for (const auto& ref : cir.uncertain_cells()) {
        if (!fd_attrs.count(ref.attribute)) continue;
        Branch b;
        b.ref = ref;
        b.tuple = tracker.tuple(ref.tid);
        b.attribute = cir.schema().index_of(ref.attribute);
        for (const auto& [v, p] : cir.distribution(ref.tid, ref.attribute).entries()) b.options.emplace_back(v, p);
        std::stable_sort(b.options.begin(), b.options.end(),
                         [](const auto& x, const auto& y) { return x.second > y.second; });
        out.push_back(std::move(b));
    }
    std::stable_sort(out.begin(), out.end(),
                     [](const Branch& x, const Branch& y) { return x.options.size() < y.options.size(); });
    return out;
}

class Search {
public:
    Search(const Cir& cir, const FdSet& fds, std::uint64_t budget)
        : cir_(cir), normalized_(normalize(fds)), tracker_(cir, normalized_), budget_(budget) {
        cells_ = branching_cells(cir, normalized_.attributes(), tracker_);
        suffix_max_.assign(cells_.size() + 1, Rational(1));
        for (std::size_t i = cells_.size(); i-- > 0;)
            suffix_max_[i] = suffix_max_[i + 1] * cells_[i].options.front().second;
    }

    bool initially_consistent() const { return tracker_.consistent(); }

    std::optional<WeightedSample> maximise() {
        if (!tracker_.consistent()) return std::nullopt;
        std::map<CellRef, Value> chosen;
        best_mpd(0, Rational(1), chosen);
        if (!best_) return std::nullopt;
        return finish(*best_, best_value_);
    }

    Rational total() {
        if (!tracker_.consistent()) return Rational();
        return sum(0);
    }

private:
    void tick() {
        ++nodes_;
        if (budget_ != 0 && nodes_ > budget_) {
            std::optional<WeightedSample> incumbent;
            if (best_) incumbent = finish(*best_, best_value_);
            throw BudgetExceeded(nodes_, std::move(incumbent));
        }
    }

    void best_mpd(std::size_t i, const Rational& running, std::map<CellRef, Value>& chosen) {
        tick();
        if (best_ && running * suffix_max_[i] <= best_value_) return;
        if (i == cells_.size()) {
            best_ = chosen;
            best_value_ = running;
            return;
        }
        const Branch& b = cells_[i];
        for (const auto& [v, p] : b.options) {
            if (!tracker_.assign(b.tuple, b.attribute, v)) continue;
            chosen[b.ref] = v;
            best_mpd(i + 1, running * p, chosen);
            chosen.erase(b.ref);
            tracker_.unassign(b.tuple, b.attribute);
        }
    }

    Rational sum(std::size_t i) {
        tick();
        if (i == cells_.size()) return Rational(1);
        const Branch& b = cells_[i];
        Rational total;
        for (const auto& [v, p] : b.options) {
            if (!tracker_.assign(b.tuple, b.attribute, v)) continue;
            total += p * sum(i + 1);
            tracker_.unassign(b.tuple, b.attribute);
        }
        return total;
    }

    // Adds the per-cell argmax of cells outside the FD attributes.
    WeightedSample finish(std::map<CellRef, Value> chosen, Rational value) const {
        const AttrSet fd_attrs = normalized_.attributes();
        for (const auto& ref : cir_.uncertain_cells()) {
            if (fd_attrs.count(ref.attribute)) continue;
            const Distribution& d = cir_.distribution(ref.tid, ref.attribute);
            for (const auto& [v, p] : d.entries())
                if (p == d.max_probability()) {
                    chosen.emplace(ref, v);
                    value *= p;
                    break;
                }
        }
        return {assemble(cir_, chosen), value};
    }

    const Cir& cir_;
    FdSet normalized_;
    ConsistencyTracker tracker_;
    std::uint64_t budget_;
    std::uint64_t nodes_ = 0;
    std::vector<Branch> cells_;
    std::vector<Rational> suffix_max_;
    std::optional<std::map<CellRef, Value>> best_;
    Rational best_value_;
};

}  // namespace

OracleResult oracle_enumerate(const Cir& cir, const FdSet& fds, std::uint64_t world_cap) {
    require_compatible(cir, fds);
    const std::uint64_t worlds = cir.world_count();
    if (worlds > world_cap)
        throw ResourceError("oracle refuses " + std::to_string(worlds) + " worlds (cap " +
                                std::to_string(world_cap) + ")",
                            worlds);

    const std::vector<CellRef> cells = cir.uncertain_cells();
    std::vector<std::vector<std::pair<Value, Rational>>> supports;
    for (const auto& ref : cells) {
        const auto& entries = cir.distribution(ref.tid, ref.attribute).entries();
        supports.emplace_back(entries.begin(), entries.end());
    }

    OracleResult out;
    std::vector<std::size_t> digit(cells.size(), 0);
    for (;;) {
        std::map<CellRef, Value> chosen;
        Rational p(1);
        for (std::size_t i = 0; i < cells.size(); ++i) {
            chosen.emplace(cells[i], supports[i][digit[i]].first);
            p *= supports[i][digit[i]].second;
        }
        Relation world = assemble(cir, chosen);
        ++out.worlds;
        if (satisfies(world, fds)) {
            ++out.consistent;
            out.total += p;
            if (!out.best || p > out.best->second) out.best = WeightedSample{std::move(world), p};
        }
        // Odometer: the last cell turns fastest.
        std::size_t i = cells.size();
        while (i > 0 && ++digit[i - 1] == supports[i - 1].size()) digit[--i] = 0;
        if (i == 0) break;
    }
    return out;
}

std::optional<WeightedSample> bnb_mpd(const Cir& cir, const FdSet& fds, std::uint64_t node_budget) {
    require_compatible(cir, fds);
    Search search(cir, fds, node_budget);
    return search.maximise();
}

Rational exact_prob(const Cir& cir, const FdSet& fds, std::uint64_t node_budget) {
    require_compatible(cir, fds);
    Search search(cir, fds, node_budget);
    return search.total();
}

}  // namespace cirsolve
