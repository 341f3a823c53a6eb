#include "cirsolve/model.hpp"

#include <algorithm>
#include <limits>

#include "cirsolve/errors.hpp"

namespace cirsolve {

// ---- Distribution ---------------------------------------------------------

Distribution::Distribution(std::map<Value, Rational> entries) {
    Rational total;
    for (auto& [value, p] : entries) {
        if (p.sign() < 0) throw StructuralError("negative probability for value '" + value.text + "'");
        if (p.is_zero()) continue;
        total += p;
        if (p > max_) max_ = p;
        entries_.emplace(value, std::move(p));
    }
    if (entries_.empty()) throw StructuralError("distribution with empty support");
    if (total != Rational(1))
        throw StructuralError("distribution probabilities sum to " + total.str() + ", expected 1");
}

Distribution Distribution::point(Value v) { return Distribution({{std::move(v), Rational(1)}}); }

Distribution Distribution::uniform(const std::vector<Value>& values) {
    std::set<Value> distinct(values.begin(), values.end());
    if (distinct.empty()) throw StructuralError("uniform distribution over no values");
    Rational p(BigInt(1), BigInt(static_cast<unsigned long>(distinct.size())));
    std::map<Value, Rational> entries;
    for (const auto& v : distinct) entries.emplace(v, p);
    return Distribution(std::move(entries));
}

Rational Distribution::probability(const Value& v) const {
    auto it = entries_.find(v);
    return it == entries_.end() ? Rational() : it->second;
}

// ---- Schema ---------------------------------------------------------------

Schema::Schema(std::vector<Attribute> attributes, AttrSet marked)
    : attributes_(std::move(attributes)), marked_(std::move(marked)) {
    for (std::size_t i = 0; i < attributes_.size(); ++i) {
        if (attributes_[i].empty()) throw StructuralError("empty attribute name");
        if (!index_.emplace(attributes_[i], i).second)
            throw StructuralError("duplicate attribute '" + attributes_[i] + "'");
    }
    for (const auto& m : marked_)
        if (!index_.count(m)) throw StructuralError("marked attribute '" + m + "' is not in the schema");
}

std::size_t Schema::index_of(const Attribute& a) const {
    auto it = index_.find(a);
    if (it == index_.end()) throw StructuralError("unknown attribute '" + a + "'");
    return it->second;
}

Schema Schema::project(const AttrSet& keep) const {
    std::vector<Attribute> attrs;
    AttrSet marked;
    for (const auto& a : attributes_) {
        if (!keep.count(a)) continue;
        attrs.push_back(a);
        if (is_marked(a)) marked.insert(a);
    }
    for (const auto& a : keep)
        if (!contains(a)) throw StructuralError("unknown attribute '" + a + "'");
    return Schema(std::move(attrs), std::move(marked));
}

// ---- Cir ------------------------------------------------------------------

Cir::Cir(Schema schema, std::map<TupleId, Row> rows) : schema_(std::move(schema)), rows_(std::move(rows)) {
    const auto& attrs = schema_.attributes();
    for (auto& [tid, row] : rows_) {
        if (row.size() != attrs.size())
            throw StructuralError("tuple '" + tid + "' has " + std::to_string(row.size()) + " cells, schema has " +
                                  std::to_string(attrs.size()));
        for (std::size_t i = 0; i < attrs.size(); ++i) {
            const bool marked = schema_.is_marked(attrs[i]);
            if (marked && std::holds_alternative<Value>(row[i])) {
                row[i] = Distribution::point(std::get<Value>(row[i]));
            } else if (!marked && std::holds_alternative<Distribution>(row[i])) {
                throw StructuralError("tuple '" + tid + "' holds a distribution in certain attribute '" + attrs[i] + "'");
            }
        }
    }
}

const Cell& Cir::cell(const TupleId& tid, const Attribute& a) const {
    auto it = rows_.find(tid);
    if (it == rows_.end()) throw StructuralError("unknown tuple-id '" + tid + "'");
    return it->second[schema_.index_of(a)];
}

const Value& Cir::certain(const TupleId& tid, const Attribute& a) const {
    const Cell& c = cell(tid, a);
    if (!std::holds_alternative<Value>(c)) throw StructuralError("attribute '" + a + "' is uncertain");
    return std::get<Value>(c);
}

const Distribution& Cir::distribution(const TupleId& tid, const Attribute& a) const {
    const Cell& c = cell(tid, a);
    if (!std::holds_alternative<Distribution>(c)) throw StructuralError("attribute '" + a + "' is certain");
    return std::get<Distribution>(c);
}

std::vector<CellRef> Cir::uncertain_cells() const {
    std::vector<CellRef> cells;
    for (const auto& [tid, row] : rows_)
        for (const auto& a : schema_.marked()) cells.push_back({tid, a});
    return cells;
}

std::uint64_t Cir::world_count() const { return world_count(schema_.marked()); }

std::uint64_t Cir::world_count(const AttrSet& attrs) const {
    constexpr auto kMax = std::numeric_limits<std::uint64_t>::max();
    std::uint64_t count = 1;
    for (const auto& [tid, row] : rows_) {
        for (const auto& a : attrs) {
            if (!schema_.is_marked(a)) continue;
            const auto n = static_cast<std::uint64_t>(std::get<Distribution>(row[schema_.index_of(a)]).size());
            if (count > kMax / n) return kMax;
            count *= n;
        }
    }
    return count;
}

Cir Cir::project(const AttrSet& keep) const {
    Schema projected = schema_.project(keep);
    std::vector<std::size_t> positions;
    for (const auto& a : projected.attributes()) positions.push_back(schema_.index_of(a));
    std::map<TupleId, Row> rows;
    for (const auto& [tid, row] : rows_) {
        Row r;
        r.reserve(positions.size());
        for (auto p : positions) r.push_back(row[p]);
        rows.emplace(tid, std::move(r));
    }
    return Cir(std::move(projected), std::move(rows));
}

Cir Cir::with_cell(const CellRef& ref, Distribution d) const {
    if (!schema_.is_marked(ref.attribute)) throw StructuralError("attribute '" + ref.attribute + "' is certain");
    Cir copy = *this;
    auto it = copy.rows_.find(ref.tid);
    if (it == copy.rows_.end()) throw StructuralError("unknown tuple-id '" + ref.tid + "'");
    it->second[schema_.index_of(ref.attribute)] = std::move(d);
    return copy;
}

// ---- Relation -------------------------------------------------------------

Relation::Relation(Schema schema, std::map<TupleId, Row> rows) : schema_(std::move(schema)), rows_(std::move(rows)) {
    for (const auto& [tid, row] : rows_)
        if (row.size() != schema_.size())
            throw StructuralError("tuple '" + tid + "' has " + std::to_string(row.size()) + " values, schema has " +
                                  std::to_string(schema_.size()));
}

const Value& Relation::value(const TupleId& tid, const Attribute& a) const {
    auto it = rows_.find(tid);
    if (it == rows_.end()) throw StructuralError("unknown tuple-id '" + tid + "'");
    return it->second[schema_.index_of(a)];
}

void Relation::set_value(const TupleId& tid, const Attribute& a, Value v) {
    auto it = rows_.find(tid);
    if (it == rows_.end()) throw StructuralError("unknown tuple-id '" + tid + "'");
    it->second[schema_.index_of(a)] = std::move(v);
}

std::vector<Value> Relation::project_row(const TupleId& tid, const AttrSet& attrs) const {
    std::vector<Value> out;
    out.reserve(attrs.size());
    for (const auto& a : attrs) out.push_back(value(tid, a));
    return out;
}

Relation Relation::project(const AttrSet& keep) const {
    Schema projected = schema_.project(keep);
    std::map<TupleId, Row> rows;
    for (const auto& [tid, row] : rows_) {
        Row r;
        for (const auto& a : projected.attributes()) r.push_back(row[schema_.index_of(a)]);
        rows.emplace(tid, std::move(r));
    }
    return Relation(std::move(projected), std::move(rows));
}

// ---- FDs ------------------------------------------------------------------

bool Fd::is_trivial() const {
    return std::includes(lhs.begin(), lhs.end(), rhs.begin(), rhs.end());
}

FdSet::FdSet(Schema schema, std::vector<Fd> fds) : schema_(std::move(schema)), fds_(std::move(fds)) {
    for (const auto& fd : fds_) {
        for (const auto* side : {&fd.lhs, &fd.rhs})
            for (const auto& a : *side)
                if (!schema_.contains(a)) throw StructuralError("FD mentions unknown attribute '" + a + "'");
    }
}

AttrSet FdSet::attributes() const {
    AttrSet out;
    for (const auto& fd : fds_) {
        out.insert(fd.lhs.begin(), fd.lhs.end());
        out.insert(fd.rhs.begin(), fd.rhs.end());
    }
    return out;
}

// ---- Operations -----------------------------------------------------------

namespace {

void require_same_shape(const Cir& cir, const Relation& r) {
    if (!(cir.schema().attributes() == r.schema().attributes()))
        throw StructuralError("relation schema does not match the CIR schema");
    if (cir.size() != r.size()) throw StructuralError("relation tuple-ids do not match the CIR");
    auto it = r.rows().begin();
    for (const auto& [tid, row] : cir.rows()) {
        if (it->first != tid) throw StructuralError("relation tuple-ids do not match the CIR");
        ++it;
    }
}

}  // namespace

Rational sample_probability(const Cir& cir, const Relation& r) {
    require_same_shape(cir, r);
    Rational p(1);
    auto rit = r.rows().begin();
    for (const auto& [tid, row] : cir.rows()) {
        const auto& values = rit->second;
        ++rit;
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (const auto* v = std::get_if<Value>(&row[i])) {
                if (*v != values[i]) return Rational();
                continue;
            }
            Rational q = std::get<Distribution>(row[i]).probability(values[i]);
            if (q.is_zero()) return q;
            p *= q;
        }
    }
    return p;
}

bool is_sample(const Cir& cir, const Relation& r) {
    try {
        return !sample_probability(cir, r).is_zero();
    } catch (const StructuralError&) {
        return false;
    }
}

bool satisfies(const Relation& r, const FdSet& fds) {
    for (const auto& fd : fds.fds()) {
        std::vector<std::size_t> lhs, rhs;
        for (const auto& a : fd.lhs) lhs.push_back(r.schema().index_of(a));
        for (const auto& a : fd.rhs) rhs.push_back(r.schema().index_of(a));
        std::map<std::vector<Value>, std::vector<Value>> seen;
        for (const auto& [tid, row] : r.rows()) {
            std::vector<Value> key, val;
            for (auto i : lhs) key.push_back(row[i]);
            for (auto i : rhs) val.push_back(row[i]);
            auto [it, inserted] = seen.emplace(std::move(key), val);
            if (!inserted && it->second != val) return false;
        }
    }
    return true;
}

std::string to_string(const AttrSet& attrs) {
    if (attrs.empty()) return "{}";
    std::string out;
    for (const auto& a : attrs) {
        if (!out.empty()) out += ' ';
        out += a;
    }
    return out;
}

std::string to_string(const Fd& fd) { return to_string(fd.lhs) + " -> " + to_string(fd.rhs); }

}  // namespace cirsolve
