#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "cirsolve/rational.hpp"

namespace cirsolve {

using Attribute = std::string;
using AttrSet = std::set<Attribute>;
using TupleId = std::string;

/// An atom of the value universe. Equality is exact string equality.
struct Value {
    std::string text;

    Value() = default;
    explicit Value(std::string t) : text(std::move(t)) {}

    friend auto operator<=>(const Value&, const Value&) = default;
};

/// A finite distribution over values. Zero-probability entries are dropped,
/// so the key set is exactly the support.
class Distribution {
public:
    /// Throws StructuralError on negative probabilities, an empty support,
    /// or probabilities that do not sum to exactly 1.
    explicit Distribution(std::map<Value, Rational> entries);

    static Distribution point(Value v);
    static Distribution uniform(const std::vector<Value>& values);

    const std::map<Value, Rational>& entries() const { return entries_; }
    std::size_t size() const { return entries_.size(); }
    bool contains(const Value& v) const { return entries_.count(v) != 0; }
    /// Probability of v; zero outside the support.
    Rational probability(const Value& v) const;
    const Rational& max_probability() const { return max_; }
    bool is_point() const { return entries_.size() == 1; }

    friend bool operator==(const Distribution& a, const Distribution& b) { return a.entries_ == b.entries_; }

private:
    std::map<Value, Rational> entries_;
    Rational max_;
};

/// Ordered attribute list with a subset flagged as uncertain (marked).
class Schema {
public:
    Schema() = default;
    Schema(std::vector<Attribute> attributes, AttrSet marked);

    const std::vector<Attribute>& attributes() const { return attributes_; }
    const AttrSet& marked() const { return marked_; }
    AttrSet attribute_set() const { return AttrSet(attributes_.begin(), attributes_.end()); }
    std::size_t size() const { return attributes_.size(); }

    bool contains(const Attribute& a) const { return index_.count(a) != 0; }
    bool is_marked(const Attribute& a) const { return marked_.count(a) != 0; }
    /// Position of `a`; throws StructuralError for unknown attributes.
    std::size_t index_of(const Attribute& a) const;

    /// Keeps the attributes of `keep` in their original order.
    Schema project(const AttrSet& keep) const;

    friend bool operator==(const Schema& a, const Schema& b) {
        return a.attributes_ == b.attributes_ && a.marked_ == b.marked_;
    }

private:
    std::vector<Attribute> attributes_;
    AttrSet marked_;
    std::map<Attribute, std::size_t> index_;
};

/// A cell of a CIR: a fixed value for certain attributes, a distribution for
/// marked ones.
using Cell = std::variant<Value, Distribution>;

/// Coordinates of one cell.
struct CellRef {
    TupleId tid;
    Attribute attribute;
    friend auto operator<=>(const CellRef&, const CellRef&) = default;
};

/// Cell-independent relation: a table whose marked cells hold independent
/// finite distributions.
class Cir {
public:
    using Row = std::vector<Cell>;

    Cir() = default;
    /// Rows are indexed by schema position. A plain Value in a marked column is
    /// promoted to a point distribution; a Distribution in a certain column is
    /// rejected.
    Cir(Schema schema, std::map<TupleId, Row> rows);

    const Schema& schema() const { return schema_; }
    const std::map<TupleId, Row>& rows() const { return rows_; }
    std::size_t size() const { return rows_.size(); }
    bool has_tuple(const TupleId& tid) const { return rows_.count(tid) != 0; }

    const Cell& cell(const TupleId& tid, const Attribute& a) const;
    /// Value of a certain cell.
    const Value& certain(const TupleId& tid, const Attribute& a) const;
    /// Distribution of a marked cell.
    const Distribution& distribution(const TupleId& tid, const Attribute& a) const;

    /// All marked cells, ordered by (tuple-id, attribute name).
    std::vector<CellRef> uncertain_cells() const;

    /// Number of samples in the full sample space, saturating at UINT64_MAX.
    std::uint64_t world_count() const;
    /// Same, restricted to the marked attributes in `attrs`.
    std::uint64_t world_count(const AttrSet& attrs) const;

    Cir project(const AttrSet& keep) const;
    /// Copy with one marked cell replaced.
    Cir with_cell(const CellRef& ref, Distribution d) const;

    friend bool operator==(const Cir& a, const Cir& b) { return a.schema_ == b.schema_ && a.rows_ == b.rows_; }

private:
    Schema schema_;
    std::map<TupleId, Row> rows_;
};

/// An ordinary relation; a possible world of a Cir.
class Relation {
public:
    using Row = std::vector<Value>;

    Relation() = default;
    Relation(Schema schema, std::map<TupleId, Row> rows);

    const Schema& schema() const { return schema_; }
    const std::map<TupleId, Row>& rows() const { return rows_; }
    std::size_t size() const { return rows_.size(); }

    const Value& value(const TupleId& tid, const Attribute& a) const;
    void set_value(const TupleId& tid, const Attribute& a, Value v);

    /// Values of `attrs` (in set order) for one tuple.
    std::vector<Value> project_row(const TupleId& tid, const AttrSet& attrs) const;
    Relation project(const AttrSet& keep) const;

    friend bool operator==(const Relation& a, const Relation& b) {
        return a.schema_ == b.schema_ && a.rows_ == b.rows_;
    }

private:
    Schema schema_;
    std::map<TupleId, Row> rows_;
};

/// Functional dependency lhs -> rhs. An empty lhs is a consensus FD.
struct Fd {
    AttrSet lhs;
    AttrSet rhs;

    bool is_trivial() const;
    bool is_unary() const { return lhs.size() == 1; }
    friend auto operator<=>(const Fd&, const Fd&) = default;
};

/// A set of FDs over one schema.
class FdSet {
public:
    FdSet() = default;
    /// Throws StructuralError if an FD mentions an attribute outside the schema.
    FdSet(Schema schema, std::vector<Fd> fds);

    const Schema& schema() const { return schema_; }
    const std::vector<Fd>& fds() const { return fds_; }
    bool empty() const { return fds_.empty(); }
    std::size_t size() const { return fds_.size(); }

    /// Every attribute occurring on either side of some FD.
    AttrSet attributes() const;

    friend bool operator==(const FdSet& a, const FdSet& b) { return a.schema_ == b.schema_ && a.fds_ == b.fds_; }

private:
    Schema schema_;
    std::vector<Fd> fds_;
};

/// Product of the chosen-value probabilities over all marked cells; zero when a
/// chosen value lies outside its cell's support or a certain cell differs.
/// Throws StructuralError when schemas or tuple-ids differ.
Rational sample_probability(const Cir& cir, const Relation& r);

/// True iff r is in the support of cir.
bool is_sample(const Cir& cir, const Relation& r);

/// True iff r satisfies every FD. Throws StructuralError when an FD mentions an
/// attribute missing from r's schema.
bool satisfies(const Relation& r, const FdSet& fds);

std::string to_string(const AttrSet& attrs);
std::string to_string(const Fd& fd);

}  // namespace cirsolve
