#pragma once

#include <algorithm>
#include <map>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "cirsolve/fd_theory.hpp"
#include "cirsolve/io.hpp"
#include "cirsolve/model.hpp"

namespace fixtures {

using namespace cirsolve;

inline Rational q(const char* text) { return Rational::parse(text); }

inline Distribution dist(std::initializer_list<std::pair<const char*, const char*>> entries) {
    std::map<Value, Rational> m;
    for (const auto& [v, p] : entries) m.emplace(Value(v), q(p));
    return Distribution(std::move(m));
}

// Specialists attending rooms: room, ?specialist, time.
inline Cir u1() {
    Schema s({"room", "specialist", "time"}, {"specialist"});
    std::map<TupleId, Cir::Row> rows;
    rows.emplace("1", Cir::Row{Value("41"), dist({{"Bart", "1/2"}, {"Lisa", "1/2"}}), Value("5 PM")});
    rows.emplace("2", Cir::Row{Value("163"), dist({{"Bart", "7/10"}, {"Lisa", "3/10"}}), Value("5 PM")});
    rows.emplace("3", Cir::Row{Value("41"), dist({{"Bart", "1/5"}, {"Maggie", "4/5"}}), Value("5 PM")});
    return Cir(s, std::move(rows));
}

inline FdSet f1() { return parse_fds("specialist? time -> room", u1().schema()); }
inline FdSet f2() { return parse_fds("specialist? time -> room; room time -> specialist?", u1().schema()); }

// Businesses with spokespeople and locations: business, ?spokesperson, ?location.
inline Cir u2() {
    Schema s({"business", "spokesperson", "location"}, {"spokesperson", "location"});
    std::map<TupleId, Cir::Row> rows;
    rows.emplace("1", Cir::Row{Value("S. Propane"), dist({{"Mangione", "0.6"}, {"Strickland", "0.4"}}),
                               dist({{"Arlen", "0.6"}, {"McMaynerberry", "0.4"}})});
    rows.emplace("2", Cir::Row{Value("Mega Lo Mart"), dist({{"Mangione", "0.45"}, {"Thatherton", "0.55"}}),
                               dist({{"Arlen", "0.5"}, {"McMaynerberry", "0.5"}})});
    rows.emplace("3", Cir::Row{Value("Mega Lo Mart"), dist({{"Mangione", "0.4"}, {"Buckley", "0.6"}}),
                               dist({{"Arlen", "0.55"}, {"McMaynerberry", "0.45"}})});
    rows.emplace("4", Cir::Row{Value("Get In Get Out"), Value("Peggy"),
                               dist({{"Arlen", "0.35"}, {"McMaynerberry", "0.3"}, {"Dallas", "0.35"}})});
    return Cir(s, std::move(rows));
}

inline Relation relation(const Schema& s, std::map<TupleId, std::vector<std::string>> rows) {
    std::map<TupleId, Relation::Row> out;
    for (auto& [tid, values] : rows) {
        Relation::Row row;
        for (auto& v : values) row.emplace_back(v);
        out.emplace(tid, std::move(row));
    }
    return Relation(s, std::move(out));
}

inline Relation u1_specialists(const std::string& s1, const std::string& s2, const std::string& s3) {
    return relation(u1().schema(), {{"1", {"41", s1, "5 PM"}}, {"2", {"163", s2, "5 PM"}}, {"3", {"41", s3, "5 PM"}}});
}

/// Every sample of the CIR with its probability, written independently of
/// the library's solvers: a plain recursive product over the marked cells.
inline std::vector<std::pair<Relation, Rational>> all_samples(const Cir& cir) {
    const Schema& s = cir.schema();
    std::vector<std::pair<TupleId, std::size_t>> cells;
    for (const auto& [tid, row] : cir.rows())
        for (std::size_t i = 0; i < s.size(); ++i)
            if (s.is_marked(s.attributes()[i])) cells.emplace_back(tid, i);

    std::map<TupleId, Relation::Row> base;
    for (const auto& [tid, row] : cir.rows()) {
        Relation::Row r(s.size());
        for (std::size_t i = 0; i < s.size(); ++i)
            if (const auto* v = std::get_if<Value>(&row[i])) r[i] = *v;
        base.emplace(tid, std::move(r));
    }
    std::vector<std::pair<Relation, Rational>> out;
    auto rec = [&](auto&& self, std::size_t k, Rational p) -> void {
        if (k == cells.size()) {
            out.emplace_back(Relation(s, base), p);
            return;
        }
        const auto& [tid, i] = cells[k];
        for (const auto& [v, w] : std::get<Distribution>(cir.rows().at(tid)[i]).entries()) {
            base[tid][i] = v;
            self(self, k + 1, p * w);
        }
    };
    rec(rec, 0, Rational(1));
    return out;
}

// ---- Random instances -------------------------------------------------------

struct Instance {
    std::string stratum;
    Cir cir;
    FdSet fds;
};

class Generator {
public:
    explicit Generator(std::uint64_t seed) : rng_(seed) {}

    int uniform(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
    bool coin(double p = 0.5) { return std::bernoulli_distribution(p)(rng_); }

    /// Random distribution over 1..max_support of the values v0..v{domain-1},
    /// with small integer weights normalised exactly.
    Distribution distribution(int domain, int max_support) {
        std::vector<int> values(domain);
        for (int i = 0; i < domain; ++i) values[i] = i;
        std::shuffle(values.begin(), values.end(), rng_);
        const int k = uniform(1, std::min(domain, max_support));
        std::vector<int> weights(k);
        int total = 0;
        for (auto& w : weights) total += (w = uniform(1, 9));
        std::map<Value, Rational> m;
        for (int i = 0; i < k; ++i) m.emplace(Value("v" + std::to_string(values[i])), Rational(weights[i], total));
        return Distribution(std::move(m));
    }

    Cir cir(const Schema& schema, int tuples, int domain, int max_support) {
        std::map<TupleId, Cir::Row> rows;
        for (int t = 0; t < tuples; ++t) {
            Cir::Row row;
            for (const auto& a : schema.attributes()) {
                if (schema.is_marked(a))
                    row.emplace_back(distribution(domain, max_support));
                else
                    row.emplace_back(Value("v" + std::to_string(uniform(0, domain - 1))));
            }
            rows.emplace("t" + std::to_string(t), std::move(row));
        }
        return Cir(schema, std::move(rows));
    }

    /// Random CIR for `fds`' schema with at most `max_worlds` samples.
    Cir bounded_cir(const Schema& schema, int max_tuples, std::uint64_t max_worlds, int max_support = 3) {
        for (;;) {
            Cir c = cir(schema, uniform(1, max_tuples), uniform(2, 3), max_support);
            if (c.world_count() <= max_worlds) return c;
        }
    }

    Schema schema(int n, const AttrSet& marked) {
        static const std::vector<Attribute> names{"A", "B", "C", "D"};
        return Schema(std::vector<Attribute>(names.begin(), names.begin() + n), marked);
    }

    AttrSet random_subset(const std::vector<Attribute>& from, int min_size = 0) {
        for (;;) {
            AttrSet out;
            for (const auto& a : from)
                if (coin()) out.insert(a);
            if (static_cast<int>(out.size()) >= min_size) return out;
        }
    }

    static const std::vector<std::string>& strata() {
        static const std::vector<std::string> s{"?A->B",        "A->?B",           "A<->?B",      "?A<->?B",
                                                "left-certain", "unary-tractable", "decomposable"};
        return s;
    }

    Instance make(const std::string& stratum, int max_tuples = 6, std::uint64_t max_worlds = 1u << 14) {
        FdSet fds = make_fds(stratum);
        return {stratum, bounded_cir(fds.schema(), max_tuples, max_worlds), std::move(fds)};
    }

    FdSet make_fds(const std::string& stratum) {
        if (stratum == "?A->B" || stratum == "A->?B" || stratum == "A<->?B" || stratum == "?A<->?B") {
            const int n = uniform(2, 4);
            AttrSet marked;
            if (stratum[0] == '?') marked.insert("A");
            if (stratum.find("?B") != std::string::npos) marked.insert("B");
            for (int i = 2; i < n; ++i)
                if (coin()) marked.insert(std::string(1, static_cast<char>('A' + i)));
            const Schema s = schema(n, marked);
            std::vector<Fd> fds{Fd{{"A"}, {"B"}}};
            if (stratum.find("<->") != std::string::npos) fds.push_back(Fd{{"B"}, {"A"}});
            return FdSet(s, fds);
        }
        if (stratum == "left-certain") return left_certain();
        if (stratum == "unary-tractable") return unary_tractable();
        return decomposable();
    }

private:
    FdSet left_certain() {
        const int n = uniform(2, 4);
        const Schema all = schema(n, {});
        AttrSet marked = random_subset(all.attributes());
        if (static_cast<int>(marked.size()) == n) marked.erase(*marked.begin());
        if (marked.empty()) marked.insert(all.attributes().back());
        const Schema s = schema(n, marked);
        std::vector<Attribute> certain;
        for (const auto& a : s.attributes())
            if (!s.is_marked(a)) certain.push_back(a);
        std::vector<Fd> fds;
        const int k = uniform(1, 3);
        for (int i = 0; i < k; ++i) {
            Fd fd{random_subset(certain), {}};
            std::vector<Attribute> rhs_choices;
            for (const auto& a : s.attributes())
                if (!fd.lhs.count(a)) rhs_choices.push_back(a);
            if (rhs_choices.empty()) continue;
            fd.rhs.insert(rhs_choices[uniform(0, static_cast<int>(rhs_choices.size()) - 1)]);
            fds.push_back(std::move(fd));
        }
        if (fds.empty()) fds.push_back(Fd{{certain.front()}, {*marked.begin()}});
        return FdSet(s, fds);
    }

    // Every uncertain attribute is a sink or tied to a certain partner by an
    // equivalence; extra unary FDs keep that property.
    FdSet unary_tractable() {
        for (;;) {
            const int n = uniform(2, 4);
            const Schema all = schema(n, {});
            AttrSet marked = random_subset(all.attributes(), 1);
            if (static_cast<int>(marked.size()) == n) marked.erase(*marked.begin());
            const Schema s = schema(n, marked);
            std::vector<Attribute> certain, uncertain;
            for (const auto& a : s.attributes()) (s.is_marked(a) ? uncertain : certain).push_back(a);

            std::vector<Fd> fds;
            std::map<Attribute, Attribute> partner;
            for (const auto& u : uncertain) {
                const Attribute& c = certain[uniform(0, static_cast<int>(certain.size()) - 1)];
                if (coin(0.7)) {
                    partner[u] = c;
                    fds.push_back(Fd{{c}, {u}});
                    fds.push_back(Fd{{u}, {c}});
                } else {
                    fds.push_back(Fd{{c}, {u}});
                }
            }
            const int extra = uniform(0, 2);
            for (int i = 0; i < extra; ++i) {
                const Attribute& a = s.attributes()[uniform(0, n - 1)];
                const Attribute& b = s.attributes()[uniform(0, n - 1)];
                if (a == b) continue;
                fds.push_back(Fd{{a}, {b}});
            }
            FdSet f(s, fds);
            const Classification cls = classify(f);
            const bool unary_plan = std::any_of(cls.components.begin(), cls.components.end(), [](const auto& pc) {
                return pc.kind == PlanKind::UnaryTractable;
            });
            if (cls.polytime(Problem::Mpd) && unary_plan) return f;
        }
    }

    FdSet decomposable() {
        for (;;) {
            const int n = 4;
            AttrSet marked = random_subset(schema(n, {}).attributes(), 2);
            if (marked.size() == 4) marked.erase(*marked.rbegin());
            const Schema s = schema(n, marked);
            std::vector<Attribute> certain, uncertain;
            for (const auto& a : s.attributes()) (s.is_marked(a) ? uncertain : certain).push_back(a);
            std::vector<Fd> fds;
            for (const auto& u : uncertain) {
                // One or two FDs joining u with certain attributes only.
                const int k = uniform(1, 2);
                for (int i = 0; i < k; ++i) {
                    AttrSet side = random_subset(certain);
                    if (side.empty() && coin(0.7)) side.insert(certain[uniform(0, static_cast<int>(certain.size()) - 1)]);
                    if (coin()) {
                        fds.push_back(Fd{side, {u}});
                    } else {
                        AttrSet lhs = side;
                        lhs.insert(u);
                        std::vector<Attribute> rhs;
                        for (const auto& c : certain)
                            if (!lhs.count(c)) rhs.push_back(c);
                        if (rhs.empty()) {
                            fds.push_back(Fd{side, {u}});
                        } else {
                            fds.push_back(Fd{lhs, {rhs[uniform(0, static_cast<int>(rhs.size()) - 1)]}});
                        }
                    }
                }
            }
            FdSet f(s, fds);
            if (decompose(normalize(f)).components.size() >= 2) return f;
        }
    }

    std::mt19937_64 rng_;
};

}  // namespace fixtures
