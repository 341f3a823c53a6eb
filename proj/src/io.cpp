#include "cirsolve/io.hpp"

#include <algorithm>
#include <cctype>
#include <set>

#include <json.hpp>

#include "cirsolve/errors.hpp"
#include "cirsolve/fd_theory.hpp"

namespace cirsolve {

namespace {

using Json = nlohmann::ordered_json;

std::size_t line_of(std::string_view text, std::size_t byte) {
    byte = std::min(byte, text.size());
    return 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(byte), '\n'));
}

const Json& member(const Json& obj, const char* key, const std::string& path) {
    auto it = obj.find(key);
    if (it == obj.end()) throw ParseError(path, std::string("missing field '") + key + "'");
    return *it;
}

std::string as_string(const Json& j, const std::string& path) {
    if (!j.is_string()) throw ParseError(path, "expected a string");
    return j.get<std::string>();
}

Rational as_probability(const Json& j, const std::string& path) {
    std::string text;
    if (j.is_string())
        text = j.get<std::string>();
    else if (j.is_number())
        text = j.dump();
    else
        throw ParseError(path, "expected a probability as a fraction or decimal string");
    try {
        return Rational::parse(text);
    } catch (const std::invalid_argument& e) {
        throw ParseError(path, e.what());
    }
}

// Exact decimal text when the denominator has no prime factors besides 2 and 5.
std::optional<std::string> exact_decimal(const Rational& r) {
    BigInt den = r.denominator();
    unsigned long twos = 0, fives = 0;
    for (; mpz_divisible_ui_p(den.get_mpz_t(), 2); ++twos) den /= 2;
    for (; mpz_divisible_ui_p(den.get_mpz_t(), 5); ++fives) den /= 5;
    if (den != 1) return std::nullopt;
    const unsigned long digits = std::max(twos, fives);
    BigInt scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 10, digits);
    BigInt scaled = r.numerator() * scale / r.denominator();
    std::string text = BigInt(abs(scaled)).get_str();
    if (digits == 0) return (scaled < 0 ? "-" : "") + text;
    if (text.size() <= digits) text.insert(0, digits + 1 - text.size(), '0');
    text.insert(text.size() - digits, ".");
    return (scaled < 0 ? "-" : "") + text;
}

std::string probability_text(const Rational& p, bool decimals) {
    if (decimals)
        if (auto d = exact_decimal(p)) return *d;
    return p.str();
}

Json to_json(const Cir& cir, bool decimals) {
    const Schema& schema = cir.schema();
    Json doc;
    Json attrs = Json::array();
    for (const auto& a : schema.attributes()) attrs.push_back({{"name", a}, {"uncertain", schema.is_marked(a)}});
    doc["attributes"] = std::move(attrs);
    Json tuples = Json::array();
    for (const auto& [tid, row] : cir.rows()) {
        Json cells = Json::object();
        for (std::size_t i = 0; i < schema.size(); ++i) {
            if (const auto* v = std::get_if<Value>(&row[i])) {
                cells[schema.attributes()[i]] = v->text;
            } else {
                Json dist = Json::object();
                for (const auto& [v, p] : std::get<Distribution>(row[i]).entries())
                    dist[v.text] = probability_text(p, decimals);
                cells[schema.attributes()[i]] = std::move(dist);
            }
        }
        tuples.push_back({{"id", tid}, {"cells", std::move(cells)}});
    }
    doc["tuples"] = std::move(tuples);
    return doc;
}

}  // namespace

CirDocument parse_document(std::string_view text) {
    Json doc;
    try {
        doc = Json::parse(text.begin(), text.end());
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError("line " + std::to_string(line_of(text, e.byte == 0 ? 0 : e.byte - 1)), e.what());
    }
    if (!doc.is_object()) throw ParseError("document", "expected a JSON object");

    const Json& attrs = member(doc, "attributes", "document");
    if (!attrs.is_array()) throw ParseError("attributes", "expected an array");
    std::vector<Attribute> names;
    AttrSet marked;
    for (std::size_t i = 0; i < attrs.size(); ++i) {
        const std::string path = "attributes[" + std::to_string(i) + "]";
        if (!attrs[i].is_object()) throw ParseError(path, "expected an object");
        std::string name = as_string(member(attrs[i], "name", path), path + ".name");
        if (name.empty()) throw ParseError(path + ".name", "empty attribute name");
        if (std::find(names.begin(), names.end(), name) != names.end())
            throw ParseError(path + ".name", "duplicate attribute '" + name + "'");
        bool uncertain = false;
        if (auto it = attrs[i].find("uncertain"); it != attrs[i].end()) {
            if (!it->is_boolean()) throw ParseError(path + ".uncertain", "expected true or false");
            uncertain = it->get<bool>();
        }
        if (uncertain) marked.insert(name);
        names.push_back(std::move(name));
    }
    Schema schema(names, marked);

    const Json& tuples = member(doc, "tuples", "document");
    if (!tuples.is_array()) throw ParseError("tuples", "expected an array");
    std::map<TupleId, Cir::Row> rows;
    for (std::size_t i = 0; i < tuples.size(); ++i) {
        const std::string path = "tuples[" + std::to_string(i) + "]";
        if (!tuples[i].is_object()) throw ParseError(path, "expected an object");
        TupleId tid = as_string(member(tuples[i], "id", path), path + ".id");
        if (rows.count(tid)) throw ParseError(path + ".id", "duplicate tuple-id '" + tid + "'");
        const Json& cells = member(tuples[i], "cells", path);
        if (!cells.is_object()) throw ParseError(path + ".cells", "expected an object");
        for (const auto& [key, value] : cells.items())
            if (!schema.contains(key)) throw ParseError(path + ".cells." + key, "unknown attribute '" + key + "'");

        Cir::Row row;
        for (const auto& a : schema.attributes()) {
            const std::string cell_path = path + ".cells." + a;
            auto it = cells.find(a);
            if (it == cells.end()) throw ParseError(cell_path, "missing cell");
            if (it->is_string()) {
                row.emplace_back(Value(it->get<std::string>()));
                continue;
            }
            if (!it->is_object()) throw ParseError(cell_path, "expected a value string or a distribution object");
            if (!schema.is_marked(a)) throw ParseError(cell_path, "distribution in certain attribute '" + a + "'");
            std::map<Value, Rational> entries;
            for (const auto& [v, p] : it->items()) entries.emplace(Value(v), as_probability(p, cell_path + "." + v));
            try {
                row.emplace_back(Distribution(std::move(entries)));
            } catch (const StructuralError& e) {
                throw ParseError(cell_path, e.what());
            }
        }
        rows.emplace(std::move(tid), std::move(row));
    }

    CirDocument out;
    out.cir = Cir(schema, std::move(rows));
    if (auto it = doc.find("fds"); it != doc.end()) out.fds = as_string(*it, "fds");
    if (auto it = doc.find("meta"); it != doc.end()) out.meta = it->dump();
    return out;
}

Cir parse_cir(std::string_view text) { return parse_document(text).cir; }

std::string serialize_document(const CirDocument& doc, bool decimals) {
    Json j = to_json(doc.cir, decimals);
    if (doc.fds) j["fds"] = *doc.fds;
    if (!doc.meta.empty()) j["meta"] = Json::parse(doc.meta);
    return j.dump(2) + "\n";
}

std::string serialize_cir(const Cir& cir, bool decimals) { return serialize_document(CirDocument{cir, {}, {}}, decimals); }

// ---- FD text ---------------------------------------------------------------

namespace {

enum class Arrow { Right, Left, Both };

struct Token {
    enum Kind { Name, Empty, Link } kind;
    std::string text;
    Arrow arrow = Arrow::Right;
};

std::vector<Token> tokenize(std::string_view rule, const std::string& where) {
    std::vector<Token> out;
    std::size_t i = 0;
    while (i < rule.size()) {
        const char c = rule[i];
        if (std::isspace(static_cast<unsigned char>(c)) || c == ',') {
            ++i;
        } else if (rule.substr(i, 3) == "<->") {
            out.push_back({Token::Link, "<->", Arrow::Both});
            i += 3;
        } else if (rule.substr(i, 2) == "->") {
            out.push_back({Token::Link, "->", Arrow::Right});
            i += 2;
        } else if (rule.substr(i, 2) == "<-") {
            out.push_back({Token::Link, "<-", Arrow::Left});
            i += 2;
        } else if (rule.substr(i, 2) == "{}") {
            out.push_back({Token::Empty, "{}"});
            i += 2;
        } else {
            std::size_t j = i;
            while (j < rule.size() && !std::isspace(static_cast<unsigned char>(rule[j])) && rule[j] != ',' &&
                   rule[j] != '<' && rule[j] != '{' && !(rule[j] == '-' && j + 1 < rule.size() && rule[j + 1] == '>'))
                ++j;
            if (j == i) throw ParseError(where, std::string("unexpected character '") + c + "'");
            out.push_back({Token::Name, std::string(rule.substr(i, j - i))});
            i = j;
        }
    }
    return out;
}

}  // namespace

FdSet parse_fds(std::string_view text, const Schema& schema) {
    std::vector<Fd> fds;
    std::size_t rule_number = 0;
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t end = text.find(';', start);
        if (end == std::string_view::npos) end = text.size();
        const std::string_view rule = text.substr(start, end - start);
        start = end + 1;
        ++rule_number;
        const std::string where = "rule " + std::to_string(rule_number);
        const std::vector<Token> tokens = tokenize(rule, where);
        if (tokens.empty()) continue;

        std::vector<AttrSet> groups(1);
        std::vector<Arrow> arrows;
        bool group_empty_marker = false;
        for (const auto& t : tokens) {
            if (t.kind == Token::Link) {
                if (groups.back().empty() && !group_empty_marker)
                    throw ParseError(where, "missing attributes before '" + t.text + "'");
                arrows.push_back(t.arrow);
                groups.emplace_back();
                group_empty_marker = false;
                continue;
            }
            if (t.kind == Token::Empty) {
                if (!groups.back().empty() || group_empty_marker)
                    throw ParseError(where, "'{}' must stand alone as an attribute set");
                group_empty_marker = true;
                continue;
            }
            if (group_empty_marker) throw ParseError(where, "'{}' must stand alone as an attribute set");
            std::string name = t.text;
            const bool question = name.back() == '?';
            if (question) name.pop_back();
            if (name.empty()) throw ParseError(where, "missing attribute name before '?'");
            if (!schema.contains(name)) throw ParseError(where, "unknown attribute '" + name + "'");
            if (question != schema.is_marked(name))
                throw ParseError(where, "attribute '" + name + "' is " +
                                            (schema.is_marked(name) ? "uncertain and must be written '" + name + "?'"
                                                                    : "certain and must be written without '?'"));
            groups.back().insert(std::move(name));
        }
        if (arrows.empty()) throw ParseError(where, "expected '->', '<-' or '<->'");
        if (groups.back().empty() && !group_empty_marker)
            throw ParseError(where, "missing attributes after the last arrow");
        for (std::size_t k = 0; k < arrows.size(); ++k) {
            if (arrows[k] != Arrow::Left) fds.push_back(Fd{groups[k], groups[k + 1]});
            if (arrows[k] != Arrow::Right) fds.push_back(Fd{groups[k + 1], groups[k]});
        }
    }
    return normalize(FdSet(schema, std::move(fds)));
}

std::string format_fds(const FdSet& fds) {
    const FdSet f = normalize(fds);
    const Schema& schema = f.schema();
    auto side = [&](const AttrSet& attrs) {
        if (attrs.empty()) return std::string("{}");
        std::string out;
        for (const auto& a : attrs) {
            if (!out.empty()) out += ' ';
            out += a;
            if (schema.is_marked(a)) out += '?';
        }
        return out;
    };
    std::string out;
    for (const auto& fd : f.fds()) {
        if (!out.empty()) out += "; ";
        out += side(fd.lhs) + " -> " + side(fd.rhs);
    }
    return out;
}

}  // namespace cirsolve
