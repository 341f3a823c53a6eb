#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "cirsolve/model.hpp"

namespace cirsolve {

/// Parsed JSON document:
///
///   {
///     "attributes": [{"name": "room", "uncertain": false}, ...],
///     "tuples": [{"id": "1", "cells": {"room": "41",
///                                      "specialist": {"Bart": "1/2", "Lisa": "0.5"}}}],
///     "fds": "specialist? time -> room",        (optional)
///     "meta": {...}                             (optional, kept verbatim)
///   }
///
/// Certain cells are strings. Uncertain cells are a string (point
/// distribution) or an object from value to probability, written as a
/// fraction string, a decimal string, or a JSON number (read exactly from its
/// decimal text).
struct CirDocument {
    Cir cir;
    std::optional<std::string> fds;
    /// Serialized JSON of the "meta" member; empty when absent.
    std::string meta;
};

/// Throws ParseError located at "line N" for syntax errors and at a field
/// path such as "tuples[2].cells.specialist" for semantic ones.
CirDocument parse_document(std::string_view text);
Cir parse_cir(std::string_view text);

/// Pretty-printed document; probabilities as fraction strings, or as exact
/// decimal strings when every probability has a terminating expansion and
/// `decimals` is set.
std::string serialize_document(const CirDocument& doc, bool decimals = false);
std::string serialize_cir(const Cir& cir, bool decimals = false);

/// FD text: rules separated by ";". A rule is a chain of attribute groups
/// joined by "->", "<-" or "<->"; attributes are whitespace-separated and
/// "{}" writes the empty set. A trailing "?" marks an uncertain attribute and
/// must agree with the schema. The result is normalized.
FdSet parse_fds(std::string_view text, const Schema& schema);

/// One "lhs -> rhs" rule per FD, joined by "; ", with "?" on marked
/// attributes. parse_fds(format_fds(f)) == normalize(f).
std::string format_fds(const FdSet& fds);

}  // namespace cirsolve
