#ifndef RTGMAP_GRAMMAR_TEXT_HPP
#define RTGMAP_GRAMMAR_TEXT_HPP

#include <string>

#include "rtgmap/grammar.hpp"

namespace rtgmap {

/// Text format: an optional `start:` header listing start symbols, one rule
/// per line as `X -> label [regex]`, `#` comments. Rules sharing a left-hand
/// side merge into a disjunction (normalize). Without a start header the
/// start symbols are the non-terminals that occur in no content model.
Grammar parse_grammar(const std::string& text);

/// Canonical form: `start:` line, then rules in lexicographic order.
/// parse_grammar(serialize_grammar(g)) == g for syntax-expressible bodies.
std::string serialize_grammar(const Grammar& g);

} // namespace rtgmap

#endif
