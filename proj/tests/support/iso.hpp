#ifndef RTGMAP_TESTS_ISO_HPP
#define RTGMAP_TESTS_ISO_HPP

// Grammar equality modulo a bijective renaming of non-terminals.

#include <map>
#include <optional>
#include <string>

#include "rtgmap/grammar.hpp"

namespace rtgmap::testsupport {

/// A bijection from a's non-terminals to b's making the grammars equal
/// (same terminals, isomorphic rules, matching starts), or nullopt.
std::optional<std::map<std::string, std::string>> grammar_isomorphism(const Grammar& a,
                                                                      const Grammar& b);

} // namespace rtgmap::testsupport

#endif
