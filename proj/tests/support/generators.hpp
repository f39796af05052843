#ifndef RTGMAP_TESTS_GENERATORS_HPP
#define RTGMAP_TESTS_GENERATORS_HPP

// Seeded random generators for property tests.

#include <optional>
#include <random>
#include <string>
#include <vector>

#include "rtgmap/edit_op.hpp"
#include "rtgmap/grammar.hpp"
#include "rtgmap/xml_tree.hpp"

namespace rtgmap::testgen {

using Rng = std::mt19937;

inline std::size_t pick(Rng& rng, std::size_t n) {
    return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
}

/// Random reduced grammar with at most `max_nts` non-terminals, content
/// models of depth <= 3, and a terminal pool small enough that competing
/// non-terminals are common.
Grammar random_reduced_grammar(Rng& rng, std::size_t max_nts = 6);

/// Derivation-sampled member of L(g); depth-bounded with minimal trees
/// filling the tail.
XmlTree random_tree(Rng& rng, const Grammar& g, std::size_t max_depth = 5);

/// A random op applicable to g, or nullopt if sampling kept failing.
std::optional<EditOp> random_applicable_op(Rng& rng, const Grammar& g);

/// A random script applicable to g whose final grammar is reduced.
std::optional<EditScript> random_applicable_script(Rng& rng, const Grammar& g, std::size_t len);

} // namespace rtgmap::testgen

#endif
