#ifndef RTGMAP_TESTS_ORACLES_HPP
#define RTGMAP_TESTS_ORACLES_HPP

// Brute-force reference implementations used as independent oracles. These
// deliberately avoid the library's automaton and DP machinery: regex
// matching is structural recursion, correction search enumerates raw edit
// sequences.

#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "rtgmap/corrector.hpp"
#include "rtgmap/edit_op.hpp"
#include "rtgmap/grammar.hpp"
#include "rtgmap/position.hpp"
#include "rtgmap/regex_tree.hpp"
#include "rtgmap/xml_tree.hpp"

namespace rtgmap::oracle {

/// Structural membership of a word in L(R).
bool word_matches(const RegexTree& r, const std::vector<std::string>& word);

/// All accepting runs as leaf-position sequences, deduplicated.
std::set<std::vector<Position>> word_witnesses(const RegexTree& r,
                                               const std::vector<std::string>& word);

/// All words of L(R) with length at most max_len (star unrolling bounded by
/// max_len as well).
std::set<std::vector<std::string>> language_words(const RegexTree& r, std::size_t max_len);

/// Can `nt` generate the tree? Derivation checked by structural recursion.
bool derives_tree(const Grammar& g, const std::string& nt, const XmlTree& t);
bool derives_hedge(const Grammar& g, const RegexTree& model, const std::vector<XmlTree>& hedge);
bool in_language(const Grammar& g, const XmlTree& t);

/// Every tree reachable from t with at most `threshold` doc edits, mapped to
/// the smallest op count that reaches it. Labels are the insert/relabel
/// universe.
std::map<XmlTree, int> edit_ball(const XmlTree& t, const std::vector<std::string>& labels,
                                 int threshold);

/// Hedge version of edit_ball (ops never touch the synthetic root).
std::map<std::vector<XmlTree>, int> hedge_edit_ball(const std::vector<XmlTree>& hedge,
                                                    const std::vector<std::string>& labels,
                                                    int threshold);

/// Brute-force corrector: edit_ball filtered by validity.
std::map<XmlTree, int> correct_tree_oracle(const XmlTree& t, const std::string& nt,
                                           const Grammar& g, int threshold);
std::map<std::vector<XmlTree>, int> correct_hedge_oracle(const std::vector<XmlTree>& hedge,
                                                         const RegexTree& model, const Grammar& g,
                                                         int threshold);

/// All terminal-only trees of size <= max_size derivable from nt, by brute
/// derivation (independent of enumerate_trees).
std::set<XmlTree> language_trees(const Grammar& g, const std::string& nt, std::size_t max_size);

/// One annotation entry per node: generating non-terminal and occurrence in
/// the parent's rule tree (0-prefixed), root occurrence empty.
using FlatAnnotation = std::map<Position, std::pair<std::string, Position>>;

/// Every annotation of t against g, by structural enumeration.
std::vector<FlatAnnotation> annotate_oracle(const XmlTree& t, const Grammar& g);

/// Brute-force replay of a merge script's inverse over a document: full
/// re-annotation per op, ball-search corrections. Supports the op kinds a
/// generated merge mapping (or its inverse) contains. Returns result trees
/// with their cheapest total cost.
std::map<XmlTree, int> translate_oracle(const XmlTree& t, const Grammar& source,
                                        const std::vector<EditOp>& script, int threshold);

} // namespace rtgmap::oracle

#endif
