#ifndef RTGMAP_GLUSHKOV_HPP
#define RTGMAP_GLUSHKOV_HPP

#include <functional>
#include <string>
#include <vector>

#include "rtgmap/position.hpp"
#include "rtgmap/regex_tree.hpp"

namespace rtgmap {

/// Position automaton of a content model. States are the symbol-leaf
/// occurrences of the tree (ε leaves contribute none); consuming a symbol
/// lands on the occurrence it matched, which is what annotations need.
struct Nfa {
    struct Occurrence {
        Position pos;        // position within the regex tree
        std::string symbol;  // leaf label
    };

    std::vector<Occurrence> occurrences;  // preorder, so index order = position order
    std::vector<int> first;               // ascending
    std::vector<std::vector<int>> follow; // per occurrence, ascending
    std::vector<bool> last;
    bool nullable = false;
};

Nfa build_nfa(const RegexTree& t);

/// One accepting run: the occurrence consumed by each input symbol.
using MatchWitness = std::vector<Position>;

/// Membership without witness extraction.
bool nfa_accepts(const Nfa& nfa, const std::vector<std::string>& word);

/// Enumerates accepting runs in occurrence order. `max_witnesses` of 0 means
/// no cap. Distinct runs have distinct occurrence sequences.
std::vector<MatchWitness> match_word(const RegexTree& t, const std::vector<std::string>& word,
                                     std::size_t max_witnesses = 0);

/// Checks that `occ_indices` is an accepting run for `word`.
bool verify_run(const Nfa& nfa, const std::vector<std::string>& word,
                const std::vector<int>& occ_indices);

/// Occurrence index at `pos`, or -1.
int occurrence_index(const Nfa& nfa, const Position& pos);

/// Hedge matching where each input element offers several candidate symbols.
/// The visitor receives, per element, the candidate index chosen and the
/// occurrence landed on; return false to stop enumeration. Candidates are
/// explored in the order given, occurrences in ascending order.
struct HedgeStep {
    std::size_t candidate;  // index into the element's candidate list
    int occurrence;         // occurrence index in the automaton
};
void enumerate_hedge_runs(const Nfa& nfa,
                          const std::vector<std::vector<std::string>>& candidates,
                          const std::function<bool(const std::vector<HedgeStep>&)>& visit);

/// Shortest word of L(R) with its occurrence run; leftmost choice on ties.
struct MinWord {
    std::vector<std::string> symbols;
    std::vector<Position> occurrences;
};
MinWord min_word(const RegexTree& t);

} // namespace rtgmap

#endif
