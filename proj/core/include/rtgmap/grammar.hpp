#ifndef RTGMAP_GRAMMAR_HPP
#define RTGMAP_GRAMMAR_HPP

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "rtgmap/regex_tree.hpp"
#include "rtgmap/xml_tree.hpp"

namespace rtgmap {

struct Rule {
    std::string terminal;
    RegexTree body;

    bool operator==(const Rule& o) const {
        return terminal == o.terminal && body == o.body;
    }
};

/// Regular tree grammar in normal form: `rules` maps each non-terminal to
/// its single production X -> a[R]. N and Σ are derived from the rules so
/// they always contain all and only the symbols appearing in them; `starts`
/// is kept a subset of N.
class Grammar {
public:
    Grammar() = default;
    Grammar(std::map<std::string, Rule> rules, std::set<std::string> starts);

    const std::map<std::string, Rule>& rules() const { return rules_; }
    const std::set<std::string>& starts() const { return starts_; }

    /// Rule keys plus every symbol occurring in a content model.
    std::set<std::string> non_terminals() const;
    std::set<std::string> terminals() const;

    bool has_rule(const std::string& nt) const { return rules_.count(nt) != 0; }
    const Rule& rule(const std::string& nt) const;
    const RegexTree& reg(const std::string& nt) const { return rule(nt).body; }
    const std::string& term(const std::string& nt) const { return rule(nt).terminal; }
    RuleTree rule_tree(const std::string& nt) const;

    bool operator==(const Grammar& o) const {
        return rules_ == o.rules_ && starts_ == o.starts_;
    }

private:
    std::map<std::string, Rule> rules_;
    std::set<std::string> starts_;
};

/// One rule as read from text, before normalization.
struct RawRule {
    std::string nt;
    std::string terminal;
    RegexTree body;
};

/// Merges rules that share a left-hand side and terminal into a disjunction;
/// throws ConflictingTerminal when one name labels two element types.
Grammar normalize(const std::vector<RawRule>& rules, const std::set<std::string>& starts);

/// Removes unreachable and unproductive non-terminals, eliminating dead
/// symbols from the surviving content models. Throws EmptyLanguage when no
/// start survives.
Grammar reduce(const Grammar& g);

/// True when every non-terminal has a rule, is reachable from a start and
/// generates at least one terminal-only tree.
bool is_reduced(const Grammar& g);

/// Explains the first reduced-form violation, or nullopt.
std::optional<std::string> reduced_violation(const Grammar& g);

/// Competing non-terminals grouped by their shared terminal; only groups of
/// two or more are reported.
std::map<std::string, std::set<std::string>> competing_pairs(const Grammar& g);

bool is_ltg(const Grammar& g);

/// Union of grammars with deterministic conflict renaming: a colliding
/// non-terminal keeps its name when its rule coincides with the one already
/// present (after renaming), and otherwise gets the smallest fresh `_k`
/// suffix. Inputs are processed in argument order.
Grammar union_grammars(const std::vector<Grammar>& gs);

/// Minimum-size terminal-only tree derivable from `nt`; ties broken by the
/// lexicographically smallest preorder label sequence. Throws Unproductive.
XmlTree min_tree(const Grammar& g, const std::string& nt);

/// Sizes of minimal trees for every productive non-terminal.
std::map<std::string, std::size_t> min_tree_sizes(const Grammar& g);

/// All terminal-only trees derivable from `nt` with at most `max_size`
/// nodes, ordered by (size, preorder labels). `max_count` of 0 = unbounded.
std::vector<XmlTree> enumerate_trees(const Grammar& g, const std::string& nt,
                                     std::size_t max_size, std::size_t max_count = 0);

/// Human-oriented first difference between two grammars, empty when equal.
std::string first_difference(const Grammar& a, const Grammar& b);

} // namespace rtgmap

#endif
