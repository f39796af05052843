#ifndef RTGMAP_REGEX_TREE_HPP
#define RTGMAP_REGEX_TREE_HPP

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "rtgmap/position.hpp"

namespace rtgmap {

enum class RegexKind { Epsilon, Symbol, Choice, Concat, Star };

/// Content model encoded as an unranked tree over {|, ., *} with leaves in
/// N ∪ {ε}. Star nodes have exactly one child; choice and concat at least one.
/// Nested same-kind nodes are kept as written, never flattened.
struct RegexTree {
    RegexKind kind = RegexKind::Epsilon;
    std::string symbol;               // set iff kind == Symbol
    std::vector<RegexTree> children;  // empty for leaves

    bool is_leaf() const { return kind == RegexKind::Epsilon || kind == RegexKind::Symbol; }

    static RegexTree epsilon() { return RegexTree{}; }
    static RegexTree leaf(std::string name) {
        RegexTree t;
        t.kind = RegexKind::Symbol;
        t.symbol = std::move(name);
        return t;
    }
    static RegexTree star(RegexTree child) {
        RegexTree t;
        t.kind = RegexKind::Star;
        t.children.push_back(std::move(child));
        return t;
    }
    static RegexTree choice(std::vector<RegexTree> cs) {
        RegexTree t;
        t.kind = RegexKind::Choice;
        t.children = std::move(cs);
        return t;
    }
    static RegexTree concat(std::vector<RegexTree> cs) {
        RegexTree t;
        t.kind = RegexKind::Concat;
        t.children = std::move(cs);
        return t;
    }

    bool operator==(const RegexTree& o) const {
        return kind == o.kind && symbol == o.symbol && children == o.children;
    }
};

/// Operator label for textual forms; leaves yield their symbol or `epsilon`.
std::string node_label(const RegexTree& t);

const RegexTree* node_at(const RegexTree& t, const Position& p);
RegexTree* node_at(RegexTree& t, const Position& p);

std::size_t tree_size(const RegexTree& t);

/// Non-terminal names occurring in the tree (nt(R)).
std::set<std::string> symbols_of(const RegexTree& t);

/// Positions of every leaf labeled `name`, in preorder.
std::vector<Position> occurrences_of(const RegexTree& t, const std::string& name);

/// Right-hand side of a production rule as a terminal-rooted tree a(t_R).
struct RuleTree {
    std::string terminal;
    RegexTree body;
};

/// Resolves a RuleTree position: root is the terminal, 0.s addresses the
/// regex subtree at s. Returns nullptr when out of range.
const RegexTree* rule_node_at(const RuleTree& rt, const Position& p, bool* is_root = nullptr);

struct WellFormedReport {
    bool ok = true;
    int condition = 0;  // 1, 2 or 3: the first violated condition
    Position where;
    std::string detail;
};

/// Checks the three structural conditions on rule trees: terminal root with
/// one child, leaves in N ∪ {ε}, operator arities.
WellFormedReport is_well_formed(const RuleTree& rt);

/// Structural well-formedness of a bare content model (conditions 2 and 3).
WellFormedReport is_well_formed_body(const RegexTree& t);

/// Parses the concrete regex syntax: `.` concatenation, `|` choice, postfix
/// `*`, parentheses, the `epsilon` keyword, names [A-Za-z_][A-Za-z0-9_]*.
/// `.` binds tighter than `|`; `*` tightest. Parentheses collapse.
RegexTree regex_to_tree(const std::string& text);

/// Serialization inverse with minimal parenthesization. Unary choice/concat
/// nodes have no concrete syntax and collapse to their child.
std::string tree_to_regex(const RegexTree& t);

} // namespace rtgmap

#endif
