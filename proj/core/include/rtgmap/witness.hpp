#ifndef RTGMAP_WITNESS_HPP
#define RTGMAP_WITNESS_HPP

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "rtgmap/grammar.hpp"
#include "rtgmap/position.hpp"
#include "rtgmap/xml_tree.hpp"

namespace rtgmap {

inline constexpr std::size_t kDefaultWitnessCap = 64;

/// Per-node derivation record: the generating non-terminal, and for
/// non-root nodes the occurrence position of that non-terminal in the
/// parent's rule tree (root-of-rule-tree coordinates, so always 0-prefixed).
struct NodeAnnotation {
    std::string nt;
    std::optional<Position> occurrence;

    bool operator==(const NodeAnnotation& o) const {
        return nt == o.nt && occurrence == o.occurrence;
    }
};

/// A full derivation witness: one annotation per document position.
struct Annotation {
    std::map<Position, NodeAnnotation> nodes;

    bool operator==(const Annotation& o) const { return nodes == o.nodes; }

    const NodeAnnotation& at(const Position& p) const { return nodes.at(p); }
};

/// Formats one entry as `(p, A^u)`, or `(p, A)` for the root.
std::string format_annotation(const Position& p, const NodeAnnotation& a);

/// First derivation witness of t in L(g), or nullopt. Witness order is
/// deterministic: start symbols and candidate non-terminals lexicographic,
/// occurrence positions ascending.
std::optional<Annotation> validate(const XmlTree& t, const Grammar& g);

/// All witnesses up to `cap` (0 = unbounded), in the same deterministic
/// order. Throws InvalidDocument when the document has none.
std::vector<Annotation> annotate(const XmlTree& t, const Grammar& g,
                                 std::size_t cap = kDefaultWitnessCap);

/// Non-terminals that can generate the whole subtree t.
std::set<std::string> generating_candidates(const XmlTree& t, const Grammar& g);

/// First witness of t assuming its root is generated by `nt`; annotation
/// positions are relative to t's root, whose occurrence is left empty.
std::optional<Annotation> annotate_as(const XmlTree& t, const Grammar& g, const std::string& nt);

/// First match of a hedge against a bare content model: the generating
/// non-terminal and occurrence (regex-tree coordinates) per element.
struct HedgeWitness {
    std::vector<std::string> nts;
    std::vector<Position> occurrences;
};
std::optional<HedgeWitness> match_hedge(const std::vector<XmlTree>& hedge,
                                        const RegexTree& model, const Grammar& g);

} // namespace rtgmap

#endif
