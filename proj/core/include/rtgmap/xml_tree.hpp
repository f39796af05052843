#ifndef RTGMAP_XML_TREE_HPP
#define RTGMAP_XML_TREE_HPP

#include <string>
#include <vector>

#include "rtgmap/position.hpp"

namespace rtgmap {

/// Unranked labeled document tree. Attributes and text are outside the
/// supported subset and never represented.
struct XmlTree {
    std::string label;
    std::vector<XmlTree> children;

    bool operator==(const XmlTree& o) const {
        return label == o.label && children == o.children;
    }
    bool operator<(const XmlTree& o) const;  // by (preorder labels)

    static XmlTree leaf(std::string l) { return XmlTree{std::move(l), {}}; }
    static XmlTree node(std::string l, std::vector<XmlTree> cs) {
        return XmlTree{std::move(l), std::move(cs)};
    }
};

std::size_t tree_size(const XmlTree& t);

const XmlTree* node_at(const XmlTree& t, const Position& p);
XmlTree* node_at(XmlTree& t, const Position& p);

/// Replaces the subtree at p; p must exist.
void replace_at(XmlTree& t, const Position& p, XmlTree sub);

/// Labels in preorder; the canonical comparison key for result ordering.
std::vector<std::string> preorder_labels(const XmlTree& t);

/// All positions in preorder, starting with the root.
std::vector<Position> all_positions(const XmlTree& t);

/// Compact term form, e.g. `bill(SSN,item(trId,price),date)`.
std::string to_term_string(const XmlTree& t);
XmlTree parse_term_string(const std::string& text);

/// Element-only XML. Parsing skips the prolog, comments, DOCTYPE,
/// attributes and text content; serialization is two-space indented.
XmlTree parse_xml(const std::string& text);
std::string serialize_xml(const XmlTree& t);

} // namespace rtgmap

#endif
