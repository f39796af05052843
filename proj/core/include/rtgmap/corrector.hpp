#ifndef RTGMAP_CORRECTOR_HPP
#define RTGMAP_CORRECTOR_HPP

#include <string>
#include <vector>

#include "rtgmap/grammar.hpp"
#include "rtgmap/position.hpp"
#include "rtgmap/regex_tree.hpp"
#include "rtgmap/xml_tree.hpp"

namespace rtgmap {

/// Unit-cost document edits: relabel any node, insert a leaf, delete a leaf.
struct DocEditOp {
    enum class Kind { Relabel, InsertLeaf, DeleteLeaf };
    Kind kind;
    Position pos;
    std::string label;  // new label; empty for DeleteLeaf

    bool operator==(const DocEditOp& o) const {
        return kind == o.kind && pos == o.pos && label == o.label;
    }
};

std::string to_string(const DocEditOp& op);

/// Replays one op; throws Error when the op is not applicable (relabel of a
/// missing node, deletion of a non-leaf, insertion out of range).
XmlTree apply_doc_op(const XmlTree& t, const DocEditOp& op);
XmlTree apply_doc_ops(const XmlTree& t, const std::vector<DocEditOp>& ops);

/// Hedge replay: the first position step indexes the hedge element.
std::vector<XmlTree> apply_doc_ops_hedge(const std::vector<XmlTree>& hedge,
                                         const std::vector<DocEditOp>& ops);

/// Minimum number of DocEditOps transforming a into b.
int doc_distance(const XmlTree& a, const XmlTree& b);
int hedge_distance(const std::vector<XmlTree>& a, const std::vector<XmlTree>& b);

/// A minimal op sequence realizing the transformation (deletes, then
/// relabels, then inserts; every intermediate step is applicable).
std::vector<DocEditOp> doc_edit_ops(const XmlTree& a, const XmlTree& b);
std::vector<DocEditOp> hedge_edit_ops(const std::vector<XmlTree>& a,
                                      const std::vector<XmlTree>& b);

struct TreeCorrection {
    XmlTree result;
    int cost = 0;                // equals doc_distance(input, result)
    std::vector<DocEditOp> ops;  // replays input into result
};

struct HedgeCorrection {
    std::vector<XmlTree> result;
    int cost = 0;
    std::vector<DocEditOp> ops;
};

struct CorrectorOptions {
    std::size_t max_results = 256;  // 0 = unbounded
};

struct TreeCorrections {
    std::vector<TreeCorrection> items;  // sorted by (cost, preorder labels)
    bool truncated = false;
};

struct HedgeCorrections {
    std::vector<HedgeCorrection> items;
    bool truncated = false;
};

/// Every tree generated by `nt` within edit distance `threshold` of t.
/// The set is complete; each item carries its true distance and a minimal
/// witnessing op sequence.
TreeCorrections correct_tree(const XmlTree& t, const std::string& nt, const Grammar& g,
                             int threshold, const CorrectorOptions& opts = {});

/// Every hedge in the content model's language (elements generated through
/// g) within edit distance `threshold` of the given hedge.
HedgeCorrections correct_hedge(const std::vector<XmlTree>& hedge, const RegexTree& model,
                               const Grammar& g, int threshold,
                               const CorrectorOptions& opts = {});

} // namespace rtgmap

#endif
