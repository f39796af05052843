#ifndef RTGMAP_TRANSLATE_HPP
#define RTGMAP_TRANSLATE_HPP

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "rtgmap/corrector.hpp"
#include "rtgmap/mapping.hpp"
#include "rtgmap/witness.hpp"
#include "rtgmap/xml_tree.hpp"

namespace rtgmap {

/// One document-level effect of replaying a script op.
struct StepChange {
    Position at;       // parent (or node) the change happened under
    std::string note;  // relabel / removal / splice / correction summary
    int cost = 0;
};

struct StepTrace {
    std::size_t op_index = 0;
    std::string op_text;
    std::vector<StepChange> changes;  // empty = zero document change

    bool zero_change() const { return changes.empty(); }
};

struct TranslationResult {
    XmlTree result;
    int total_cost = 0;
    std::vector<StepTrace> trace;
};

/// Interactive narrowing: called wherever a repair offers more than one
/// candidate; returns the index of the candidate to follow.
struct CorrectionChoice {
    std::size_t op_index = 0;
    std::string op_text;
    Position at;
    struct Candidate {
        int cost = 0;
        std::string preview;
    };
    std::vector<Candidate> candidates;
};
using CorrectionChooser = std::function<std::size_t(const CorrectionChoice&)>;

struct TranslateOptions {
    std::size_t witness_cap = kDefaultWitnessCap;  // annotation variants explored
    std::size_t max_results = 256;                 // 0 = unbounded
    CorrectionChooser chooser;                     // when set, follows one branch
};

/// A document state mid-translation: the tree, its annotation against the
/// current intermediate grammar, and the budget consumed so far.
struct TranslateBranch {
    XmlTree doc;
    Annotation ann;
    int cost = 0;
};

/// Replays one schema op as document updates: pure extensions pass through,
/// forced relabels and splices apply deterministically, everything else is
/// re-witnessed and, on failure, repaired through the corrector within the
/// remaining budget. Branches exceeding the threshold are dropped.
std::vector<TranslateBranch> translate_step(const std::vector<TranslateBranch>& branches,
                                            const EditOp& op, const Grammar& g_before,
                                            const Grammar& g_after, int threshold);

/// Mapping-guided translation: annotates the document against the source
/// schema, folds the script with translate_step semantics, and returns every
/// surviving result deduplicated and sorted by (total cost, preorder labels).
std::vector<TranslationResult> translate(const XmlTree& t, const SchemaMapping& mapping,
                                         int threshold, const TranslateOptions& opts = {});

} // namespace rtgmap

#endif
