#ifndef RTGMAP_MAPPING_HPP
#define RTGMAP_MAPPING_HPP

#include <string>
#include <vector>

#include "rtgmap/edit_op.hpp"
#include "rtgmap/grammar.hpp"

namespace rtgmap {

using EditScript = std::vector<EditOp>;

/// Source, target and the edit script transforming one into the other.
struct SchemaMapping {
    Grammar source;
    Grammar target;
    EditScript script;
};

/// Folds the script over the grammar, checking each op's definedness on the
/// intermediate result; throws NotDefinedAt with the first failing index.
/// The final grammar must be in reduced form (intermediates may not be).
Grammar apply_script(const Grammar& g, const EditScript& script);

/// Like apply_script but without the final reduced-form requirement.
Grammar apply_script_lenient(const Grammar& g, const EditScript& script);

/// Sum of per-op costs evaluated on the intermediate grammars.
int script_cost(const EditScript& script, const Grammar& g);

/// Every intermediate grammar G_0..G_n of the fold.
std::vector<Grammar> script_states(const Grammar& g, const EditScript& script);

/// Concatenation; the shared endpoint must match structurally.
SchemaMapping compose(const SchemaMapping& m1, const SchemaMapping& m2);

/// Per-op inversion in reverse order, endpoints swapped.
SchemaMapping invert(const SchemaMapping& m);

/// Conservative LTG extension: merges every set of competing non-terminals
/// into its lexicographically smallest member, emitting the edit script that
/// performs the merge. The target accepts every tree of the source and has
/// no competing non-terminals; an LTG input yields an empty script.
SchemaMapping mapping_gen(const Grammar& g);

} // namespace rtgmap

#endif
