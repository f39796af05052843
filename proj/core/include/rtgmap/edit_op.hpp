#ifndef RTGMAP_EDIT_OP_HPP
#define RTGMAP_EDIT_OP_HPP

#include <string>
#include <variant>
#include <vector>

#include "rtgmap/grammar.hpp"
#include "rtgmap/position.hpp"
#include "rtgmap/regex_tree.hpp"

namespace rtgmap {

// Start-set edits.
struct SetStartElm { std::string nt; };
struct UnsetStartElm { std::string nt; };

// Leaf edits in a content model. Positions address the rule tree t^r_X:
// the root is the terminal, 0 its regex child.
struct InsElm { std::string nt; std::string symbol; Position at; };       // symbol may be "" for ε
struct DelElm { std::string nt; std::string symbol; Position at; };
struct RelRoot { std::string nt; std::string from; std::string to; };
struct RelElm { std::string nt; std::string from; std::string to; Position at; };

// Operator edits.
struct InsOpr { std::string nt; RegexKind opr; Position at; std::uint32_t count; };
struct DelOpr { std::string nt; RegexKind opr; Position at; std::uint32_t count; };
struct RelOpr { std::string nt; RegexKind from; RegexKind to; Position at; };

// Rule-set edits.
struct InsRule { std::string nt; std::string terminal; };
struct DelRule { std::string nt; std::string terminal; };

// Non-elementary shortcuts.
struct InsTree { std::string nt; RegexTree tree; Position at; };
struct DelTree { std::string nt; RegexTree tree; Position at; };
struct InsTreeRule { std::string nt; std::string terminal; RegexTree tree; };
struct DelTreeRule { std::string nt; std::string terminal; RegexTree tree; };

using EditOp = std::variant<SetStartElm, UnsetStartElm, InsElm, DelElm, RelRoot, RelElm,
                            InsOpr, DelOpr, RelOpr, InsRule, DelRule,
                            InsTree, DelTree, InsTreeRule, DelTreeRule>;

bool operator==(const EditOp& a, const EditOp& b);

/// Op name as written in scripts, e.g. `ins_opr`.
std::string kind_name(const EditOp& op);

bool is_elementary(const EditOp& op);

/// One op per line syntax: `ins_opr(I1,|,0,1)`, `rel_elm(H1,I2,I1,0.1.0)`,
/// `del_treerule(I2,info,(C|Pol))`. Root position is `e`; ε is `epsilon`.
std::string to_string(const EditOp& op);
EditOp parse_edit_op(const std::string& line);

/// Applies the op; throws NotDefined when a precondition fails and
/// DanglingReference when a rule deletion would orphan occurrences.
/// Reduced form is not enforced here (scripts may pass through states
/// whose merged symbols are temporarily unreferenced).
Grammar apply_edit(const Grammar& g, const EditOp& op);

/// 0 for the registered language-preserving simplifications (del_opr of a
/// node matching its parent's operator; del_opr of a unary choice/concat),
/// 1 for other elementary ops, 5 for non-elementary ones.
int cost(const EditOp& op, const Grammar& g);

/// Elementary expansion: tree grafts build root-to-leaves, prunes demolish
/// leaves-to-root, rule shortcuts go through an ε-bodied scaffold rule.
/// Elementary ops expand to themselves.
std::vector<EditOp> expand(const EditOp& op);

/// The involution pairing set⇌unset, ins⇌del, rel swaps its arguments.
EditOp invert_op(const EditOp& op);

} // namespace rtgmap

#endif
