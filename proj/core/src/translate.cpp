#include "rtgmap/translate.hpp"

#include <algorithm>

#include "rtgmap/errors.hpp"
#include "rtgmap/glushkov.hpp"

namespace rtgmap {

namespace {

// Annotation kept parallel to the document so corrected regions splice in
// naturally.
struct AnnTree {
    std::string nt;
    std::optional<Position> occ;  // occurrence in the parent's rule tree
    std::vector<AnnTree> children;
};

AnnTree build_ann_tree(const XmlTree& doc, const Annotation& flat, const Position& here) {
    AnnTree a;
    const NodeAnnotation& na = flat.at(here);
    a.nt = na.nt;
    a.occ = na.occurrence;
    a.children.reserve(doc.children.size());
    for (std::uint32_t i = 0; i < doc.children.size(); ++i)
        a.children.push_back(build_ann_tree(doc.children[i], flat, here.child(i)));
    return a;
}

void flatten_ann(const AnnTree& a, const Position& here, Annotation& out) {
    out.nodes[here] = NodeAnnotation{a.nt, a.occ};
    for (std::uint32_t i = 0; i < a.children.size(); ++i)
        flatten_ann(a.children[i], here.child(i), out);
}

// Subtree annotation (positions relative to the subtree root) -> AnnTree.
// The root occurrence is assigned by the caller.
AnnTree ann_tree_of_subtree(const XmlTree& sub, const Annotation& flat) {
    return build_ann_tree(sub, flat, Position::root());
}

AnnTree* ann_at(AnnTree& a, const Position& p) {
    AnnTree* cur = &a;
    for (std::size_t i = 0; i < p.depth(); ++i) cur = &cur->children[p[i]];
    return cur;
}

struct IBranch {
    XmlTree doc;
    AnnTree ann;
    int cost = 0;
    std::vector<StepTrace> trace;
};

struct StepCtx {
    const Grammar& before;
    const Grammar& after;
    int threshold;
    std::size_t op_index;
    std::string op_text;
    const CorrectionChooser* chooser = nullptr;
    std::map<std::string, Nfa> nfas;

    const Nfa& nfa_after(const std::string& nt) {
        auto it = nfas.find(nt);
        if (it == nfas.end()) it = nfas.emplace(nt, build_nfa(after.reg(nt))).first;
        return it->second;
    }
};

// --------------------------------------------------------------------------
// Occurrence remapping for structural rule edits.

std::optional<Position> remap_ins_at(const Position& occ, const Position& at) {
    Position u = at.parent();
    if (!u.is_prefix_of(occ) || occ.depth() <= u.depth()) return occ;
    std::vector<std::uint32_t> steps(occ.steps());
    if (steps[u.depth()] >= at.last()) steps[u.depth()] += 1;
    return Position(steps);
}

std::optional<Position> remap_del_at(const Position& occ, const Position& at) {
    Position u = at.parent();
    if (!u.is_prefix_of(occ) || occ.depth() <= u.depth()) return occ;
    std::vector<std::uint32_t> steps(occ.steps());
    if (steps[u.depth()] == at.last()) return std::nullopt;  // inside the removed subtree
    if (steps[u.depth()] > at.last()) steps[u.depth()] -= 1;
    return Position(steps);
}

std::optional<Position> remap_ins_opr(const Position& occ, const Position& at, std::uint32_t n) {
    Position u = at.parent();
    if (!u.is_prefix_of(occ) || occ.depth() <= u.depth()) return occ;
    std::vector<std::uint32_t> steps(occ.steps());
    std::uint32_t j = steps[u.depth()];
    if (j >= at.last() && j < at.last() + n) {
        std::vector<std::uint32_t> out(steps.begin(), steps.begin() + static_cast<long>(u.depth()));
        out.push_back(at.last());
        out.push_back(j - at.last());
        out.insert(out.end(), steps.begin() + static_cast<long>(u.depth()) + 1, steps.end());
        return Position(out);
    }
    if (j >= at.last() + n) steps[u.depth()] = j - n + 1;
    return Position(steps);
}

std::optional<Position> remap_del_opr(const Position& occ, const Position& at, std::uint32_t n) {
    Position u = at.parent();
    if (!u.is_prefix_of(occ) || occ.depth() <= u.depth()) return occ;
    std::vector<std::uint32_t> steps(occ.steps());
    std::uint32_t j = steps[u.depth()];
    if (j == at.last()) {
        // Under the removed operator node: its children splice into the parent.
        if (occ.depth() < u.depth() + 2)
            return std::nullopt;  // the operator node itself cannot be an occurrence
        std::vector<std::uint32_t> out(steps.begin(), steps.begin() + static_cast<long>(u.depth()));
        out.push_back(at.last() + steps[u.depth() + 1]);
        out.insert(out.end(), steps.begin() + static_cast<long>(u.depth()) + 2, steps.end());
        return Position(out);
    }
    if (j > at.last()) steps[u.depth()] = j + n - 1;
    return Position(steps);
}

std::optional<Position> remap_occurrence(const Position& occ, const EditOp& op) {
    if (const auto* x = std::get_if<InsElm>(&op)) return remap_ins_at(occ, x->at);
    if (const auto* x = std::get_if<InsTree>(&op)) return remap_ins_at(occ, x->at);
    if (const auto* x = std::get_if<DelElm>(&op)) return remap_del_at(occ, x->at);
    if (const auto* x = std::get_if<DelTree>(&op)) return remap_del_at(occ, x->at);
    if (const auto* x = std::get_if<InsOpr>(&op)) return remap_ins_opr(occ, x->at, x->count);
    if (const auto* x = std::get_if<DelOpr>(&op)) return remap_del_opr(occ, x->at, x->count);
    return occ;
}

// --------------------------------------------------------------------------

const std::string* rule_nt_of(const EditOp& op) {
    if (const auto* x = std::get_if<InsElm>(&op)) return &x->nt;
    if (const auto* x = std::get_if<DelElm>(&op)) return &x->nt;
    if (const auto* x = std::get_if<RelElm>(&op)) return &x->nt;
    if (const auto* x = std::get_if<InsTree>(&op)) return &x->nt;
    if (const auto* x = std::get_if<DelTree>(&op)) return &x->nt;
    if (const auto* x = std::get_if<InsOpr>(&op)) return &x->nt;
    if (const auto* x = std::get_if<DelOpr>(&op)) return &x->nt;
    if (const auto* x = std::get_if<RelOpr>(&op)) return &x->nt;
    return nullptr;
}

void collect_annotated(const XmlTree& doc, const AnnTree& ann, const Position& here,
                       const std::string& nt, std::vector<Position>& out) {
    if (ann.nt == nt) out.push_back(here);
    for (std::uint32_t i = 0; i < doc.children.size(); ++i)
        collect_annotated(doc.children[i], ann.children[i], here.child(i), nt, out);
}

// One possibility for one affected node's children.
struct Outcome {
    std::vector<XmlTree> children;
    std::vector<AnnTree> anns;
    int cost = 0;
    std::vector<StepChange> changes;
};

std::string hedge_preview(const std::vector<XmlTree>& hedge) {
    std::string out;
    for (std::size_t i = 0; i < hedge.size(); ++i) {
        if (i) out += " ";
        out += to_term_string(hedge[i]);
    }
    return out.empty() ? "(empty)" : out;
}

void apply_chooser(StepCtx& ctx, const Position& at, std::vector<Outcome>& outcomes) {
    if (!ctx.chooser || !*ctx.chooser || outcomes.size() <= 1) return;
    CorrectionChoice choice;
    choice.op_index = ctx.op_index;
    choice.op_text = ctx.op_text;
    choice.at = at;
    for (const auto& o : outcomes)
        choice.candidates.push_back({o.cost, hedge_preview(o.children)});
    std::size_t pick = (*ctx.chooser)(choice);
    if (pick >= outcomes.size()) pick = 0;
    Outcome kept = std::move(outcomes[pick]);
    outcomes.clear();
    outcomes.push_back(std::move(kept));
}

// Re-annotates a hedge that is known to match the model; returns annotation
// children with rule-tree occurrence coordinates.
std::optional<std::vector<AnnTree>> annotate_hedge(StepCtx& ctx, const std::vector<XmlTree>& hedge,
                                                   const RegexTree& model) {
    auto witness = match_hedge(hedge, model, ctx.after);
    if (!witness) return std::nullopt;
    std::vector<AnnTree> anns;
    for (std::size_t k = 0; k < hedge.size(); ++k) {
        auto sub = annotate_as(hedge[k], ctx.after, witness->nts[k]);
        if (!sub) return std::nullopt;
        AnnTree a = ann_tree_of_subtree(hedge[k], *sub);
        a.occ = Position::root().child(0).concat(witness->occurrences[k]);
        anns.push_back(std::move(a));
    }
    return anns;
}

// Checks the recorded child occurrences still form an accepting run of the
// rule's content model in the new grammar.
bool verify_children_run(StepCtx& ctx, const std::string& rule_nt,
                         const std::vector<AnnTree>& children) {
    if (!ctx.after.has_rule(rule_nt)) return false;
    const Nfa& nfa = ctx.nfa_after(rule_nt);
    std::vector<std::string> word;
    std::vector<int> run;
    for (const auto& c : children) {
        if (!c.occ) return false;
        word.push_back(c.nt);
        const Position& occ = *c.occ;
        if (occ.is_root() || occ[0] != 0) return false;
        int idx = occurrence_index(nfa, occ.strip_prefix(Position::root().child(0)));
        if (idx < 0) return false;
        run.push_back(idx);
    }
    return verify_run(nfa, word, run);
}

// The standard repair ladder: keep the run, re-match it fresh, or hand it to
// the corrector. `base` carries the forced part (removals) already applied.
std::vector<Outcome> repair_children(StepCtx& ctx, const std::string& rule_nt,
                                     std::vector<XmlTree> children, std::vector<AnnTree> anns,
                                     Outcome base, int budget) {
    if (verify_children_run(ctx, rule_nt, anns)) {
        base.children = std::move(children);
        base.anns = std::move(anns);
        return {std::move(base)};
    }
    const RegexTree& model = ctx.after.reg(rule_nt);
    if (auto fresh = annotate_hedge(ctx, children, model)) {
        base.children = std::move(children);
        base.anns = std::move(*fresh);
        return {std::move(base)};
    }
    HedgeCorrections fixes = correct_hedge(children, model, ctx.after, budget - base.cost,
                                           CorrectorOptions{0});
    std::vector<Outcome> out;
    for (const auto& fix : fixes.items) {
        auto anns2 = annotate_hedge(ctx, fix.result, model);
        if (!anns2) throw Error("internal: corrected hedge does not re-annotate");
        Outcome o = base;
        o.children = fix.result;
        o.anns = std::move(*anns2);
        o.cost += fix.cost;
        o.changes.push_back({Position::root(), "corrected children against " +
                                                   tree_to_regex(model) + " at cost " +
                                                   std::to_string(fix.cost),
                             fix.cost});
        out.push_back(std::move(o));
    }
    return out;
}

// --------------------------------------------------------------------------
// Per-parent processing for the structural op kinds.

std::vector<Outcome> process_parent(StepCtx& ctx, const EditOp& op, const std::string& rule_nt,
                                    const XmlTree& parent, const AnnTree& parent_ann,
                                    const Position& parent_pos, int budget) {
    std::vector<XmlTree> children = parent.children;
    std::vector<AnnTree> anns = parent_ann.children;
    Outcome base;

    // Position of the edit inside the rule tree and the node kind it targets
    // in the old rule, which decides forced-removal and splice behavior.
    const bool is_del = std::holds_alternative<DelElm>(op) || std::holds_alternative<DelTree>(op);
    const bool is_ins = std::holds_alternative<InsElm>(op) || std::holds_alternative<InsTree>(op);
    Position at;
    if (const auto* x = std::get_if<DelElm>(&op)) at = x->at;
    if (const auto* x = std::get_if<DelTree>(&op)) at = x->at;
    if (const auto* x = std::get_if<InsElm>(&op)) at = x->at;
    if (const auto* x = std::get_if<InsTree>(&op)) at = x->at;

    bool under_concat = false;
    if (is_del || is_ins) {
        const RuleTree rt = ctx.before.rule_tree(rule_nt);
        Position u = at.parent();
        bool root_parent = u.is_root();
        const RegexTree* parent_node = root_parent ? nullptr : rule_node_at(rt, u);
        under_concat = parent_node && parent_node->kind == RegexKind::Concat;
    }

    if (is_del && under_concat) {
        // Children matched through the removed occurrences must go.
        std::vector<XmlTree> kept;
        std::vector<AnnTree> kept_anns;
        for (std::size_t i = 0; i < children.size(); ++i) {
            if (!anns[i].occ) {
                int sz = static_cast<int>(tree_size(children[i]));
                base.cost += sz;
                base.changes.push_back({parent_pos.child(static_cast<std::uint32_t>(i)),
                                        "removed " + to_term_string(children[i]), sz});
            } else {
                kept.push_back(std::move(children[i]));
                kept_anns.push_back(std::move(anns[i]));
            }
        }
        if (base.cost > budget) return {};
        return repair_children(ctx, rule_nt, std::move(kept), std::move(kept_anns),
                               std::move(base), budget);
    }

    if (is_ins && under_concat && !verify_children_run(ctx, rule_nt, anns)) {
        // A mandatory occurrence appeared: satisfy it with minimal material
        // at the matched slot.
        MinWord material;
        if (const auto* x = std::get_if<InsElm>(&op)) {
            if (!x->symbol.empty()) {
                material.symbols.push_back(x->symbol);
                material.occurrences.push_back(Position::root());
            }
        } else {
            material = min_word(std::get<InsTree>(op).tree);
        }
        std::size_t slot = children.size();
        for (std::size_t i = 0; i < children.size(); ++i) {
            if (anns[i].occ && at < *anns[i].occ) {
                slot = i;
                break;
            }
        }
        int added = 0;
        std::vector<XmlTree> material_trees;
        std::vector<AnnTree> material_anns;
        for (std::size_t k = 0; k < material.symbols.size(); ++k) {
            XmlTree fresh = min_tree(ctx.after, material.symbols[k]);
            added += static_cast<int>(tree_size(fresh));
            auto sub = annotate_as(fresh, ctx.after, material.symbols[k]);
            if (!sub) throw Error("internal: minimal tree does not annotate");
            AnnTree a = ann_tree_of_subtree(fresh, *sub);
            Position occ = at;
            if (std::holds_alternative<InsTree>(op))
                occ = at.concat(material.occurrences[k]);
            a.occ = occ;
            material_trees.push_back(std::move(fresh));
            material_anns.push_back(std::move(a));
        }
        if (base.cost + added > budget) return {};
        base.cost += added;
        if (added > 0)
            base.changes.push_back({parent_pos, "spliced minimal material (" +
                                                    hedge_preview(material_trees) + ")",
                                    added});
        children.insert(children.begin() + static_cast<long>(slot),
                        std::make_move_iterator(material_trees.begin()),
                        std::make_move_iterator(material_trees.end()));
        anns.insert(anns.begin() + static_cast<long>(slot),
                    std::make_move_iterator(material_anns.begin()),
                    std::make_move_iterator(material_anns.end()));
        if (!verify_children_run(ctx, rule_nt, anns))
            return repair_children(ctx, rule_nt, std::move(children), std::move(anns),
                                   std::move(base), budget);
        Outcome o = std::move(base);
        o.children = std::move(children);
        o.anns = std::move(anns);
        return {std::move(o)};
    }

    return repair_children(ctx, rule_nt, std::move(children), std::move(anns), std::move(base),
                           budget);
}

// --------------------------------------------------------------------------

void replace_children(XmlTree& doc, AnnTree& ann, const Position& at, Outcome&& o) {
    XmlTree* d = node_at(doc, at);
    AnnTree* a = ann_at(ann, at);
    d->children = std::move(o.children);
    a->children = std::move(o.anns);
}

std::vector<IBranch> fold_parents(StepCtx& ctx, const IBranch& branch,
                                  std::vector<Position> parents, const EditOp& op,
                                  const std::string& rule_nt) {
    // Deepest and rightmost first keeps shallower positions stable.
    std::sort(parents.begin(), parents.end());
    std::reverse(parents.begin(), parents.end());

    std::vector<IBranch> inflight{branch};
    inflight.front().trace.push_back(StepTrace{ctx.op_index, ctx.op_text, {}});
    for (const auto& pos : parents) {
        std::vector<IBranch> next;
        for (auto& state : inflight) {
            const XmlTree* parent = node_at(state.doc, pos);
            AnnTree* parent_ann = ann_at(state.ann, pos);
            std::vector<Outcome> outcomes = process_parent(ctx, op, rule_nt, *parent, *parent_ann,
                                                           pos, ctx.threshold - state.cost);
            apply_chooser(ctx, pos, outcomes);
            for (auto& o : outcomes) {
                if (state.cost + o.cost > ctx.threshold) continue;
                IBranch nb = state;
                nb.cost += o.cost;
                for (auto& ch : o.changes) {
                    StepChange c = ch;
                    // Hedge-level notes are relative to the parent.
                    if (c.at.is_root()) c.at = pos;
                    nb.trace.back().changes.push_back(std::move(c));
                }
                replace_children(nb.doc, nb.ann, pos, std::move(o));
                next.push_back(std::move(nb));
            }
        }
        inflight = std::move(next);
        if (inflight.empty()) break;
    }
    return inflight;
}

// Fast path first, then the corrector, for one renamed child.
std::vector<Outcome> rel_elm_child_options(StepCtx& ctx, const XmlTree& child,
                                           const Position& occ, const std::string& to,
                                           int budget) {
    if (auto sub = annotate_as(child, ctx.after, to)) {
        AnnTree a = ann_tree_of_subtree(child, *sub);
        a.occ = occ;
        Outcome o;
        o.children = {child};
        o.anns = {std::move(a)};
        return {std::move(o)};
    }
    TreeCorrections fixes = correct_tree(child, to, ctx.after, budget, CorrectorOptions{0});
    std::vector<Outcome> out;
    for (const auto& fix : fixes.items) {
        auto sub = annotate_as(fix.result, ctx.after, to);
        if (!sub) throw Error("internal: corrected subtree does not annotate");
        AnnTree a = ann_tree_of_subtree(fix.result, *sub);
        a.occ = occ;
        Outcome o;
        o.children = {fix.result};
        o.anns = {std::move(a)};
        o.cost = fix.cost;
        o.changes.push_back(
            {Position::root(), "corrected into " + to + " at cost " + std::to_string(fix.cost),
             fix.cost});
        out.push_back(std::move(o));
    }
    return out;
}

std::vector<Outcome> process_rel_elm_parent(StepCtx& ctx, const RelElm& op, const XmlTree& parent,
                                            const AnnTree& parent_ann, const Position& parent_pos,
                                            int budget) {
    std::vector<std::size_t> affected;
    for (std::size_t i = 0; i < parent_ann.children.size(); ++i) {
        const AnnTree& c = parent_ann.children[i];
        if (c.occ && *c.occ == op.at && c.nt == op.from) affected.push_back(i);
    }

    std::vector<Outcome> acc;
    acc.push_back(Outcome{parent.children, parent_ann.children, 0, {}});
    for (std::size_t idx : affected) {
        std::vector<Outcome> next;
        for (auto& state : acc) {
            std::vector<Outcome> options = rel_elm_child_options(
                ctx, state.children[idx], op.at, op.to, budget - state.cost);
            apply_chooser(ctx, parent_pos.child(static_cast<std::uint32_t>(idx)), options);
            for (auto& opt : options) {
                if (state.cost + opt.cost > budget) continue;
                Outcome merged = state;
                merged.cost += opt.cost;
                merged.children[idx] = opt.children.front();
                merged.anns[idx] = opt.anns.front();
                for (auto& ch : opt.changes) {
                    StepChange c = ch;
                    c.at = parent_pos.child(static_cast<std::uint32_t>(idx));
                    merged.changes.push_back(std::move(c));
                }
                next.push_back(std::move(merged));
            }
        }
        acc = std::move(next);
        if (acc.empty()) break;
    }
    return acc;
}

// Whole-document re-derivation after a start or rule removal hits the root.
std::vector<IBranch> redo_root(StepCtx& ctx, const IBranch& branch) {
    IBranch base = branch;
    base.trace.push_back(StepTrace{ctx.op_index, ctx.op_text, {}});

    std::set<std::string> cands = generating_candidates(base.doc, ctx.after);
    for (const auto& start : ctx.after.starts()) {
        if (!cands.count(start)) continue;
        auto sub = annotate_as(base.doc, ctx.after, start);
        if (!sub) continue;
        base.ann = ann_tree_of_subtree(base.doc, *sub);
        return {std::move(base)};
    }

    // No start re-derives the tree as-is; correct it toward each start.
    std::vector<Outcome> options;
    for (const auto& start : ctx.after.starts()) {
        TreeCorrections fixes =
            correct_tree(base.doc, start, ctx.after, ctx.threshold - base.cost, CorrectorOptions{0});
        for (const auto& fix : fixes.items) {
            Outcome o;
            o.children = {fix.result};
            o.cost = fix.cost;
            o.changes.push_back({Position::root(),
                                 "corrected whole tree into " + start + " at cost " +
                                     std::to_string(fix.cost),
                                 fix.cost});
            options.push_back(std::move(o));
        }
    }
    std::sort(options.begin(), options.end(), [](const Outcome& a, const Outcome& b) {
        if (a.cost != b.cost) return a.cost < b.cost;
        return a.children.front() < b.children.front();
    });
    options.erase(std::unique(options.begin(), options.end(),
                              [](const Outcome& a, const Outcome& b) {
                                  return a.children.front() == b.children.front();
                              }),
                  options.end());
    apply_chooser(ctx, Position::root(), options);

    std::vector<IBranch> out;
    for (auto& o : options) {
        if (base.cost + o.cost > ctx.threshold) continue;
        IBranch nb = base;
        nb.doc = o.children.front();
        nb.cost += o.cost;
        for (auto& ch : o.changes) nb.trace.back().changes.push_back(ch);
        // Re-derive the annotation from scratch against the new grammar.
        bool done = false;
        std::set<std::string> c2 = generating_candidates(nb.doc, ctx.after);
        for (const auto& start : ctx.after.starts()) {
            if (!c2.count(start)) continue;
            auto sub = annotate_as(nb.doc, ctx.after, start);
            if (sub) {
                nb.ann = ann_tree_of_subtree(nb.doc, *sub);
                done = true;
                break;
            }
        }
        if (!done) throw Error("internal: corrected document does not re-annotate");
        out.push_back(std::move(nb));
    }
    return out;
}

void relabel_annotated(XmlTree& doc, AnnTree& ann, const Position& here, const std::string& nt,
                       const std::string& to, std::vector<StepChange>& changes) {
    if (ann.nt == nt) {
        changes.push_back({here, "relabel " + doc.label + " -> " + to, 0});
        doc.label = to;
    }
    for (std::uint32_t i = 0; i < doc.children.size(); ++i)
        relabel_annotated(doc.children[i], ann.children[i], here.child(i), nt, to, changes);
}

// Applies occurrence remapping to every child of every `nt`-annotated node;
// vanished occurrences become empty (the affected marker).
void remap_annotations(AnnTree& ann, const std::string& nt, const EditOp& op) {
    if (ann.nt == nt) {
        for (auto& c : ann.children)
            if (c.occ) c.occ = remap_occurrence(*c.occ, op);
    }
    for (auto& c : ann.children) remap_annotations(c, nt, op);
}

bool has_vanished_child(const AnnTree& ann, const std::string& nt) {
    if (ann.nt == nt)
        for (const auto& c : ann.children)
            if (!c.occ) return true;
    for (const auto& c : ann.children)
        if (has_vanished_child(c, nt)) return true;
    return false;
}

std::vector<IBranch> step_branch(StepCtx& ctx, const IBranch& branch, const EditOp& op) {
    // Pure extensions: the old language is contained in the new one.
    if (std::holds_alternative<SetStartElm>(op) || std::holds_alternative<InsRule>(op) ||
        std::holds_alternative<InsTreeRule>(op)) {
        IBranch nb = branch;
        nb.trace.push_back(StepTrace{ctx.op_index, ctx.op_text, {}});
        return {std::move(nb)};
    }

    if (const auto* x = std::get_if<RelRoot>(&op)) {
        IBranch nb = branch;
        nb.trace.push_back(StepTrace{ctx.op_index, ctx.op_text, {}});
        relabel_annotated(nb.doc, nb.ann, Position::root(), x->nt, x->to,
                          nb.trace.back().changes);
        return {std::move(nb)};
    }

    if (const auto* x = std::get_if<UnsetStartElm>(&op)) {
        if (branch.ann.nt != x->nt) {
            IBranch nb = branch;
            nb.trace.push_back(StepTrace{ctx.op_index, ctx.op_text, {}});
            return {std::move(nb)};
        }
        return redo_root(ctx, branch);
    }
    if (std::holds_alternative<DelRule>(op) || std::holds_alternative<DelTreeRule>(op)) {
        const std::string& gone = std::holds_alternative<DelRule>(op)
                                      ? std::get<DelRule>(op).nt
                                      : std::get<DelTreeRule>(op).nt;
        if (branch.ann.nt != gone) {
            IBranch nb = branch;
            nb.trace.push_back(StepTrace{ctx.op_index, ctx.op_text, {}});
            return {std::move(nb)};
        }
        return redo_root(ctx, branch);
    }

    if (const auto* x = std::get_if<RelElm>(&op)) {
        std::vector<Position> parents;
        collect_annotated(branch.doc, branch.ann, Position::root(), x->nt, parents);
        std::sort(parents.begin(), parents.end());
        std::reverse(parents.begin(), parents.end());

        std::vector<IBranch> inflight{branch};
        inflight.front().trace.push_back(StepTrace{ctx.op_index, ctx.op_text, {}});
        for (const auto& pos : parents) {
            std::vector<IBranch> next;
            for (auto& state : inflight) {
                const XmlTree* parent = node_at(state.doc, pos);
                AnnTree* parent_ann = ann_at(state.ann, pos);
                std::vector<Outcome> outcomes = process_rel_elm_parent(
                    ctx, *x, *parent, *parent_ann, pos, ctx.threshold - state.cost);
                for (auto& o : outcomes) {
                    if (state.cost + o.cost > ctx.threshold) continue;
                    IBranch nb = state;
                    nb.cost += o.cost;
                    for (auto& ch : o.changes) nb.trace.back().changes.push_back(ch);
                    replace_children(nb.doc, nb.ann, pos, std::move(o));
                    next.push_back(std::move(nb));
                }
            }
            inflight = std::move(next);
            if (inflight.empty()) break;
        }
        return inflight;
    }

    // Structural content-model edits.
    const std::string* rule_nt = rule_nt_of(op);
    if (!rule_nt) throw Error("internal: unhandled op kind in translate");

    IBranch remapped = branch;
    remap_annotations(remapped.ann, *rule_nt, op);

    std::vector<Position> parents;
    collect_annotated(remapped.doc, remapped.ann, Position::root(), *rule_nt, parents);
    return fold_parents(ctx, remapped, std::move(parents), op, *rule_nt);
}

std::vector<IBranch> run_step(const std::vector<IBranch>& branches, const EditOp& op,
                              const Grammar& g_before, const Grammar& g_after, int threshold,
                              std::size_t op_index, const CorrectionChooser* chooser) {
    StepCtx ctx{g_before, g_after, threshold, op_index, to_string(op), chooser, {}};
    std::vector<IBranch> out;
    for (const auto& b : branches) {
        std::vector<IBranch> stepped = step_branch(ctx, b, op);
        for (auto& s : stepped) out.push_back(std::move(s));
    }
    return out;
}

} // namespace

std::vector<TranslateBranch> translate_step(const std::vector<TranslateBranch>& branches,
                                            const EditOp& op, const Grammar& g_before,
                                            const Grammar& g_after, int threshold) {
    std::vector<IBranch> internal;
    for (const auto& b : branches)
        internal.push_back(IBranch{b.doc, build_ann_tree(b.doc, b.ann, Position::root()), b.cost, {}});
    std::vector<IBranch> stepped = run_step(internal, op, g_before, g_after, threshold, 0, nullptr);
    std::vector<TranslateBranch> out;
    for (auto& s : stepped) {
        Annotation flat;
        flatten_ann(s.ann, Position::root(), flat);
        out.push_back(TranslateBranch{std::move(s.doc), std::move(flat), s.cost});
    }
    return out;
}

std::vector<TranslationResult> translate(const XmlTree& t, const SchemaMapping& mapping,
                                         int threshold, const TranslateOptions& opts) {
    if (threshold < 0) throw Error("threshold must be non-negative");

    std::size_t cap = opts.chooser ? 1 : opts.witness_cap;
    std::vector<Annotation> annotations = annotate(t, mapping.source, cap);  // InvalidDocument if none

    std::vector<Grammar> states = script_states(mapping.source, mapping.script);

    std::vector<IBranch> branches;
    for (const auto& a : annotations)
        branches.push_back(IBranch{t, build_ann_tree(t, a, Position::root()), 0, {}});

    for (std::size_t k = 0; k < mapping.script.size(); ++k) {
        branches = run_step(branches, mapping.script[k], states[k], states[k + 1], threshold, k,
                            opts.chooser ? &opts.chooser : nullptr);
        if (branches.empty()) break;
    }

    const Grammar& final_grammar = states.back();
    std::map<XmlTree, TranslationResult> best;
    for (auto& b : branches) {
        if (!validate(b.doc, final_grammar)) continue;
        auto it = best.find(b.doc);
        if (it == best.end() || b.cost < it->second.total_cost)
            best[b.doc] = TranslationResult{b.doc, b.cost, std::move(b.trace)};
    }

    std::vector<TranslationResult> out;
    for (auto& [doc, res] : best) out.push_back(std::move(res));
    std::sort(out.begin(), out.end(), [](const TranslationResult& a, const TranslationResult& b) {
        if (a.total_cost != b.total_cost) return a.total_cost < b.total_cost;
        return a.result < b.result;
    });
    if (out.empty()) throw NoSolution("every branch exceeded the threshold");
    if (opts.max_results && out.size() > opts.max_results) out.resize(opts.max_results);
    return out;
}

} // namespace rtgmap
