#include "oracles.hpp"

#include <algorithm>
#include <functional>

namespace rtgmap::oracle {

namespace {

using Word = std::vector<std::string>;

// Splits of w into k consecutive pieces are explored recursively; star
// pieces must be nonempty to keep the recursion finite.
bool match_range(const RegexTree& r, const Word& w, std::size_t lo, std::size_t hi);

bool match_concat(const std::vector<RegexTree>& parts, std::size_t part, const Word& w,
                  std::size_t lo, std::size_t hi) {
    if (part == parts.size()) return lo == hi;
    for (std::size_t mid = lo; mid <= hi; ++mid) {
        if (match_range(parts[part], w, lo, mid) && match_concat(parts, part + 1, w, mid, hi))
            return true;
    }
    return false;
}

bool match_star(const RegexTree& child, const Word& w, std::size_t lo, std::size_t hi) {
    if (lo == hi) return true;
    for (std::size_t mid = lo + 1; mid <= hi; ++mid) {
        if (match_range(child, w, lo, mid) && match_star(child, w, mid, hi)) return true;
    }
    return false;
}

bool match_range(const RegexTree& r, const Word& w, std::size_t lo, std::size_t hi) {
    switch (r.kind) {
        case RegexKind::Epsilon:
            return lo == hi;
        case RegexKind::Symbol:
            return hi == lo + 1 && w[lo] == r.symbol;
        case RegexKind::Choice:
            for (const auto& c : r.children)
                if (match_range(c, w, lo, hi)) return true;
            return false;
        case RegexKind::Concat:
            return match_concat(r.children, 0, w, lo, hi);
        case RegexKind::Star:
            return match_star(r.children[0], w, lo, hi);
    }
    return false;
}

using Runs = std::set<std::vector<Position>>;

Runs runs_range(const RegexTree& r, const Position& here, const Word& w, std::size_t lo,
                std::size_t hi);

Runs runs_concat(const std::vector<RegexTree>& parts, const Position& here, std::size_t part,
                 const Word& w, std::size_t lo, std::size_t hi) {
    Runs out;
    if (part == parts.size()) {
        if (lo == hi) out.insert({});
        return out;
    }
    for (std::size_t mid = lo; mid <= hi; ++mid) {
        Runs left = runs_range(parts[part], here.child(static_cast<std::uint32_t>(part)), w, lo, mid);
        if (left.empty()) continue;
        Runs right = runs_concat(parts, here, part + 1, w, mid, hi);
        for (const auto& l : left)
            for (const auto& rr : right) {
                std::vector<Position> combo = l;
                combo.insert(combo.end(), rr.begin(), rr.end());
                out.insert(std::move(combo));
            }
    }
    return out;
}

Runs runs_star(const RegexTree& child, const Position& here, const Word& w, std::size_t lo,
               std::size_t hi) {
    Runs out;
    if (lo == hi) {
        out.insert({});
        return out;
    }
    for (std::size_t mid = lo + 1; mid <= hi; ++mid) {
        Runs first = runs_range(child, here, w, lo, mid);
        if (first.empty()) continue;
        Runs rest = runs_star(child, here, w, mid, hi);
        for (const auto& f : first)
            for (const auto& rr : rest) {
                std::vector<Position> combo = f;
                combo.insert(combo.end(), rr.begin(), rr.end());
                out.insert(std::move(combo));
            }
    }
    return out;
}

Runs runs_range(const RegexTree& r, const Position& here, const Word& w, std::size_t lo,
                std::size_t hi) {
    Runs out;
    switch (r.kind) {
        case RegexKind::Epsilon:
            if (lo == hi) out.insert({});
            return out;
        case RegexKind::Symbol:
            if (hi == lo + 1 && w[lo] == r.symbol) out.insert({here});
            return out;
        case RegexKind::Choice:
            for (std::uint32_t i = 0; i < r.children.size(); ++i) {
                Runs sub = runs_range(r.children[i], here.child(i), w, lo, hi);
                out.insert(sub.begin(), sub.end());
            }
            return out;
        case RegexKind::Concat:
            return runs_concat(r.children, here, 0, w, lo, hi);
        case RegexKind::Star:
            return runs_star(r.children[0], here.child(0), w, lo, hi);
    }
    return out;
}

} // namespace

bool word_matches(const RegexTree& r, const Word& word) {
    return match_range(r, word, 0, word.size());
}

std::set<std::vector<Position>> word_witnesses(const RegexTree& r, const Word& word) {
    return runs_range(r, Position::root(), word, 0, word.size());
}

std::set<Word> language_words(const RegexTree& r, std::size_t max_len) {
    // Collect the symbol alphabet, then test every word up to max_len.
    std::set<std::string> alphabet = symbols_of(r);
    std::set<Word> out;
    std::vector<std::string> syms(alphabet.begin(), alphabet.end());
    std::function<void(Word&)> go = [&](Word& w) {
        if (word_matches(r, w)) out.insert(w);
        if (w.size() == max_len) return;
        for (const auto& s : syms) {
            w.push_back(s);
            go(w);
            w.pop_back();
        }
    };
    Word w;
    go(w);
    return out;
}

bool derives_tree(const Grammar& g, const std::string& nt, const XmlTree& t) {
    if (!g.has_rule(nt)) return false;
    if (g.term(nt) != t.label) return false;
    return derives_hedge(g, g.reg(nt), t.children);
}

bool derives_hedge(const Grammar& g, const RegexTree& model, const std::vector<XmlTree>& hedge) {
    // Candidate generators per element, then every assignment is tried
    // against the structural matcher.
    std::vector<std::vector<std::string>> cands;
    for (const auto& el : hedge) {
        std::vector<std::string> c;
        for (const auto& [nt, rule] : g.rules())
            if (derives_tree(g, nt, el)) c.push_back(nt);
        if (c.empty()) return false;
        cands.push_back(std::move(c));
    }
    Word w(hedge.size());
    std::function<bool(std::size_t)> assign = [&](std::size_t k) -> bool {
        if (k == hedge.size()) return word_matches(model, w);
        for (const auto& c : cands[k]) {
            w[k] = c;
            if (assign(k + 1)) return true;
        }
        return false;
    };
    return assign(0);
}

bool in_language(const Grammar& g, const XmlTree& t) {
    for (const auto& s : g.starts())
        if (derives_tree(g, s, t)) return true;
    return false;
}

namespace {

std::vector<XmlTree> one_step_edits(const XmlTree& t, const std::vector<std::string>& labels) {
    std::vector<XmlTree> out;
    std::vector<Position> positions = all_positions(t);
    for (const auto& p : positions) {
        const XmlTree* n = node_at(t, p);
        // relabel
        for (const auto& l : labels) {
            if (l == n->label) continue;
            out.push_back(apply_doc_op(t, {DocEditOp::Kind::Relabel, p, l}));
        }
        // delete leaves (not the root)
        if (!p.is_root() && n->children.empty())
            out.push_back(apply_doc_op(t, {DocEditOp::Kind::DeleteLeaf, p, ""}));
        // insert a leaf at every slot under this node
        for (std::uint32_t i = 0; i <= n->children.size(); ++i)
            for (const auto& l : labels)
                out.push_back(apply_doc_op(t, {DocEditOp::Kind::InsertLeaf, p.child(i), l}));
    }
    return out;
}

} // namespace

std::map<XmlTree, int> edit_ball(const XmlTree& t, const std::vector<std::string>& labels,
                                 int threshold) {
    std::map<XmlTree, int> seen;
    seen[t] = 0;
    std::vector<XmlTree> frontier{t};
    for (int level = 1; level <= threshold; ++level) {
        std::vector<XmlTree> next;
        for (const auto& cur : frontier) {
            for (auto& e : one_step_edits(cur, labels)) {
                auto it = seen.find(e);
                if (it == seen.end()) {
                    seen.emplace(e, level);
                    next.push_back(std::move(e));
                }
            }
        }
        frontier = std::move(next);
    }
    return seen;
}

std::map<std::vector<XmlTree>, int> hedge_edit_ball(const std::vector<XmlTree>& hedge,
                                                    const std::vector<std::string>& labels,
                                                    int threshold) {
    // Wrap under a root whose label is outside the alphabet; ops on the root
    // never help, and relabels of it are not generated since the wrap label
    // is not in `labels`.
    XmlTree wrapped{"#hedge", hedge};
    std::map<XmlTree, int> ball = edit_ball(wrapped, labels, threshold);
    std::map<std::vector<XmlTree>, int> out;
    for (const auto& [tree, c] : ball) {
        if (tree.label != "#hedge") continue;
        auto it = out.find(tree.children);
        if (it == out.end() || it->second > c) out[tree.children] = c;
    }
    return out;
}

std::map<XmlTree, int> correct_tree_oracle(const XmlTree& t, const std::string& nt,
                                           const Grammar& g, int threshold) {
    std::vector<std::string> labels(g.terminals().begin(), g.terminals().end());
    std::map<XmlTree, int> out;
    for (const auto& [tree, c] : edit_ball(t, labels, threshold))
        if (derives_tree(g, nt, tree)) out.emplace(tree, c);
    return out;
}

std::map<std::vector<XmlTree>, int> correct_hedge_oracle(const std::vector<XmlTree>& hedge,
                                                         const RegexTree& model, const Grammar& g,
                                                         int threshold) {
    std::vector<std::string> labels(g.terminals().begin(), g.terminals().end());
    std::map<std::vector<XmlTree>, int> out;
    for (const auto& [h, c] : hedge_edit_ball(hedge, labels, threshold))
        if (derives_hedge(g, model, h)) out.emplace(h, c);
    return out;
}

std::set<XmlTree> language_trees(const Grammar& g, const std::string& nt, std::size_t max_size) {
    // Grow the set of derivable trees per non-terminal to a fixpoint.
    std::map<std::string, std::set<XmlTree>> known;
    bool changed = true;
    while (changed) {
        changed = false;
        for (const auto& [name, rule] : g.rules()) {
            // hedges over known trees, bounded by size
            std::function<std::vector<std::vector<XmlTree>>(const RegexTree&, std::size_t)> hedges =
                [&](const RegexTree& r, std::size_t budget) -> std::vector<std::vector<XmlTree>> {
                std::vector<std::vector<XmlTree>> acc;
                switch (r.kind) {
                    case RegexKind::Epsilon:
                        acc.push_back({});
                        return acc;
                    case RegexKind::Symbol: {
                        for (const auto& tr : known[r.symbol])
                            if (tree_size(tr) <= budget) acc.push_back({tr});
                        return acc;
                    }
                    case RegexKind::Choice: {
                        for (const auto& c : r.children)
                            for (auto& h : hedges(c, budget)) acc.push_back(std::move(h));
                        return acc;
                    }
                    case RegexKind::Concat: {
                        acc.push_back({});
                        for (const auto& c : r.children) {
                            std::vector<std::vector<XmlTree>> next;
                            for (const auto& prefix : acc) {
                                std::size_t used = 0;
                                for (const auto& x : prefix) used += tree_size(x);
                                for (auto& part : hedges(c, budget - used)) {
                                    auto combo = prefix;
                                    for (auto& x : part) combo.push_back(std::move(x));
                                    next.push_back(std::move(combo));
                                }
                            }
                            acc = std::move(next);
                            if (acc.empty()) return acc;
                        }
                        return acc;
                    }
                    case RegexKind::Star: {
                        acc.push_back({});
                        std::vector<std::vector<XmlTree>> frontier = acc;
                        while (!frontier.empty()) {
                            std::vector<std::vector<XmlTree>> next;
                            for (const auto& prefix : frontier) {
                                std::size_t used = 0;
                                for (const auto& x : prefix) used += tree_size(x);
                                if (used >= budget) continue;
                                for (auto& part : hedges(r.children[0], budget - used)) {
                                    if (part.empty()) continue;
                                    auto combo = prefix;
                                    for (auto& x : part) combo.push_back(std::move(x));
                                    next.push_back(std::move(combo));
                                }
                            }
                            for (const auto& h : next) acc.push_back(h);
                            frontier = std::move(next);
                        }
                        std::sort(acc.begin(), acc.end());
                        acc.erase(std::unique(acc.begin(), acc.end()), acc.end());
                        return acc;
                    }
                }
                return acc;
            };
            if (max_size < 1) continue;
            for (auto& h : hedges(rule.body, max_size - 1)) {
                XmlTree t{rule.terminal, std::move(h)};
                if (tree_size(t) <= max_size && known[name].insert(std::move(t)).second)
                    changed = true;
            }
        }
    }
    return known[nt];
}

} // namespace rtgmap::oracle

// ---------------------------------------------------------------------------
// Brute-force annotation and translation replay.

namespace rtgmap::oracle {

namespace {

void annotate_rec(const XmlTree& t, const Grammar& g, const std::string& nt, const Position& here,
                  FlatAnnotation& acc, std::vector<FlatAnnotation>& out,
                  const std::function<void()>& done) {
    // enumerate NT assignments for the children, then witnesses
    std::vector<std::vector<std::string>> cands;
    for (const auto& child : t.children) {
        std::vector<std::string> c;
        for (const auto& [name, rule] : g.rules())
            if (derives_tree(g, name, child)) c.push_back(name);
        if (c.empty()) return;
        cands.push_back(std::move(c));
    }
    std::vector<std::string> word(t.children.size());
    std::function<void(std::size_t)> assign = [&](std::size_t k) {
        if (k == word.size()) {
            for (const auto& runs : word_witnesses(g.reg(nt), word)) {
                // recurse into children with the chosen nts
                std::function<void(std::size_t)> down = [&](std::size_t i) {
                    if (i == t.children.size()) {
                        done();
                        return;
                    }
                    Position cp = here.child(static_cast<std::uint32_t>(i));
                    acc[cp] = {word[i], Position::root().child(0).concat(runs[i])};
                    annotate_rec(t.children[i], g, word[i], cp, acc, out, [&] { down(i + 1); });
                };
                down(0);
            }
            return;
        }
        for (const auto& c : cands[k]) {
            word[k] = c;
            assign(k + 1);
        }
    };
    assign(0);
}

} // namespace

std::vector<FlatAnnotation> annotate_oracle(const XmlTree& t, const Grammar& g) {
    std::vector<FlatAnnotation> out;
    FlatAnnotation acc;
    for (const auto& s : g.starts()) {
        if (!derives_tree(g, s, t)) continue;
        acc[Position::root()] = {s, Position{}};
        annotate_rec(t, g, s, Position::root(), acc, out, [&] { out.push_back(acc); });
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

namespace {

struct OracleBranch {
    XmlTree doc;
    int cost;
};

std::vector<std::string> label_universe(const Grammar& g) {
    return std::vector<std::string>(g.terminals().begin(), g.terminals().end());
}

// Children of `parent` whose annotation occurrence lies inside the subtree
// of the rule tree rooted at `at`.
std::vector<std::size_t> children_inside(const FlatAnnotation& ann, const XmlTree& doc,
                                         const Position& parent, const Position& at) {
    std::vector<std::size_t> out;
    const XmlTree* p = node_at(doc, parent);
    for (std::size_t i = 0; i < p->children.size(); ++i) {
        const auto& [nt, occ] = ann.at(parent.child(static_cast<std::uint32_t>(i)));
        if (at.is_prefix_of(occ)) out.push_back(i);
    }
    return out;
}

} // namespace

std::map<XmlTree, int> translate_oracle(const XmlTree& t, const Grammar& source,
                                        const std::vector<EditOp>& script, int threshold) {
    std::vector<Grammar> states;
    states.push_back(source);
    for (const auto& op : script) states.push_back(apply_edit(states.back(), op));

    std::map<XmlTree, int> branches;
    branches[t] = 0;

    for (std::size_t k = 0; k < script.size(); ++k) {
        const Grammar& before = states[k];
        const Grammar& after = states[k + 1];
        const EditOp& op = script[k];
        std::map<XmlTree, int> next;
        auto emit = [&](const XmlTree& doc, int c) {
            if (c > threshold) return;
            auto it = next.find(doc);
            if (it == next.end() || it->second > c) next[doc] = c;
        };

        for (const auto& [doc, base_cost] : branches) {
            if (std::holds_alternative<InsRule>(op) || std::holds_alternative<InsTreeRule>(op) ||
                std::holds_alternative<SetStartElm>(op)) {
                emit(doc, base_cost);
                continue;
            }
            for (const auto& ann : annotate_oracle(doc, before)) {
                if (const auto* x = std::get_if<RelElm>(&op)) {
                    // collect nodes renamed by this occurrence
                    std::vector<Position> hits;
                    for (const auto& [pos, entry] : ann) {
                        if (pos.is_root()) continue;
                        if (entry.first == x->from && entry.second == x->at &&
                            ann.at(pos.parent()).first == x->nt)
                            hits.push_back(pos);
                    }
                    std::reverse(hits.begin(), hits.end());  // deepest first
                    if (hits.empty()) {
                        emit(doc, base_cost);
                        continue;
                    }
                    // replace each hit subtree with a tree derivable from `to`
                    std::function<void(std::size_t, XmlTree, int)> fix =
                        [&](std::size_t i, XmlTree cur, int c) {
                            if (i == hits.size()) {
                                emit(cur, c);
                                return;
                            }
                            const XmlTree* sub = node_at(cur, hits[i]);
                            if (derives_tree(after, x->to, *sub)) {
                                fix(i + 1, cur, c);
                                return;
                            }
                            for (const auto& [fixed, fc] :
                                 correct_tree_oracle(*sub, x->to, after, threshold - c)) {
                                XmlTree updated = cur;
                                replace_at(updated, hits[i], fixed);
                                fix(i + 1, std::move(updated), c + fc);
                            }
                        };
                    fix(0, doc, base_cost);
                    continue;
                }
                if (const auto* x = std::get_if<DelTree>(&op)) {
                    // parents annotated with the rule's non-terminal
                    std::vector<Position> parents;
                    for (const auto& [pos, entry] : ann)
                        if (entry.first == x->nt) parents.push_back(pos);
                    std::sort(parents.begin(), parents.end());
                    std::reverse(parents.begin(), parents.end());

                    const RuleTree rt{before.term(x->nt), before.reg(x->nt)};
                    Position u = x->at.parent();
                    const RegexTree* pnode = rule_node_at(rt, u);
                    bool concat_parent = pnode && pnode->kind == RegexKind::Concat;

                    std::function<void(std::size_t, XmlTree, int)> fix =
                        [&](std::size_t i, XmlTree cur, int c) {
                            if (i == parents.size()) {
                                emit(cur, c);
                                return;
                            }
                            const Position& pp = parents[i];
                            auto inside = children_inside(ann, doc, pp, x->at);
                            const XmlTree* parent_now = node_at(cur, pp);
                            std::vector<XmlTree> hedge = parent_now->children;
                            int forced = 0;
                            if (concat_parent) {
                                for (auto it = inside.rbegin(); it != inside.rend(); ++it) {
                                    forced += static_cast<int>(tree_size(hedge[*it]));
                                    hedge.erase(hedge.begin() + static_cast<long>(*it));
                                }
                            }
                            if (c + forced > threshold) return;
                            if (derives_hedge(after, after.reg(x->nt), hedge)) {
                                XmlTree updated = cur;
                                node_at(updated, pp)->children = hedge;
                                fix(i + 1, std::move(updated), c + forced);
                                return;
                            }
                            for (const auto& [fixed, fc] : correct_hedge_oracle(
                                     hedge, after.reg(x->nt), after, threshold - c - forced)) {
                                XmlTree updated = cur;
                                node_at(updated, pp)->children = fixed;
                                fix(i + 1, std::move(updated), c + forced + fc);
                            }
                        };
                    fix(0, doc, base_cost);
                    continue;
                }
                // remaining structural kinds: re-derive each annotated parent
                const std::string* rule_nt = nullptr;
                if (const auto* x = std::get_if<DelOpr>(&op)) rule_nt = &x->nt;
                if (const auto* x = std::get_if<InsOpr>(&op)) rule_nt = &x->nt;
                if (const auto* x = std::get_if<InsElm>(&op)) rule_nt = &x->nt;
                if (const auto* x = std::get_if<InsTree>(&op)) rule_nt = &x->nt;
                if (const auto* x = std::get_if<DelElm>(&op)) rule_nt = &x->nt;
                if (!rule_nt) throw Error("translate_oracle: unsupported op " + kind_name(op));

                std::vector<Position> parents;
                for (const auto& [pos, entry] : ann)
                    if (entry.first == *rule_nt) parents.push_back(pos);
                std::sort(parents.begin(), parents.end());
                std::reverse(parents.begin(), parents.end());

                std::function<void(std::size_t, XmlTree, int)> fix =
                    [&](std::size_t i, XmlTree cur, int c) {
                        if (i == parents.size()) {
                            emit(cur, c);
                            return;
                        }
                        const Position& pp = parents[i];
                        const XmlTree* parent_now = node_at(cur, pp);
                        if (derives_hedge(after, after.reg(*rule_nt), parent_now->children)) {
                            fix(i + 1, cur, c);
                            return;
                        }
                        for (const auto& [fixed, fc] :
                             correct_hedge_oracle(parent_now->children, after.reg(*rule_nt), after,
                                                  threshold - c)) {
                            XmlTree updated = cur;
                            node_at(updated, pp)->children = fixed;
                            fix(i + 1, std::move(updated), c + fc);
                        }
                    };
                fix(0, doc, base_cost);
            }
        }
        branches = std::move(next);
        if (branches.empty()) break;
    }

    std::map<XmlTree, int> out;
    for (const auto& [doc, c] : branches)
        if (in_language(states.back(), doc)) out.emplace(doc, c);
    return out;
}

} // namespace rtgmap::oracle
