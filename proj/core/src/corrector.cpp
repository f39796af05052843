#include "rtgmap/corrector.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <tuple>

#include "rtgmap/errors.hpp"
#include "rtgmap/glushkov.hpp"

namespace rtgmap {

std::string to_string(const DocEditOp& op) {
    switch (op.kind) {
        case DocEditOp::Kind::Relabel:
            return "relabel(" + to_string(op.pos) + "," + op.label + ")";
        case DocEditOp::Kind::InsertLeaf:
            return "insert(" + to_string(op.pos) + "," + op.label + ")";
        case DocEditOp::Kind::DeleteLeaf:
            return "delete(" + to_string(op.pos) + ")";
    }
    return "?";
}

XmlTree apply_doc_op(const XmlTree& t, const DocEditOp& op) {
    XmlTree out = t;
    switch (op.kind) {
        case DocEditOp::Kind::Relabel: {
            XmlTree* n = node_at(out, op.pos);
            if (!n) throw Error("relabel: no node at " + to_string(op.pos));
            n->label = op.label;
            return out;
        }
        case DocEditOp::Kind::InsertLeaf: {
            if (op.pos.is_root()) throw Error("insert: cannot insert at the root");
            XmlTree* parent = node_at(out, op.pos.parent());
            if (!parent || op.pos.last() > parent->children.size())
                throw Error("insert: position " + to_string(op.pos) + " out of range");
            parent->children.insert(parent->children.begin() + op.pos.last(),
                                    XmlTree::leaf(op.label));
            return out;
        }
        case DocEditOp::Kind::DeleteLeaf: {
            if (op.pos.is_root()) throw Error("delete: cannot delete the root");
            XmlTree* parent = node_at(out, op.pos.parent());
            if (!parent || op.pos.last() >= parent->children.size())
                throw Error("delete: no node at " + to_string(op.pos));
            if (!parent->children[op.pos.last()].children.empty())
                throw Error("delete: node at " + to_string(op.pos) + " is not a leaf");
            parent->children.erase(parent->children.begin() + op.pos.last());
            return out;
        }
    }
    throw Error("unhandled doc op");
}

XmlTree apply_doc_ops(const XmlTree& t, const std::vector<DocEditOp>& ops) {
    XmlTree out = t;
    for (const auto& op : ops) out = apply_doc_op(out, op);
    return out;
}

std::vector<XmlTree> apply_doc_ops_hedge(const std::vector<XmlTree>& hedge,
                                         const std::vector<DocEditOp>& ops) {
    // Hedge op positions already start at the element index, so they apply
    // directly under a synthetic root.
    XmlTree dummy{"#hedge", hedge};
    for (const auto& op : ops) dummy = apply_doc_op(dummy, op);
    return dummy.children;
}

// ---------------------------------------------------------------------------
// Alignment: distance and op extraction. Leaf-only insertion and deletion
// mean unmatched material always forms whole subtrees, so an optimal script
// corresponds to an order-preserving matching of surviving nodes.

namespace {

struct AlignOut {
    int cost = 0;
    std::vector<Position> deleted;                          // subtree roots, source coords
    std::vector<std::pair<Position, Position>> relabeled;   // (source, target) label mismatches
    std::vector<Position> inserted;                         // subtree roots, target coords
};

void align_hedge(const std::vector<XmlTree>& as, const std::vector<XmlTree>& bs,
                 const Position& pa, const Position& pb, AlignOut& out);

void align_tree(const XmlTree& a, const XmlTree& b, const Position& pa, const Position& pb,
                AlignOut& out) {
    if (a.label != b.label) {
        out.cost += 1;
        out.relabeled.emplace_back(pa, pb);
    }
    align_hedge(a.children, b.children, pa, pb, out);
}

int dist_tree(const XmlTree& a, const XmlTree& b);

int dist_hedge_dp(const std::vector<XmlTree>& as, const std::vector<XmlTree>& bs,
                  std::vector<std::vector<int>>* table) {
    std::size_t n = as.size(), m = bs.size();
    std::vector<std::vector<int>> d(n + 1, std::vector<int>(m + 1, 0));
    for (std::size_t i = 1; i <= n; ++i)
        d[i][0] = d[i - 1][0] + static_cast<int>(tree_size(as[i - 1]));
    for (std::size_t j = 1; j <= m; ++j)
        d[0][j] = d[0][j - 1] + static_cast<int>(tree_size(bs[j - 1]));
    for (std::size_t i = 1; i <= n; ++i) {
        for (std::size_t j = 1; j <= m; ++j) {
            int del = d[i - 1][j] + static_cast<int>(tree_size(as[i - 1]));
            int ins = d[i][j - 1] + static_cast<int>(tree_size(bs[j - 1]));
            int sub = d[i - 1][j - 1] + dist_tree(as[i - 1], bs[j - 1]);
            d[i][j] = std::min({del, ins, sub});
        }
    }
    int result = d[n][m];
    if (table) *table = std::move(d);
    return result;
}

int dist_tree(const XmlTree& a, const XmlTree& b) {
    int mismatch = a.label != b.label ? 1 : 0;
    return mismatch + dist_hedge_dp(a.children, b.children, nullptr);
}

void align_hedge(const std::vector<XmlTree>& as, const std::vector<XmlTree>& bs,
                 const Position& pa, const Position& pb, AlignOut& out) {
    std::vector<std::vector<int>> d;
    out.cost += dist_hedge_dp(as, bs, &d);
    // Traceback, preferring matches, then deletions, then insertions.
    std::size_t i = as.size(), j = bs.size();
    std::vector<std::tuple<char, std::size_t, std::size_t>> steps;
    while (i > 0 || j > 0) {
        if (i > 0 && j > 0 &&
            d[i][j] == d[i - 1][j - 1] + dist_tree(as[i - 1], bs[j - 1])) {
            steps.emplace_back('m', i - 1, j - 1);
            --i; --j;
        } else if (i > 0 && d[i][j] == d[i - 1][j] + static_cast<int>(tree_size(as[i - 1]))) {
            steps.emplace_back('d', i - 1, 0);
            --i;
        } else {
            steps.emplace_back('i', 0, j - 1);
            --j;
        }
    }
    std::reverse(steps.begin(), steps.end());
    for (const auto& [what, ai, bj] : steps) {
        if (what == 'm') {
            AlignOut sub;
            align_tree(as[ai], bs[bj], pa.child(static_cast<std::uint32_t>(ai)),
                       pb.child(static_cast<std::uint32_t>(bj)), sub);
            // cost already counted by the hedge DP; merge structure only
            out.deleted.insert(out.deleted.end(), sub.deleted.begin(), sub.deleted.end());
            out.relabeled.insert(out.relabeled.end(), sub.relabeled.begin(), sub.relabeled.end());
            out.inserted.insert(out.inserted.end(), sub.inserted.begin(), sub.inserted.end());
        } else if (what == 'd') {
            out.deleted.push_back(pa.child(static_cast<std::uint32_t>(ai)));
        } else {
            out.inserted.push_back(pb.child(static_cast<std::uint32_t>(bj)));
        }
    }
}

// Every node position of the subtree rooted at `root` within `host`.
void expand_subtree_positions(const XmlTree& host, const Position& root,
                              std::vector<Position>& out) {
    const XmlTree* n = node_at(host, root);
    out.push_back(root);
    for (std::uint32_t i = 0; i < n->children.size(); ++i)
        expand_subtree_positions(host, root.child(i), out);
}

// Source position -> coordinates after all deletions (whole subtrees gone).
Position remap_after_deletes(const Position& p, const std::vector<Position>& deleted_roots) {
    std::vector<std::uint32_t> steps;
    for (std::size_t depth = 0; depth < p.depth(); ++depth) {
        std::uint32_t idx = p[depth];
        std::uint32_t shift = 0;
        for (const auto& d : deleted_roots) {
            if (d.depth() != depth + 1) continue;
            bool same_parent = true;
            for (std::size_t k = 0; k < depth; ++k)
                if (d[k] != p[k]) { same_parent = false; break; }
            if (same_parent && d[depth] < idx) ++shift;
        }
        steps.push_back(idx - shift);
    }
    return Position(steps);
}

std::vector<DocEditOp> synthesize_ops(const XmlTree& a, const XmlTree& b, const AlignOut& align,
                                      bool hedge_mode, const std::vector<XmlTree>& ah,
                                      const std::vector<XmlTree>& bh) {
    const XmlTree src_host = hedge_mode ? XmlTree{"", ah} : a;
    const XmlTree dst_host = hedge_mode ? XmlTree{"", bh} : b;
    std::vector<DocEditOp> ops;

    // Deletions: every node of each deleted subtree, descending positions so
    // children and right siblings go first.
    std::vector<Position> dels;
    for (const auto& root : align.deleted) expand_subtree_positions(src_host, root, dels);
    std::sort(dels.begin(), dels.end());
    for (auto it = dels.rbegin(); it != dels.rend(); ++it)
        ops.push_back({DocEditOp::Kind::DeleteLeaf, *it, ""});

    // Relabels, in post-deletion coordinates.
    for (const auto& [src, dst] : align.relabeled) {
        const XmlTree* target = node_at(dst_host, dst);
        ops.push_back({DocEditOp::Kind::Relabel, remap_after_deletes(src, align.deleted),
                       target->label});
    }

    // Insertions: target coordinates ascending, parents before children.
    std::vector<Position> inss;
    for (const auto& root : align.inserted) expand_subtree_positions(dst_host, root, inss);
    std::sort(inss.begin(), inss.end());
    for (const auto& p : inss) {
        const XmlTree* n = node_at(dst_host, p);
        ops.push_back({DocEditOp::Kind::InsertLeaf, p, n->label});
    }
    return ops;
}

} // namespace

int doc_distance(const XmlTree& a, const XmlTree& b) {
    return dist_tree(a, b);
}

int hedge_distance(const std::vector<XmlTree>& a, const std::vector<XmlTree>& b) {
    return dist_hedge_dp(a, b, nullptr);
}

std::vector<DocEditOp> doc_edit_ops(const XmlTree& a, const XmlTree& b) {
    AlignOut align;
    align_tree(a, b, Position::root(), Position::root(), align);
    return synthesize_ops(a, b, align, false, {}, {});
}

std::vector<DocEditOp> hedge_edit_ops(const std::vector<XmlTree>& a,
                                      const std::vector<XmlTree>& b) {
    AlignOut align;
    align_hedge(a, b, Position::root(), Position::root(), align);
    return synthesize_ops(XmlTree{}, XmlTree{}, align, true, a, b);
}

// ---------------------------------------------------------------------------
// Complete threshold-bounded correction: Dijkstra-style relaxation over
// (input prefix consumed, automaton state) cells whose values map candidate
// output hedges to their cheapest construction cost.

namespace {

using Hedge = std::vector<XmlTree>;

struct CorrectorContext {
    const Grammar& g;
    std::map<std::string, Nfa> nfas;
    std::map<std::pair<std::string, int>, std::vector<XmlTree>> generated;  // (nt, max size)
    std::map<std::tuple<const XmlTree*, std::string, int>, std::map<Hedge, int>> tree_memo;

    const Nfa& nfa_of(const std::string& nt) {
        auto it = nfas.find(nt);
        if (it == nfas.end()) it = nfas.emplace(nt, build_nfa(g.reg(nt))).first;
        return it->second;
    }

    const std::vector<XmlTree>& trees_of(const std::string& nt, int max_size) {
        auto key = std::make_pair(nt, max_size);
        auto it = generated.find(key);
        if (it == generated.end())
            it = generated.emplace(key, enumerate_trees(g, nt, static_cast<std::size_t>(max_size)))
                     .first;
        return it->second;
    }

    // All corrections of tree `t` into the language of `nt`, as a map from
    // result tree (a one-element hedge) to cost.
    std::map<Hedge, int> correct_tree_set(const XmlTree& t, const std::string& nt, int budget) {
        if (budget < 0) return {};
        auto key = std::make_tuple(&t, nt, budget);
        auto memo = tree_memo.find(key);
        if (memo != tree_memo.end()) return memo->second;

        std::map<Hedge, int> out;
        if (g.has_rule(nt)) {
            int mismatch = g.term(nt) == t.label ? 0 : 1;
            if (mismatch <= budget) {
                std::map<Hedge, int> inner =
                    correct_hedge_set(t.children, nfa_of(nt), budget - mismatch);
                for (auto& [hedge, c] : inner) {
                    XmlTree result{g.term(nt), hedge};
                    out[{std::move(result)}] = c + mismatch;
                }
            }
        }
        tree_memo[key] = out;
        return out;
    }

    std::map<Hedge, int> correct_hedge_set(const std::vector<XmlTree>& hedge, const Nfa& nfa,
                                           int budget) {
        if (budget < 0) return {};
        std::size_t n = hedge.size();
        std::size_t states = nfa.occurrences.size() + 1;  // +1 for the initial state

        auto cell_index = [&](std::size_t i, int q) {
            return i * states + static_cast<std::size_t>(q + 1);
        };
        std::vector<std::map<Hedge, int>> cells((n + 1) * states);

        struct Item {
            std::size_t i;
            int q;
            Hedge h;
            int c;
        };
        std::deque<Item> work;
        auto relax = [&](std::size_t i, int q, Hedge h, int c) {
            if (c > budget) return;
            auto& cell = cells[cell_index(i, q)];
            auto it = cell.find(h);
            if (it != cell.end() && it->second <= c) return;
            cell[h] = c;
            work.push_back({i, q, std::move(h), c});
        };
        relax(0, -1, {}, 0);

        while (!work.empty()) {
            Item item = std::move(work.front());
            work.pop_front();
            auto& cell = cells[cell_index(item.i, item.q)];
            auto cur = cell.find(item.h);
            if (cur == cell.end() || cur->second != item.c) continue;  // stale

            const std::vector<int>& nexts =
                item.q < 0 ? nfa.first : nfa.follow[static_cast<std::size_t>(item.q)];

            // Delete the next input element wholesale.
            if (item.i < n) {
                int c = item.c + static_cast<int>(tree_size(hedge[item.i]));
                relax(item.i + 1, item.q, item.h, c);
            }
            for (int j : nexts) {
                const std::string& sym = nfa.occurrences[static_cast<std::size_t>(j)].symbol;
                // Match the next input element against the edge's symbol.
                if (item.i < n) {
                    std::map<Hedge, int> fixes =
                        correct_tree_set(hedge[item.i], sym, budget - item.c);
                    for (const auto& [sub, sc] : fixes) {
                        Hedge h = item.h;
                        h.push_back(sub.front());
                        relax(item.i + 1, j, std::move(h), item.c + sc);
                    }
                }
                // Insert fresh material for the edge's symbol.
                for (const auto& fresh : trees_of(sym, budget - item.c)) {
                    Hedge h = item.h;
                    h.push_back(fresh);
                    relax(item.i, j, std::move(h), item.c + static_cast<int>(tree_size(fresh)));
                }
            }
        }

        std::map<Hedge, int> out;
        for (int q = -1; q < static_cast<int>(nfa.occurrences.size()); ++q) {
            bool accepting = q < 0 ? nfa.nullable : nfa.last[static_cast<std::size_t>(q)];
            if (!accepting) continue;
            for (const auto& [h, c] : cells[cell_index(n, q)]) {
                auto it = out.find(h);
                if (it == out.end() || it->second > c) out[h] = c;
            }
        }
        return out;
    }
};

} // namespace

TreeCorrections correct_tree(const XmlTree& t, const std::string& nt, const Grammar& g,
                             int threshold, const CorrectorOptions& opts) {
    CorrectorContext ctx{g, {}, {}, {}};
    std::map<Hedge, int> raw = ctx.correct_tree_set(t, nt, threshold);

    TreeCorrections out;
    for (const auto& [hedge, c] : raw) {
        TreeCorrection tc;
        tc.result = hedge.front();
        tc.ops = doc_edit_ops(t, tc.result);
        tc.cost = doc_distance(t, tc.result);
        if (tc.cost != c)
            throw Error("internal: correction cost " + std::to_string(c) +
                        " does not match distance " + std::to_string(tc.cost));
        out.items.push_back(std::move(tc));
    }
    std::sort(out.items.begin(), out.items.end(), [](const TreeCorrection& a, const TreeCorrection& b) {
        if (a.cost != b.cost) return a.cost < b.cost;
        return a.result < b.result;
    });
    if (opts.max_results && out.items.size() > opts.max_results) {
        out.items.resize(opts.max_results);
        out.truncated = true;
    }
    return out;
}

HedgeCorrections correct_hedge(const std::vector<XmlTree>& hedge, const RegexTree& model,
                               const Grammar& g, int threshold, const CorrectorOptions& opts) {
    CorrectorContext ctx{g, {}, {}, {}};
    Nfa nfa = build_nfa(model);
    std::map<Hedge, int> raw = ctx.correct_hedge_set(hedge, nfa, threshold);

    HedgeCorrections out;
    for (const auto& [h, c] : raw) {
        HedgeCorrection hc;
        hc.result = h;
        hc.ops = hedge_edit_ops(hedge, h);
        hc.cost = hedge_distance(hedge, h);
        if (hc.cost != c)
            throw Error("internal: hedge correction cost " + std::to_string(c) +
                        " does not match distance " + std::to_string(hc.cost));
        out.items.push_back(std::move(hc));
    }
    std::sort(out.items.begin(), out.items.end(),
              [](const HedgeCorrection& a, const HedgeCorrection& b) {
                  if (a.cost != b.cost) return a.cost < b.cost;
                  return a.result < b.result;
              });
    if (opts.max_results && out.items.size() > opts.max_results) {
        out.items.resize(opts.max_results);
        out.truncated = true;
    }
    return out;
}

} // namespace rtgmap
