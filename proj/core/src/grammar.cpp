#include "rtgmap/grammar.hpp"

#include <algorithm>
#include <limits>

#include "rtgmap/errors.hpp"

namespace rtgmap {

namespace {

constexpr std::size_t kInf = std::numeric_limits<std::size_t>::max();

std::size_t sat_add(std::size_t a, std::size_t b) {
    if (a == kInf || b == kInf) return kInf;
    return a + b;
}

} // namespace

Grammar::Grammar(std::map<std::string, Rule> rules, std::set<std::string> starts)
    : rules_(std::move(rules)), starts_(std::move(starts)) {
    std::set<std::string> n;
    for (const auto& [nt, rule] : rules_) {
        n.insert(nt);
        WellFormedReport wf = is_well_formed(RuleTree{rule.terminal, rule.body});
        if (!wf.ok)
            throw Error("rule for " + nt + " is not well formed: " + wf.detail +
                        " at " + to_string(wf.where));
        for (const auto& s : symbols_of(rule.body)) n.insert(s);
    }
    for (const auto& s : starts_)
        if (!n.count(s)) throw Error("start symbol " + s + " does not occur in the grammar");
}

std::set<std::string> Grammar::non_terminals() const {
    std::set<std::string> n;
    for (const auto& [nt, rule] : rules_) {
        n.insert(nt);
        for (const auto& s : symbols_of(rule.body)) n.insert(s);
    }
    return n;
}

std::set<std::string> Grammar::terminals() const {
    std::set<std::string> t;
    for (const auto& [nt, rule] : rules_) t.insert(rule.terminal);
    return t;
}

const Rule& Grammar::rule(const std::string& nt) const {
    auto it = rules_.find(nt);
    if (it == rules_.end()) throw Error("no rule for non-terminal " + nt);
    return it->second;
}

RuleTree Grammar::rule_tree(const std::string& nt) const {
    const Rule& r = rule(nt);
    return RuleTree{r.terminal, r.body};
}

Grammar normalize(const std::vector<RawRule>& rules, const std::set<std::string>& starts) {
    std::map<std::string, Rule> merged;
    std::vector<std::string> order;  // first-seen order of left-hand sides
    std::map<std::string, std::vector<RegexTree>> bodies;
    std::map<std::string, std::string> terms;
    for (const auto& r : rules) {
        auto it = terms.find(r.nt);
        if (it == terms.end()) {
            terms[r.nt] = r.terminal;
            order.push_back(r.nt);
        } else if (it->second != r.terminal) {
            throw ConflictingTerminal(r.nt, it->second, r.terminal);
        }
        bodies[r.nt].push_back(r.body);
    }
    for (const auto& nt : order) {
        auto& bs = bodies[nt];
        if (bs.size() == 1) {
            merged.emplace(nt, Rule{terms[nt], std::move(bs[0])});
        } else {
            merged.emplace(nt, Rule{terms[nt], RegexTree::choice(std::move(bs))});
        }
    }
    return Grammar(std::move(merged), starts);
}

namespace {

bool can_derive(const RegexTree& t, const std::set<std::string>& productive) {
    switch (t.kind) {
        case RegexKind::Epsilon:
        case RegexKind::Star:
            return true;
        case RegexKind::Symbol:
            return productive.count(t.symbol) != 0;
        case RegexKind::Concat:
            for (const auto& c : t.children)
                if (!can_derive(c, productive)) return false;
            return true;
        case RegexKind::Choice:
            for (const auto& c : t.children)
                if (can_derive(c, productive)) return true;
            return false;
    }
    return false;
}

std::set<std::string> productive_set(const Grammar& g) {
    std::set<std::string> productive;
    bool changed = true;
    while (changed) {
        changed = false;
        for (const auto& [nt, rule] : g.rules()) {
            if (productive.count(nt)) continue;
            if (can_derive(rule.body, productive)) {
                productive.insert(nt);
                changed = true;
            }
        }
    }
    return productive;
}

// Removes dead symbols; nullopt means the language became empty.
std::optional<RegexTree> eliminate_dead(const RegexTree& t, const std::set<std::string>& alive) {
    switch (t.kind) {
        case RegexKind::Epsilon:
            return t;
        case RegexKind::Symbol:
            if (alive.count(t.symbol)) return t;
            return std::nullopt;
        case RegexKind::Star: {
            auto inner = eliminate_dead(t.children[0], alive);
            if (!inner) return RegexTree::epsilon();  // zero iterations remain
            return RegexTree::star(std::move(*inner));
        }
        case RegexKind::Concat: {
            std::vector<RegexTree> cs;
            for (const auto& c : t.children) {
                auto e = eliminate_dead(c, alive);
                if (!e) return std::nullopt;
                cs.push_back(std::move(*e));
            }
            return RegexTree::concat(std::move(cs));
        }
        case RegexKind::Choice: {
            std::vector<RegexTree> cs;
            for (const auto& c : t.children) {
                auto e = eliminate_dead(c, alive);
                if (e) cs.push_back(std::move(*e));
            }
            if (cs.empty()) return std::nullopt;
            return RegexTree::choice(std::move(cs));
        }
    }
    return std::nullopt;
}

} // namespace

Grammar reduce(const Grammar& g) {
    std::set<std::string> productive = productive_set(g);

    // Reachability over dead-pruned bodies, starting from productive starts.
    std::set<std::string> reachable;
    std::vector<std::string> queue;
    for (const auto& s : g.starts())
        if (productive.count(s)) {
            reachable.insert(s);
            queue.push_back(s);
        }
    while (!queue.empty()) {
        std::string nt = queue.back();
        queue.pop_back();
        if (!g.has_rule(nt)) continue;
        auto pruned = eliminate_dead(g.reg(nt), productive);
        if (!pruned) continue;
        for (const auto& s : symbols_of(*pruned)) {
            if (reachable.count(s)) continue;
            reachable.insert(s);
            queue.push_back(s);
        }
    }

    std::map<std::string, Rule> kept;
    for (const auto& [nt, rule] : g.rules()) {
        if (!productive.count(nt) || !reachable.count(nt)) continue;
        auto pruned = eliminate_dead(rule.body, productive);
        kept.emplace(nt, Rule{rule.terminal, std::move(*pruned)});
    }
    std::set<std::string> starts;
    for (const auto& s : g.starts())
        if (kept.count(s)) starts.insert(s);
    if (starts.empty()) throw EmptyLanguage();
    return Grammar(std::move(kept), std::move(starts));
}

std::optional<std::string> reduced_violation(const Grammar& g) {
    std::set<std::string> n = g.non_terminals();
    if (n.empty()) return std::nullopt;  // empty grammar, vacuously fine
    for (const auto& nt : n)
        if (!g.has_rule(nt)) return "non-terminal " + nt + " has no rule";
    std::set<std::string> productive = productive_set(g);
    for (const auto& nt : n)
        if (!productive.count(nt)) return "non-terminal " + nt + " is unproductive";
    std::set<std::string> reachable;
    std::vector<std::string> queue(g.starts().begin(), g.starts().end());
    reachable.insert(g.starts().begin(), g.starts().end());
    while (!queue.empty()) {
        std::string nt = queue.back();
        queue.pop_back();
        if (!g.has_rule(nt)) continue;
        for (const auto& s : symbols_of(g.reg(nt)))
            if (reachable.insert(s).second) queue.push_back(s);
    }
    for (const auto& nt : n)
        if (!reachable.count(nt)) return "non-terminal " + nt + " is unreachable";
    return std::nullopt;
}

bool is_reduced(const Grammar& g) {
    return !reduced_violation(g).has_value();
}

std::map<std::string, std::set<std::string>> competing_pairs(const Grammar& g) {
    std::map<std::string, std::set<std::string>> by_terminal;
    for (const auto& [nt, rule] : g.rules()) by_terminal[rule.terminal].insert(nt);
    std::map<std::string, std::set<std::string>> out;
    for (auto& [term, nts] : by_terminal)
        if (nts.size() >= 2) out.emplace(term, std::move(nts));
    return out;
}

bool is_ltg(const Grammar& g) {
    return competing_pairs(g).empty();
}

namespace {

// Structural equality where any marked symbol on the incoming side poisons
// the comparison (its occurrences will be renamed to a fresh name).
bool equal_modulo_marks(const RegexTree& incoming, const RegexTree& present,
                        const std::set<std::string>& marked) {
    if (incoming.kind != present.kind) return false;
    if (incoming.kind == RegexKind::Symbol) {
        if (marked.count(incoming.symbol)) return false;
        return incoming.symbol == present.symbol;
    }
    if (incoming.children.size() != present.children.size()) return false;
    for (std::size_t i = 0; i < incoming.children.size(); ++i)
        if (!equal_modulo_marks(incoming.children[i], present.children[i], marked)) return false;
    return true;
}

RegexTree rename_symbols(const RegexTree& t, const std::map<std::string, std::string>& ren) {
    RegexTree out = t;
    if (out.kind == RegexKind::Symbol) {
        auto it = ren.find(out.symbol);
        if (it != ren.end()) out.symbol = it->second;
    }
    for (auto& c : out.children) c = rename_symbols(c, ren);
    return out;
}

} // namespace

Grammar union_grammars(const std::vector<Grammar>& gs) {
    if (gs.empty()) throw Error("union of zero grammars");
    std::map<std::string, Rule> acc = gs[0].rules();
    std::set<std::string> starts = gs[0].starts();

    for (std::size_t gi = 1; gi < gs.size(); ++gi) {
        const Grammar& g = gs[gi];

        std::set<std::string> colliding;
        for (const auto& [nt, rule] : g.rules())
            if (acc.count(nt)) colliding.insert(nt);

        // Least set of renames: a colliding name is kept only if its rule is
        // identical once every renamed symbol is treated as fresh.
        std::set<std::string> marked;
        bool changed = true;
        while (changed) {
            changed = false;
            for (const auto& nt : colliding) {
                if (marked.count(nt)) continue;
                const Rule& mine = g.rules().at(nt);
                const Rule& theirs = acc.at(nt);
                if (mine.terminal != theirs.terminal ||
                    !equal_modulo_marks(mine.body, theirs.body, marked)) {
                    marked.insert(nt);
                    changed = true;
                }
            }
        }

        std::map<std::string, std::string> ren;
        std::set<std::string> taken;
        for (const auto& [nt, rule] : acc) taken.insert(nt);
        for (const auto& s : g.non_terminals()) taken.insert(s);
        for (const auto& nt : marked) {
            for (unsigned k = 2;; ++k) {
                std::string candidate = nt + "_" + std::to_string(k);
                if (!taken.count(candidate)) {
                    ren[nt] = candidate;
                    taken.insert(candidate);
                    break;
                }
            }
        }

        for (const auto& [nt, rule] : g.rules()) {
            std::string name = nt;
            auto it = ren.find(nt);
            if (it != ren.end()) name = it->second;
            Rule renamed{rule.terminal, rename_symbols(rule.body, ren)};
            auto [pos, inserted] = acc.emplace(name, renamed);
            if (!inserted && !(pos->second == renamed))
                throw Error("internal: union rename left a conflict on " + name);
        }
        for (const auto& s : g.starts()) {
            auto it = ren.find(s);
            starts.insert(it == ren.end() ? s : it->second);
        }
    }
    return Grammar(std::move(acc), std::move(starts));
}

std::map<std::string, std::size_t> min_tree_sizes(const Grammar& g) {
    std::map<std::string, std::size_t> sizes;
    for (const auto& [nt, rule] : g.rules()) sizes[nt] = kInf;

    auto weight = [&](const RegexTree& t, auto&& self) -> std::size_t {
        switch (t.kind) {
            case RegexKind::Epsilon:
            case RegexKind::Star:
                return 0;
            case RegexKind::Symbol: {
                auto it = sizes.find(t.symbol);
                return it == sizes.end() ? kInf : it->second;
            }
            case RegexKind::Concat: {
                std::size_t sum = 0;
                for (const auto& c : t.children) sum = sat_add(sum, self(c, self));
                return sum;
            }
            case RegexKind::Choice: {
                std::size_t best = kInf;
                for (const auto& c : t.children) best = std::min(best, self(c, self));
                return best;
            }
        }
        return kInf;
    };

    bool changed = true;
    while (changed) {
        changed = false;
        for (const auto& [nt, rule] : g.rules()) {
            std::size_t w = weight(rule.body, weight);
            std::size_t candidate = w == kInf ? kInf : w + 1;
            if (candidate < sizes[nt]) {
                sizes[nt] = candidate;
                changed = true;
            }
        }
    }
    return sizes;
}

namespace {

struct MinTreeBuilder {
    const Grammar& g;
    const std::map<std::string, std::size_t>& sizes;
    std::map<std::string, XmlTree> memo;

    // (total size, trees); comparison key for ties is the concatenated
    // preorder label sequence, which is well defined because tied options
    // always have equal total size.
    struct Hedge {
        std::size_t weight = 0;
        std::vector<XmlTree> trees;
    };

    std::vector<std::string> hedge_labels(const Hedge& h) {
        std::vector<std::string> out;
        for (const auto& t : h.trees)
            for (auto& l : preorder_labels(t)) out.push_back(std::move(l));
        return out;
    }

    Hedge best_hedge(const RegexTree& t) {
        switch (t.kind) {
            case RegexKind::Epsilon:
            case RegexKind::Star:
                return {};
            case RegexKind::Symbol: {
                auto it = sizes.find(t.symbol);
                if (it == sizes.end() || it->second == kInf)
                    throw Unproductive(t.symbol);
                Hedge h;
                h.weight = it->second;
                h.trees.push_back(build(t.symbol));
                return h;
            }
            case RegexKind::Concat: {
                Hedge h;
                for (const auto& c : t.children) {
                    Hedge part = best_hedge(c);
                    h.weight = sat_add(h.weight, part.weight);
                    for (auto& x : part.trees) h.trees.push_back(std::move(x));
                }
                return h;
            }
            case RegexKind::Choice: {
                bool have = false;
                Hedge best;
                std::vector<std::string> best_labels;
                for (const auto& c : t.children) {
                    std::size_t w = weight_only(c);
                    if (w == kInf) continue;
                    if (have && w > best.weight) continue;
                    Hedge candidate = best_hedge(c);
                    std::vector<std::string> labels = hedge_labels(candidate);
                    if (!have || candidate.weight < best.weight ||
                        (candidate.weight == best.weight && labels < best_labels)) {
                        best = std::move(candidate);
                        best_labels = std::move(labels);
                        have = true;
                    }
                }
                if (!have) throw Error("internal: choice with no productive branch");
                return best;
            }
        }
        return {};
    }

    std::size_t weight_only(const RegexTree& t) {
        switch (t.kind) {
            case RegexKind::Epsilon:
            case RegexKind::Star:
                return 0;
            case RegexKind::Symbol: {
                auto it = sizes.find(t.symbol);
                return it == sizes.end() ? kInf : it->second;
            }
            case RegexKind::Concat: {
                std::size_t sum = 0;
                for (const auto& c : t.children) sum = sat_add(sum, weight_only(c));
                return sum;
            }
            case RegexKind::Choice: {
                std::size_t best = kInf;
                for (const auto& c : t.children) best = std::min(best, weight_only(c));
                return best;
            }
        }
        return kInf;
    }

    XmlTree build(const std::string& nt) {
        auto it = memo.find(nt);
        if (it != memo.end()) return it->second;
        Hedge h = best_hedge(g.reg(nt));
        XmlTree t{g.term(nt), std::move(h.trees)};
        memo.emplace(nt, t);
        return t;
    }
};

} // namespace

XmlTree min_tree(const Grammar& g, const std::string& nt) {
    if (!g.has_rule(nt)) throw Unproductive(nt);
    auto sizes = min_tree_sizes(g);
    if (sizes.at(nt) == kInf) throw Unproductive(nt);
    MinTreeBuilder builder{g, sizes, {}};
    return builder.build(nt);
}

namespace {

void sort_dedupe(std::vector<XmlTree>& ts) {
    std::sort(ts.begin(), ts.end(), [](const XmlTree& a, const XmlTree& b) {
        std::size_t sa = tree_size(a), sb = tree_size(b);
        if (sa != sb) return sa < sb;
        return a < b;
    });
    ts.erase(std::unique(ts.begin(), ts.end()), ts.end());
}

struct TreeEnum {
    const Grammar& g;

    std::map<std::pair<std::string, std::size_t>, std::vector<XmlTree>> memo;

    std::vector<XmlTree> trees(const std::string& nt, std::size_t budget) {
        if (budget < 1 || !g.has_rule(nt)) return {};
        auto key = std::make_pair(nt, budget);
        auto it = memo.find(key);
        if (it != memo.end()) return it->second;
        memo[key] = {};  // cycle guard: a recursive use within the same budget
                         // cannot produce anything smaller anyway
        std::vector<XmlTree> out;
        for (auto& hedge : hedges(g.reg(nt), budget - 1)) {
            out.push_back(XmlTree{g.term(nt), std::move(hedge)});
        }
        sort_dedupe(out);
        memo[key] = out;
        return out;
    }

    std::vector<std::vector<XmlTree>> hedges(const RegexTree& t, std::size_t budget) {
        switch (t.kind) {
            case RegexKind::Epsilon:
                return {{}};
            case RegexKind::Symbol: {
                std::vector<std::vector<XmlTree>> out;
                for (auto& tr : trees(t.symbol, budget)) out.push_back({std::move(tr)});
                return out;
            }
            case RegexKind::Concat: {
                std::vector<std::vector<XmlTree>> acc = {{}};
                for (const auto& c : t.children) {
                    std::vector<std::vector<XmlTree>> next;
                    for (const auto& prefix : acc) {
                        std::size_t used = 0;
                        for (const auto& x : prefix) used += tree_size(x);
                        for (auto& part : hedges(c, budget - used)) {
                            std::vector<XmlTree> combo = prefix;
                            for (auto& x : part) combo.push_back(std::move(x));
                            next.push_back(std::move(combo));
                        }
                    }
                    acc = std::move(next);
                    if (acc.empty()) break;
                }
                return acc;
            }
            case RegexKind::Choice: {
                std::vector<std::vector<XmlTree>> out;
                for (const auto& c : t.children)
                    for (auto& h : hedges(c, budget)) out.push_back(std::move(h));
                dedupe_hedges(out);
                return out;
            }
            case RegexKind::Star: {
                std::vector<std::vector<XmlTree>> out = {{}};
                std::vector<std::vector<XmlTree>> frontier = {{}};
                while (true) {
                    std::vector<std::vector<XmlTree>> next;
                    for (const auto& prefix : frontier) {
                        std::size_t used = 0;
                        for (const auto& x : prefix) used += tree_size(x);
                        if (used >= budget) continue;
                        for (auto& part : hedges(t.children[0], budget - used)) {
                            if (part.empty()) continue;  // only nonempty iterations extend
                            std::vector<XmlTree> combo = prefix;
                            for (auto& x : part) combo.push_back(std::move(x));
                            next.push_back(std::move(combo));
                        }
                    }
                    if (next.empty()) break;
                    for (const auto& h : next) out.push_back(h);
                    frontier = std::move(next);
                }
                dedupe_hedges(out);
                return out;
            }
        }
        return {};
    }

    static void dedupe_hedges(std::vector<std::vector<XmlTree>>& hs) {
        std::sort(hs.begin(), hs.end());
        hs.erase(std::unique(hs.begin(), hs.end()), hs.end());
    }
};

} // namespace

std::vector<XmlTree> enumerate_trees(const Grammar& g, const std::string& nt,
                                     std::size_t max_size, std::size_t max_count) {
    TreeEnum te{g, {}};
    std::vector<XmlTree> out = te.trees(nt, max_size);
    if (max_count && out.size() > max_count) out.resize(max_count);
    return out;
}

std::string first_difference(const Grammar& a, const Grammar& b) {
    if (a.starts() != b.starts()) {
        std::string sa, sb;
        for (const auto& s : a.starts()) sa += s + " ";
        for (const auto& s : b.starts()) sb += s + " ";
        return "start sets differ: {" + sa + "} vs {" + sb + "}";
    }
    for (const auto& [nt, rule] : a.rules()) {
        if (!b.has_rule(nt)) return "rule for " + nt + " missing on the right";
        const Rule& other = b.rule(nt);
        if (rule.terminal != other.terminal)
            return nt + " labels differ: " + rule.terminal + " vs " + other.terminal;
        if (!(rule.body == other.body))
            return nt + " content models differ: " + tree_to_regex(rule.body) + " vs " +
                   tree_to_regex(other.body);
    }
    for (const auto& [nt, rule] : b.rules())
        if (!a.has_rule(nt)) return "rule for " + nt + " missing on the left";
    return "";
}

} // namespace rtgmap
