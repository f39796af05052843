#include "rtgmap/witness.hpp"

#include <algorithm>

#include "rtgmap/errors.hpp"
#include "rtgmap/glushkov.hpp"

namespace rtgmap {

std::string format_annotation(const Position& p, const NodeAnnotation& a) {
    std::string out = "(" + to_string(p) + ", " + a.nt;
    if (a.occurrence) out += "^" + to_string(*a.occurrence);
    out += ")";
    return out;
}

namespace {

struct WitnessContext {
    const Grammar& g;
    std::map<std::string, Nfa> nfas;

    const Nfa& nfa_of(const std::string& nt) {
        auto it = nfas.find(nt);
        if (it == nfas.end()) it = nfas.emplace(nt, build_nfa(g.reg(nt))).first;
        return it->second;
    }

    // Bottom-up table: candidates[p] = non-terminals generating t|p.
    std::map<Position, std::vector<std::string>> candidates;

    void fill_candidates(const XmlTree& t, Position here) {
        for (std::uint32_t i = 0; i < t.children.size(); ++i)
            fill_candidates(t.children[i], here.child(i));
        std::vector<std::vector<std::string>> child_cands;
        child_cands.reserve(t.children.size());
        for (std::uint32_t i = 0; i < t.children.size(); ++i)
            child_cands.push_back(candidates.at(here.child(i)));
        std::vector<std::string> mine;
        for (const auto& [nt, rule] : g.rules()) {
            if (rule.terminal != t.label) continue;
            if (hedge_accepts(nfa_of(nt), child_cands)) mine.push_back(nt);
        }
        candidates.emplace(here, std::move(mine));
    }

    static bool hedge_accepts(const Nfa& nfa, const std::vector<std::vector<std::string>>& cands) {
        for (const auto& c : cands)
            if (c.empty()) return false;
        if (cands.empty()) return nfa.nullable;
        std::vector<char> cur(nfa.occurrences.size(), 0);
        for (int i : nfa.first)
            for (const auto& s : cands[0])
                if (nfa.occurrences[static_cast<std::size_t>(i)].symbol == s)
                    cur[static_cast<std::size_t>(i)] = 1;
        for (std::size_t k = 1; k < cands.size(); ++k) {
            std::vector<char> next(nfa.occurrences.size(), 0);
            for (std::size_t s = 0; s < cur.size(); ++s) {
                if (!cur[s]) continue;
                for (int j : nfa.follow[s])
                    for (const auto& sym : cands[k])
                        if (nfa.occurrences[static_cast<std::size_t>(j)].symbol == sym)
                            next[static_cast<std::size_t>(j)] = 1;
            }
            cur = std::move(next);
        }
        for (std::size_t s = 0; s < cur.size(); ++s)
            if (cur[s] && nfa.last[s]) return true;
        return false;
    }

    // Enumerates annotations of the subtree at `here` given its generating
    // non-terminal. Returns false when the visitor asked to stop.
    bool enumerate_node(const XmlTree& t, Position here, const std::string& nt,
                        Annotation& acc, const std::function<bool()>& emit_subtree_done) {
        const Nfa& nfa = nfa_of(nt);
        std::vector<std::vector<std::string>> child_cands;
        child_cands.reserve(t.children.size());
        for (std::uint32_t i = 0; i < t.children.size(); ++i)
            child_cands.push_back(candidates.at(here.child(i)));

        bool keep_going = true;
        enumerate_hedge_runs(nfa, child_cands, [&](const std::vector<HedgeStep>& run) {
            keep_going = descend(t, here, nfa, run, 0, acc, emit_subtree_done);
            return keep_going;
        });
        return keep_going;
    }

    bool descend(const XmlTree& t, const Position& here, const Nfa& nfa,
                 const std::vector<HedgeStep>& run, std::size_t k, Annotation& acc,
                 const std::function<bool()>& done) {
        if (k == run.size()) return done();
        Position child_pos = here.child(static_cast<std::uint32_t>(k));
        const auto& occ = nfa.occurrences[static_cast<std::size_t>(run[k].occurrence)];
        const std::string& child_nt = candidates.at(child_pos)[run[k].candidate];
        acc.nodes[child_pos] = NodeAnnotation{
            child_nt, Position::root().child(0).concat(occ.pos)};
        return enumerate_node(t.children[k], child_pos, child_nt, acc, [&] {
            return descend(t, here, nfa, run, k + 1, acc, done);
        });
    }
};

} // namespace

std::vector<Annotation> annotate(const XmlTree& t, const Grammar& g, std::size_t cap) {
    WitnessContext ctx{g, {}, {}};
    ctx.fill_candidates(t, Position::root());

    std::vector<Annotation> out;
    Annotation acc;
    for (const auto& start : g.starts()) {
        const auto& roots = ctx.candidates.at(Position::root());
        if (std::find(roots.begin(), roots.end(), start) == roots.end()) continue;
        acc.nodes[Position::root()] = NodeAnnotation{start, std::nullopt};
        bool keep = ctx.enumerate_node(t, Position::root(), start, acc, [&] {
            out.push_back(acc);
            return cap == 0 || out.size() < cap;
        });
        if (!keep) break;
    }
    if (out.empty()) throw InvalidDocument("no derivation from any start symbol");
    return out;
}

std::optional<Annotation> validate(const XmlTree& t, const Grammar& g) {
    try {
        std::vector<Annotation> w = annotate(t, g, 1);
        return w.front();
    } catch (const InvalidDocument&) {
        return std::nullopt;
    }
}

std::set<std::string> generating_candidates(const XmlTree& t, const Grammar& g) {
    WitnessContext ctx{g, {}, {}};
    ctx.fill_candidates(t, Position::root());
    const auto& roots = ctx.candidates.at(Position::root());
    return std::set<std::string>(roots.begin(), roots.end());
}

std::optional<Annotation> annotate_as(const XmlTree& t, const Grammar& g, const std::string& nt) {
    if (!g.has_rule(nt) || g.term(nt) != t.label) return std::nullopt;
    WitnessContext ctx{g, {}, {}};
    ctx.fill_candidates(t, Position::root());
    const auto& roots = ctx.candidates.at(Position::root());
    if (std::find(roots.begin(), roots.end(), nt) == roots.end()) return std::nullopt;
    Annotation acc;
    acc.nodes[Position::root()] = NodeAnnotation{nt, std::nullopt};
    std::optional<Annotation> result;
    ctx.enumerate_node(t, Position::root(), nt, acc, [&] {
        result = acc;
        return false;  // first witness only
    });
    return result;
}

std::optional<HedgeWitness> match_hedge(const std::vector<XmlTree>& hedge,
                                        const RegexTree& model, const Grammar& g) {
    WitnessContext ctx{g, {}, {}};
    std::vector<std::vector<std::string>> cands;
    cands.reserve(hedge.size());
    for (std::uint32_t i = 0; i < hedge.size(); ++i) {
        // Each hedge element is its own little tree rooted at a synthetic
        // position; reuse the per-subtree candidate table.
        WitnessContext sub{g, {}, {}};
        sub.fill_candidates(hedge[i], Position::root());
        cands.push_back(sub.candidates.at(Position::root()));
        if (cands.back().empty()) return std::nullopt;
    }
    Nfa nfa = build_nfa(model);
    std::optional<HedgeWitness> result;
    enumerate_hedge_runs(nfa, cands, [&](const std::vector<HedgeStep>& run) {
        HedgeWitness w;
        for (std::size_t k = 0; k < run.size(); ++k) {
            w.nts.push_back(cands[k][run[k].candidate]);
            w.occurrences.push_back(nfa.occurrences[static_cast<std::size_t>(run[k].occurrence)].pos);
        }
        result = std::move(w);
        return false;
    });
    return result;
}

} // namespace rtgmap
