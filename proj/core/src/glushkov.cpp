#include "rtgmap/glushkov.hpp"

#include <algorithm>
#include <map>

namespace rtgmap {

namespace {

struct BuildState {
    Nfa nfa;
};

struct Component {
    std::vector<int> first;
    std::vector<int> last;
    bool nullable = false;
};

void merge_sorted(std::vector<int>& into, const std::vector<int>& from) {
    std::vector<int> out;
    std::merge(into.begin(), into.end(), from.begin(), from.end(), std::back_inserter(out));
    into = std::move(out);
}

void add_follow(Nfa& nfa, const std::vector<int>& lasts, const std::vector<int>& firsts) {
    for (int l : lasts) {
        auto& f = nfa.follow[static_cast<std::size_t>(l)];
        for (int x : firsts) {
            auto it = std::lower_bound(f.begin(), f.end(), x);
            if (it == f.end() || *it != x) f.insert(it, x);
        }
    }
}

Component build(const RegexTree& t, Position here, Nfa& nfa) {
    Component c;
    switch (t.kind) {
        case RegexKind::Epsilon:
            c.nullable = true;
            return c;
        case RegexKind::Symbol: {
            int idx = static_cast<int>(nfa.occurrences.size());
            nfa.occurrences.push_back({here, t.symbol});
            nfa.follow.emplace_back();
            c.first = {idx};
            c.last = {idx};
            c.nullable = false;
            return c;
        }
        case RegexKind::Choice: {
            c.nullable = false;
            for (std::uint32_t i = 0; i < t.children.size(); ++i) {
                Component ci = build(t.children[i], here.child(i), nfa);
                merge_sorted(c.first, ci.first);
                merge_sorted(c.last, ci.last);
                c.nullable = c.nullable || ci.nullable;
            }
            return c;
        }
        case RegexKind::Concat: {
            std::vector<Component> parts;
            parts.reserve(t.children.size());
            for (std::uint32_t i = 0; i < t.children.size(); ++i)
                parts.push_back(build(t.children[i], here.child(i), nfa));
            c.nullable = true;
            for (const auto& p : parts) c.nullable = c.nullable && p.nullable;
            // first: union while prefix nullable
            for (const auto& p : parts) {
                merge_sorted(c.first, p.first);
                if (!p.nullable) break;
            }
            for (auto it = parts.rbegin(); it != parts.rend(); ++it) {
                merge_sorted(c.last, it->last);
                if (!it->nullable) break;
            }
            // follow: last(i) x first(j) for j > i with everything between nullable
            for (std::size_t i = 0; i + 1 < parts.size(); ++i) {
                for (std::size_t j = i + 1; j < parts.size(); ++j) {
                    add_follow(nfa, parts[i].last, parts[j].first);
                    if (!parts[j].nullable) break;
                }
            }
            return c;
        }
        case RegexKind::Star: {
            Component inner = build(t.children[0], here.child(0), nfa);
            add_follow(nfa, inner.last, inner.first);
            c.first = inner.first;
            c.last = inner.last;
            c.nullable = true;
            return c;
        }
    }
    return c;
}

} // namespace

Nfa build_nfa(const RegexTree& t) {
    Nfa nfa;
    Component c = build(t, Position::root(), nfa);
    nfa.first = c.first;
    nfa.nullable = c.nullable;
    nfa.last.assign(nfa.occurrences.size(), false);
    for (int l : c.last) nfa.last[static_cast<std::size_t>(l)] = true;
    return nfa;
}

bool nfa_accepts(const Nfa& nfa, const std::vector<std::string>& word) {
    if (word.empty()) return nfa.nullable;
    std::vector<char> cur(nfa.occurrences.size(), 0);
    for (int i : nfa.first)
        if (nfa.occurrences[static_cast<std::size_t>(i)].symbol == word[0]) cur[static_cast<std::size_t>(i)] = 1;
    for (std::size_t k = 1; k < word.size(); ++k) {
        std::vector<char> next(nfa.occurrences.size(), 0);
        bool any = false;
        for (std::size_t s = 0; s < cur.size(); ++s) {
            if (!cur[s]) continue;
            for (int j : nfa.follow[s]) {
                if (nfa.occurrences[static_cast<std::size_t>(j)].symbol == word[k]) {
                    next[static_cast<std::size_t>(j)] = 1;
                    any = true;
                }
            }
        }
        if (!any) return false;
        cur = std::move(next);
    }
    for (std::size_t s = 0; s < cur.size(); ++s)
        if (cur[s] && nfa.last[s]) return true;
    return false;
}

namespace {

bool enumerate_runs(const Nfa& nfa, const std::vector<std::string>& word, std::size_t k, int state,
                    std::vector<int>& run, std::size_t cap, std::vector<MatchWitness>& out) {
    if (k == word.size()) {
        bool accept = run.empty() ? nfa.nullable : nfa.last[static_cast<std::size_t>(run.back())];
        if (accept) {
            MatchWitness w;
            w.reserve(run.size());
            for (int i : run) w.push_back(nfa.occurrences[static_cast<std::size_t>(i)].pos);
            out.push_back(std::move(w));
            if (cap && out.size() >= cap) return false;
        }
        return true;
    }
    const std::vector<int>& nexts = state < 0 ? nfa.first : nfa.follow[static_cast<std::size_t>(state)];
    for (int j : nexts) {
        if (nfa.occurrences[static_cast<std::size_t>(j)].symbol != word[k]) continue;
        run.push_back(j);
        bool keep = enumerate_runs(nfa, word, k + 1, j, run, cap, out);
        run.pop_back();
        if (!keep) return false;
    }
    return true;
}

} // namespace

std::vector<MatchWitness> match_word(const RegexTree& t, const std::vector<std::string>& word,
                                     std::size_t max_witnesses) {
    Nfa nfa = build_nfa(t);
    std::vector<MatchWitness> out;
    std::vector<int> run;
    enumerate_runs(nfa, word, 0, -1, run, max_witnesses, out);
    return out;
}

bool verify_run(const Nfa& nfa, const std::vector<std::string>& word,
                const std::vector<int>& occ_indices) {
    if (word.size() != occ_indices.size()) return false;
    if (word.empty()) return nfa.nullable;
    int prev = -1;
    for (std::size_t k = 0; k < word.size(); ++k) {
        int j = occ_indices[k];
        if (j < 0 || j >= static_cast<int>(nfa.occurrences.size())) return false;
        if (nfa.occurrences[static_cast<std::size_t>(j)].symbol != word[k]) return false;
        const std::vector<int>& nexts = prev < 0 ? nfa.first : nfa.follow[static_cast<std::size_t>(prev)];
        if (!std::binary_search(nexts.begin(), nexts.end(), j)) return false;
        prev = j;
    }
    return nfa.last[static_cast<std::size_t>(occ_indices.back())];
}

int occurrence_index(const Nfa& nfa, const Position& pos) {
    for (std::size_t i = 0; i < nfa.occurrences.size(); ++i)
        if (nfa.occurrences[i].pos == pos) return static_cast<int>(i);
    return -1;
}

namespace {

bool enumerate_hedge(const Nfa& nfa, const std::vector<std::vector<std::string>>& cands,
                     std::size_t k, int state, std::vector<HedgeStep>& run,
                     const std::function<bool(const std::vector<HedgeStep>&)>& visit) {
    if (k == cands.size()) {
        bool accept = run.empty() ? nfa.nullable : nfa.last[static_cast<std::size_t>(run.back().occurrence)];
        if (accept) return visit(run);
        return true;
    }
    const std::vector<int>& nexts = state < 0 ? nfa.first : nfa.follow[static_cast<std::size_t>(state)];
    for (std::size_t c = 0; c < cands[k].size(); ++c) {
        for (int j : nexts) {
            if (nfa.occurrences[static_cast<std::size_t>(j)].symbol != cands[k][c]) continue;
            run.push_back({c, j});
            bool keep = enumerate_hedge(nfa, cands, k + 1, j, run, visit);
            run.pop_back();
            if (!keep) return false;
        }
    }
    return true;
}

} // namespace

void enumerate_hedge_runs(const Nfa& nfa,
                          const std::vector<std::vector<std::string>>& candidates,
                          const std::function<bool(const std::vector<HedgeStep>&)>& visit) {
    std::vector<HedgeStep> run;
    enumerate_hedge(nfa, candidates, 0, -1, run, visit);
}

namespace {

// Minimal word length with leftmost tie-break; returns nullopt only for
// Symbol-free impossibility (never: a symbol always yields length 1).
void min_word_rec(const RegexTree& t, Position here, MinWord& out) {
    switch (t.kind) {
        case RegexKind::Epsilon:
            return;
        case RegexKind::Symbol:
            out.symbols.push_back(t.symbol);
            out.occurrences.push_back(here);
            return;
        case RegexKind::Star:
            return;  // zero iterations
        case RegexKind::Concat:
            for (std::uint32_t i = 0; i < t.children.size(); ++i)
                min_word_rec(t.children[i], here.child(i), out);
            return;
        case RegexKind::Choice: {
            std::size_t best_len = 0;
            std::uint32_t best = 0;
            bool have = false;
            for (std::uint32_t i = 0; i < t.children.size(); ++i) {
                MinWord probe;
                min_word_rec(t.children[i], here.child(i), probe);
                if (!have || probe.symbols.size() < best_len) {
                    best_len = probe.symbols.size();
                    best = i;
                    have = true;
                }
            }
            min_word_rec(t.children[best], here.child(best), out);
            return;
        }
    }
}

} // namespace

MinWord min_word(const RegexTree& t) {
    MinWord out;
    min_word_rec(t, Position::root(), out);
    return out;
}

} // namespace rtgmap
