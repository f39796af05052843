#include "rtgmap/mapping.hpp"

#include <algorithm>

#include "rtgmap/errors.hpp"

namespace rtgmap {

Grammar apply_script_lenient(const Grammar& g, const EditScript& script) {
    Grammar cur = g;
    for (std::size_t k = 0; k < script.size(); ++k) {
        try {
            cur = apply_edit(cur, script[k]);
        } catch (const NotDefined& e) {
            throw NotDefinedAt(k, e.what());
        } catch (const DanglingReference& e) {
            throw NotDefinedAt(k, e.what());
        }
    }
    return cur;
}

Grammar apply_script(const Grammar& g, const EditScript& script) {
    Grammar out = apply_script_lenient(g, script);
    if (auto why = reduced_violation(out))
        throw NotDefinedAt(script.size(), "result is not in reduced form: " + *why);
    return out;
}

int script_cost(const EditScript& script, const Grammar& g) {
    Grammar cur = g;
    int total = 0;
    for (std::size_t k = 0; k < script.size(); ++k) {
        try {
            total += cost(script[k], cur);
            cur = apply_edit(cur, script[k]);
        } catch (const NotDefined& e) {
            throw NotDefinedAt(k, e.what());
        } catch (const DanglingReference& e) {
            throw NotDefinedAt(k, e.what());
        }
    }
    return total;
}

std::vector<Grammar> script_states(const Grammar& g, const EditScript& script) {
    std::vector<Grammar> states;
    states.push_back(g);
    for (std::size_t k = 0; k < script.size(); ++k) {
        try {
            states.push_back(apply_edit(states.back(), script[k]));
        } catch (const NotDefined& e) {
            throw NotDefinedAt(k, e.what());
        } catch (const DanglingReference& e) {
            throw NotDefinedAt(k, e.what());
        }
    }
    return states;
}

SchemaMapping compose(const SchemaMapping& m1, const SchemaMapping& m2) {
    if (!(m1.target == m2.source))
        throw SchemaMismatch(first_difference(m1.target, m2.source));
    EditScript script = m1.script;
    script.insert(script.end(), m2.script.begin(), m2.script.end());
    return SchemaMapping{m1.source, m2.target, std::move(script)};
}

SchemaMapping invert(const SchemaMapping& m) {
    EditScript script;
    script.reserve(m.script.size());
    for (auto it = m.script.rbegin(); it != m.script.rend(); ++it)
        script.push_back(invert_op(*it));
    return SchemaMapping{m.target, m.source, std::move(script)};
}

SchemaMapping mapping_gen(const Grammar& g) {
    EditScript script;
    Grammar cur = g;

    // competing_pairs keys iterate in lexicographic terminal order; merging
    // one terminal's competitors never creates competition elsewhere since
    // no emitted op changes a rule's terminal label.
    for (const auto& [terminal, group] : competing_pairs(g)) {
        std::vector<std::string> members(group.begin(), group.end());
        const std::string& rep = members.front();

        script.push_back(InsOpr{rep, RegexKind::Choice, Position::root().child(0), 1});
        cur = apply_edit(cur, script.back());

        for (std::size_t i = 1; i < members.size(); ++i) {
            const std::string& gone = members[i];

            script.push_back(InsTree{rep, cur.reg(gone),
                                     Position::root().child(0).child(static_cast<std::uint32_t>(i))});
            cur = apply_edit(cur, script.back());

            // Replace every occurrence, including those in the body just
            // grafted onto the representative. Renames are label-only, so
            // positions collected up front stay valid.
            std::vector<std::pair<std::string, Position>> renames;
            for (const auto& [owner, rule] : cur.rules())
                for (const auto& occ : occurrences_of(rule.body, gone))
                    renames.emplace_back(owner, Position::root().child(0).concat(occ));
            for (const auto& [owner, at] : renames) {
                script.push_back(RelElm{owner, gone, rep, at});
                cur = apply_edit(cur, script.back());
            }

            if (!cur.starts().count(rep) && cur.starts().count(gone)) {
                script.push_back(SetStartElm{rep});
                cur = apply_edit(cur, script.back());
            }

            script.push_back(DelTreeRule{gone, terminal, cur.reg(gone)});
            cur = apply_edit(cur, script.back());
        }
    }
    if (!is_ltg(cur)) throw Error("internal: merge left competing non-terminals");
    return SchemaMapping{g, cur, std::move(script)};
}

} // namespace rtgmap
