#include "rtgmap/edit_op.hpp"

#include <algorithm>

#include "rtgmap/errors.hpp"

namespace rtgmap {

bool operator==(const EditOp& a, const EditOp& b) {
    if (a.index() != b.index()) return false;
    return std::visit(
        [&](const auto& x) {
            using T = std::decay_t<decltype(x)>;
            const T& y = std::get<T>(b);
            if constexpr (std::is_same_v<T, SetStartElm> || std::is_same_v<T, UnsetStartElm>) {
                return x.nt == y.nt;
            } else if constexpr (std::is_same_v<T, InsElm> || std::is_same_v<T, DelElm>) {
                return x.nt == y.nt && x.symbol == y.symbol && x.at == y.at;
            } else if constexpr (std::is_same_v<T, RelRoot>) {
                return x.nt == y.nt && x.from == y.from && x.to == y.to;
            } else if constexpr (std::is_same_v<T, RelElm>) {
                return x.nt == y.nt && x.from == y.from && x.to == y.to && x.at == y.at;
            } else if constexpr (std::is_same_v<T, InsOpr> || std::is_same_v<T, DelOpr>) {
                return x.nt == y.nt && x.opr == y.opr && x.at == y.at && x.count == y.count;
            } else if constexpr (std::is_same_v<T, RelOpr>) {
                return x.nt == y.nt && x.from == y.from && x.to == y.to && x.at == y.at;
            } else if constexpr (std::is_same_v<T, InsRule> || std::is_same_v<T, DelRule>) {
                return x.nt == y.nt && x.terminal == y.terminal;
            } else if constexpr (std::is_same_v<T, InsTree> || std::is_same_v<T, DelTree>) {
                return x.nt == y.nt && x.tree == y.tree && x.at == y.at;
            } else {
                return x.nt == y.nt && x.terminal == y.terminal && x.tree == y.tree;
            }
        },
        a);
}

std::string kind_name(const EditOp& op) {
    struct Namer {
        std::string operator()(const SetStartElm&) const { return "set_startelm"; }
        std::string operator()(const UnsetStartElm&) const { return "unset_startelm"; }
        std::string operator()(const InsElm&) const { return "ins_elm"; }
        std::string operator()(const DelElm&) const { return "del_elm"; }
        std::string operator()(const RelRoot&) const { return "rel_root"; }
        std::string operator()(const RelElm&) const { return "rel_elm"; }
        std::string operator()(const InsOpr&) const { return "ins_opr"; }
        std::string operator()(const DelOpr&) const { return "del_opr"; }
        std::string operator()(const RelOpr&) const { return "rel_opr"; }
        std::string operator()(const InsRule&) const { return "ins_rule"; }
        std::string operator()(const DelRule&) const { return "del_rule"; }
        std::string operator()(const InsTree&) const { return "ins_tree"; }
        std::string operator()(const DelTree&) const { return "del_tree"; }
        std::string operator()(const InsTreeRule&) const { return "ins_treerule"; }
        std::string operator()(const DelTreeRule&) const { return "del_treerule"; }
    };
    return std::visit(Namer{}, op);
}

bool is_elementary(const EditOp& op) {
    return !std::holds_alternative<InsTree>(op) && !std::holds_alternative<DelTree>(op) &&
           !std::holds_alternative<InsTreeRule>(op) && !std::holds_alternative<DelTreeRule>(op);
}

namespace {

std::string opr_text(RegexKind k) {
    switch (k) {
        case RegexKind::Choice: return "|";
        case RegexKind::Concat: return ".";
        case RegexKind::Star: return "*";
        default: throw Error("not an operator kind");
    }
}

RegexKind parse_opr(const std::string& s) {
    if (s == "|") return RegexKind::Choice;
    if (s == ".") return RegexKind::Concat;
    if (s == "*") return RegexKind::Star;
    throw SyntaxError("expected an operator (| . *), got '" + s + "'");
}

std::string symbol_text(const std::string& s) {
    return s.empty() ? "epsilon" : s;
}

std::string parse_symbol(const std::string& s) {
    return s == "epsilon" ? std::string() : s;
}

std::string regex_arg(const RegexTree& t) {
    std::string s = tree_to_regex(t);
    if (t.kind == RegexKind::Choice || t.kind == RegexKind::Concat) return "(" + s + ")";
    return s;
}

} // namespace

std::string to_string(const EditOp& op) {
    struct Printer {
        std::string operator()(const SetStartElm& x) const { return "set_startelm(" + x.nt + ")"; }
        std::string operator()(const UnsetStartElm& x) const { return "unset_startelm(" + x.nt + ")"; }
        std::string operator()(const InsElm& x) const {
            return "ins_elm(" + x.nt + "," + symbol_text(x.symbol) + "," + rtgmap::to_string(x.at) + ")";
        }
        std::string operator()(const DelElm& x) const {
            return "del_elm(" + x.nt + "," + symbol_text(x.symbol) + "," + rtgmap::to_string(x.at) + ")";
        }
        std::string operator()(const RelRoot& x) const {
            return "rel_root(" + x.nt + "," + x.from + "," + x.to + ")";
        }
        std::string operator()(const RelElm& x) const {
            return "rel_elm(" + x.nt + "," + symbol_text(x.from) + "," + symbol_text(x.to) + "," +
                   rtgmap::to_string(x.at) + ")";
        }
        std::string operator()(const InsOpr& x) const {
            return "ins_opr(" + x.nt + "," + opr_text(x.opr) + "," + rtgmap::to_string(x.at) + "," +
                   std::to_string(x.count) + ")";
        }
        std::string operator()(const DelOpr& x) const {
            return "del_opr(" + x.nt + "," + opr_text(x.opr) + "," + rtgmap::to_string(x.at) + "," +
                   std::to_string(x.count) + ")";
        }
        std::string operator()(const RelOpr& x) const {
            return "rel_opr(" + x.nt + "," + opr_text(x.from) + "," + opr_text(x.to) + "," +
                   rtgmap::to_string(x.at) + ")";
        }
        std::string operator()(const InsRule& x) const {
            return "ins_rule(" + x.nt + "," + x.terminal + ")";
        }
        std::string operator()(const DelRule& x) const {
            return "del_rule(" + x.nt + "," + x.terminal + ")";
        }
        std::string operator()(const InsTree& x) const {
            return "ins_tree(" + x.nt + "," + regex_arg(x.tree) + "," + rtgmap::to_string(x.at) + ")";
        }
        std::string operator()(const DelTree& x) const {
            return "del_tree(" + x.nt + "," + regex_arg(x.tree) + "," + rtgmap::to_string(x.at) + ")";
        }
        std::string operator()(const InsTreeRule& x) const {
            return "ins_treerule(" + x.nt + "," + x.terminal + "," + regex_arg(x.tree) + ")";
        }
        std::string operator()(const DelTreeRule& x) const {
            return "del_treerule(" + x.nt + "," + x.terminal + "," + regex_arg(x.tree) + ")";
        }
    };
    return std::visit(Printer{}, op);
}

namespace {

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split_args(const std::string& s) {
    std::vector<std::string> out;
    int depth = 0;
    std::string cur;
    for (char c : s) {
        if (c == '(') ++depth;
        if (c == ')') --depth;
        if (c == ',' && depth == 0) {
            out.push_back(trim(cur));
            cur.clear();
            continue;
        }
        cur += c;
    }
    out.push_back(trim(cur));
    return out;
}

void want_args(const std::string& kind, const std::vector<std::string>& args, std::size_t n) {
    if (args.size() != n)
        throw SyntaxError(kind + " takes " + std::to_string(n) + " arguments, got " +
                          std::to_string(args.size()));
}

} // namespace

EditOp parse_edit_op(const std::string& line) {
    std::string s = trim(line);
    std::size_t open = s.find('(');
    if (open == std::string::npos || s.back() != ')')
        throw SyntaxError("expected op(args...): '" + s + "'");
    std::string kind = trim(s.substr(0, open));
    std::vector<std::string> args = split_args(s.substr(open + 1, s.size() - open - 2));

    if (kind == "set_startelm") {
        want_args(kind, args, 1);
        return SetStartElm{args[0]};
    }
    if (kind == "unset_startelm") {
        want_args(kind, args, 1);
        return UnsetStartElm{args[0]};
    }
    if (kind == "ins_elm" || kind == "del_elm") {
        want_args(kind, args, 3);
        if (kind == "ins_elm") return InsElm{args[0], parse_symbol(args[1]), parse_position(args[2])};
        return DelElm{args[0], parse_symbol(args[1]), parse_position(args[2])};
    }
    if (kind == "rel_root") {
        want_args(kind, args, 3);
        return RelRoot{args[0], args[1], args[2]};
    }
    if (kind == "rel_elm") {
        want_args(kind, args, 4);
        return RelElm{args[0], parse_symbol(args[1]), parse_symbol(args[2]), parse_position(args[3])};
    }
    if (kind == "ins_opr" || kind == "del_opr") {
        want_args(kind, args, 4);
        std::uint32_t n = static_cast<std::uint32_t>(std::stoul(args[3]));
        if (kind == "ins_opr") return InsOpr{args[0], parse_opr(args[1]), parse_position(args[2]), n};
        return DelOpr{args[0], parse_opr(args[1]), parse_position(args[2]), n};
    }
    if (kind == "rel_opr") {
        want_args(kind, args, 4);
        return RelOpr{args[0], parse_opr(args[1]), parse_opr(args[2]), parse_position(args[3])};
    }
    if (kind == "ins_rule" || kind == "del_rule") {
        want_args(kind, args, 2);
        if (kind == "ins_rule") return InsRule{args[0], args[1]};
        return DelRule{args[0], args[1]};
    }
    if (kind == "ins_tree" || kind == "del_tree") {
        want_args(kind, args, 3);
        RegexTree r = regex_to_tree(args[1]);
        if (kind == "ins_tree") return InsTree{args[0], std::move(r), parse_position(args[2])};
        return DelTree{args[0], std::move(r), parse_position(args[2])};
    }
    if (kind == "ins_treerule" || kind == "del_treerule") {
        want_args(kind, args, 3);
        RegexTree r = regex_to_tree(args[2]);
        if (kind == "ins_treerule") return InsTreeRule{args[0], args[1], std::move(r)};
        return DelTreeRule{args[0], args[1], std::move(r)};
    }
    throw SyntaxError("unknown edit op '" + kind + "'");
}

// ---------------------------------------------------------------------------
// Application.

namespace {

[[noreturn]] void fail(const EditOp& op, const std::string& reason) {
    throw NotDefined(kind_name(op), reason);
}

struct RuleCursor {
    Rule* rule = nullptr;       // the rule being edited
    RegexTree* node = nullptr;  // regex node at the position, null at root
    bool at_root = false;
};

// Looks up a rule-tree position inside an editable copy of the rules.
RuleCursor locate(std::map<std::string, Rule>& rules, const EditOp& op,
                  const std::string& nt, const Position& p) {
    auto it = rules.find(nt);
    if (it == rules.end()) fail(op, "no rule for " + nt);
    RuleCursor c;
    c.rule = &it->second;
    if (p.is_root()) {
        c.at_root = true;
        return c;
    }
    if (p[0] != 0) fail(op, "rule-tree position " + to_string(p) + " out of range");
    RegexTree* cur = &it->second.body;
    for (std::size_t i = 1; i < p.depth(); ++i) {
        if (p[i] >= cur->children.size())
            fail(op, "position " + to_string(p) + " out of range in rule " + nt);
        cur = &cur->children[p[i]];
    }
    c.node = cur;
    return c;
}

// Children list of the node at `p` (the terminal root exposes its single
// regex child through a synthetic one-element view).
struct ParentView {
    bool is_terminal_root = false;
    bool is_star = false;
    RegexKind kind = RegexKind::Epsilon;  // meaningful when a regex node
    RegexTree* node = nullptr;            // null for the terminal root
    Rule* rule = nullptr;
};

ParentView locate_parent(std::map<std::string, Rule>& rules, const EditOp& op,
                         const std::string& nt, const Position& parent_pos) {
    RuleCursor c = locate(rules, op, nt, parent_pos);
    ParentView v;
    v.rule = c.rule;
    if (c.at_root) {
        v.is_terminal_root = true;
        return v;
    }
    v.node = c.node;
    v.kind = c.node->kind;
    v.is_star = c.node->kind == RegexKind::Star;
    return v;
}

std::size_t parent_arity(const ParentView& v) {
    return v.is_terminal_root ? 1 : v.node->children.size();
}

RegexTree* parent_child(ParentView& v, std::size_t i) {
    if (v.is_terminal_root) return &v.rule->body;
    return &v.node->children[i];
}

bool occurs_in_other_rules(const std::map<std::string, Rule>& rules, const std::string& nt) {
    for (const auto& [name, rule] : rules) {
        if (name == nt) continue;
        if (symbols_of(rule.body).count(nt)) return true;
    }
    return false;
}

bool symbol_leaf_matches(const RegexTree& t, const std::string& symbol) {
    if (symbol.empty()) return t.kind == RegexKind::Epsilon;
    return t.kind == RegexKind::Symbol && t.symbol == symbol;
}

RegexTree make_leaf(const std::string& symbol) {
    return symbol.empty() ? RegexTree::epsilon() : RegexTree::leaf(symbol);
}

void check_symbol_known(const EditOp& op, const Grammar& g, const std::string& symbol) {
    if (symbol.empty()) return;  // ε
    if (!g.non_terminals().count(symbol))
        fail(op, "symbol " + symbol + " is not a non-terminal of the grammar");
}

} // namespace

Grammar apply_edit(const Grammar& g, const EditOp& op) {
    std::map<std::string, Rule> rules = g.rules();
    std::set<std::string> starts = g.starts();

    if (const auto* x = std::get_if<SetStartElm>(&op)) {
        if (!g.non_terminals().count(x->nt)) fail(op, x->nt + " is not a non-terminal");
        if (starts.count(x->nt)) fail(op, x->nt + " is already a start symbol");
        starts.insert(x->nt);
        return Grammar(std::move(rules), std::move(starts));
    }
    if (const auto* x = std::get_if<UnsetStartElm>(&op)) {
        if (!starts.count(x->nt)) fail(op, x->nt + " is not a start symbol");
        starts.erase(x->nt);
        return Grammar(std::move(rules), std::move(starts));
    }
    if (const auto* x = std::get_if<InsElm>(&op)) {
        check_symbol_known(op, g, x->symbol);
        if (x->at.is_root()) fail(op, "insertion position must name a parent and index");
        Position u = x->at.parent();
        std::uint32_t i = x->at.last();
        ParentView v = locate_parent(rules, op, x->nt, u);
        if (v.is_terminal_root || (v.kind != RegexKind::Choice && v.kind != RegexKind::Concat))
            fail(op, "parent of an element insertion must be a choice or concat node");
        if (i > v.node->children.size()) fail(op, "index " + std::to_string(i) + " out of range");
        v.node->children.insert(v.node->children.begin() + i, make_leaf(x->symbol));
        return Grammar(std::move(rules), std::move(starts));
    }
    if (const auto* x = std::get_if<DelElm>(&op)) {
        if (x->at.is_root()) fail(op, "deletion position must name a parent and index");
        Position u = x->at.parent();
        std::uint32_t i = x->at.last();
        ParentView v = locate_parent(rules, op, x->nt, u);
        if (v.is_terminal_root || (v.kind != RegexKind::Choice && v.kind != RegexKind::Concat))
            fail(op, "parent of an element deletion must be a choice or concat node");
        if (i >= v.node->children.size()) fail(op, "index out of range");
        if (!symbol_leaf_matches(v.node->children[i], x->symbol))
            fail(op, "leaf at " + to_string(x->at) + " is not " + symbol_text(x->symbol));
        if (v.node->children.size() < 2) fail(op, "parent would lose its last child");
        v.node->children.erase(v.node->children.begin() + i);
        return Grammar(std::move(rules), std::move(starts));
    }
    if (const auto* x = std::get_if<RelRoot>(&op)) {
        auto it = rules.find(x->nt);
        if (it == rules.end()) fail(op, "no rule for " + x->nt);
        if (it->second.terminal != x->from)
            fail(op, "rule of " + x->nt + " is labeled " + it->second.terminal + ", not " + x->from);
        it->second.terminal = x->to;
        return Grammar(std::move(rules), std::move(starts));
    }
    if (const auto* x = std::get_if<RelElm>(&op)) {
        check_symbol_known(op, g, x->to);
        RuleCursor c = locate(rules, op, x->nt, x->at);
        if (c.at_root) fail(op, "rel_elm cannot address the terminal root");
        if (!symbol_leaf_matches(*c.node, x->from))
            fail(op, "leaf at " + to_string(x->at) + " is not " + symbol_text(x->from));
        *c.node = make_leaf(x->to);
        return Grammar(std::move(rules), std::move(starts));
    }
    if (const auto* x = std::get_if<InsOpr>(&op)) {
        if (x->count < 1) fail(op, "must wrap at least one child");
        if (x->count > 1 && x->opr == RegexKind::Star)
            fail(op, "a star can only wrap a single child");
        if (x->opr != RegexKind::Choice && x->opr != RegexKind::Concat && x->opr != RegexKind::Star)
            fail(op, "operator must be one of | . *");
        if (x->at.is_root()) fail(op, "position must name a parent and index");
        Position u = x->at.parent();
        std::uint32_t i = x->at.last();
        ParentView v = locate_parent(rules, op, x->nt, u);
        if (static_cast<std::size_t>(i) + x->count > parent_arity(v))
            fail(op, "wrapped range out of bounds");
        RegexTree wrapper;
        wrapper.kind = x->opr;
        if (v.is_terminal_root) {
            wrapper.children.push_back(std::move(v.rule->body));
            v.rule->body = std::move(wrapper);
        } else {
            auto first = v.node->children.begin() + i;
            wrapper.children.assign(std::make_move_iterator(first),
                                    std::make_move_iterator(first + x->count));
            v.node->children.erase(first, first + x->count);
            v.node->children.insert(v.node->children.begin() + i, std::move(wrapper));
        }
        return Grammar(std::move(rules), std::move(starts));
    }
    if (const auto* x = std::get_if<DelOpr>(&op)) {
        if (x->at.is_root()) fail(op, "position must name a parent and index");
        Position u = x->at.parent();
        std::uint32_t i = x->at.last();
        ParentView v = locate_parent(rules, op, x->nt, u);
        if (i >= parent_arity(v)) fail(op, "index out of range");
        RegexTree* target = parent_child(v, i);
        if (target->kind != x->opr || target->is_leaf())
            fail(op, "node at " + to_string(x->at) + " is not a " + opr_text(x->opr) + " node");
        if (target->children.size() != x->count)
            fail(op, "node has " + std::to_string(target->children.size()) + " children, op names " +
                     std::to_string(x->count));
        if (v.is_terminal_root || v.is_star) {
            if (x->count != 1) fail(op, "splice under a unary parent must keep arity one");
            RegexTree child = std::move(target->children[0]);
            *target = std::move(child);
        } else {
            std::vector<RegexTree> spliced = std::move(target->children);
            v.node->children.erase(v.node->children.begin() + i);
            v.node->children.insert(v.node->children.begin() + i,
                                    std::make_move_iterator(spliced.begin()),
                                    std::make_move_iterator(spliced.end()));
        }
        return Grammar(std::move(rules), std::move(starts));
    }
    if (const auto* x = std::get_if<RelOpr>(&op)) {
        RuleCursor c = locate(rules, op, x->nt, x->at);
        if (c.at_root) fail(op, "rel_opr cannot address the terminal root");
        if (c.node->kind != x->from || c.node->is_leaf())
            fail(op, "node at " + to_string(x->at) + " is not a " + opr_text(x->from) + " node");
        if (x->to == RegexKind::Star && c.node->children.size() != 1)
            fail(op, "a star node must have exactly one child");
        if (x->to != RegexKind::Choice && x->to != RegexKind::Concat && x->to != RegexKind::Star)
            fail(op, "operator must be one of | . *");
        c.node->kind = x->to;
        return Grammar(std::move(rules), std::move(starts));
    }
    if (const auto* x = std::get_if<InsRule>(&op)) {
        if (g.non_terminals().count(x->nt)) fail(op, x->nt + " is already a non-terminal");
        rules.emplace(x->nt, Rule{x->terminal, RegexTree::epsilon()});
        starts.insert(x->nt);
        return Grammar(std::move(rules), std::move(starts));
    }
    if (const auto* x = std::get_if<DelRule>(&op)) {
        auto it = rules.find(x->nt);
        if (it == rules.end()) fail(op, "no rule for " + x->nt);
        if (it->second.terminal != x->terminal)
            fail(op, "rule of " + x->nt + " is labeled " + it->second.terminal);
        if (it->second.body.kind != RegexKind::Epsilon)
            fail(op, "content model of " + x->nt + " is not epsilon");
        if (occurs_in_other_rules(rules, x->nt)) throw DanglingReference(x->nt);
        rules.erase(it);
        starts.erase(x->nt);
        return Grammar(std::move(rules), std::move(starts));
    }
    if (const auto* x = std::get_if<InsTree>(&op)) {
        WellFormedReport wf = is_well_formed_body(x->tree);
        if (!wf.ok) fail(op, "grafted tree is not well formed: " + wf.detail);
        for (const auto& s : symbols_of(x->tree)) check_symbol_known(op, g, s);
        if (x->at.is_root()) fail(op, "insertion position must name a parent and index");
        Position u = x->at.parent();
        std::uint32_t i = x->at.last();
        ParentView v = locate_parent(rules, op, x->nt, u);
        if (v.is_terminal_root || (v.kind != RegexKind::Choice && v.kind != RegexKind::Concat))
            fail(op, "parent of a tree graft must be a choice or concat node");
        if (i > v.node->children.size()) fail(op, "index out of range");
        v.node->children.insert(v.node->children.begin() + i, x->tree);
        return Grammar(std::move(rules), std::move(starts));
    }
    if (const auto* x = std::get_if<DelTree>(&op)) {
        if (x->at.is_root()) fail(op, "deletion position must name a parent and index");
        Position u = x->at.parent();
        std::uint32_t i = x->at.last();
        ParentView v = locate_parent(rules, op, x->nt, u);
        if (v.is_terminal_root || (v.kind != RegexKind::Choice && v.kind != RegexKind::Concat))
            fail(op, "parent of a tree prune must be a choice or concat node");
        if (i >= v.node->children.size()) fail(op, "index out of range");
        if (!(v.node->children[i] == x->tree))
            fail(op, "subtree at " + to_string(x->at) + " is " +
                     tree_to_regex(v.node->children[i]) + ", not " + tree_to_regex(x->tree));
        if (v.node->children.size() < 2) fail(op, "parent would lose its last child");
        v.node->children.erase(v.node->children.begin() + i);
        return Grammar(std::move(rules), std::move(starts));
    }
    if (const auto* x = std::get_if<InsTreeRule>(&op)) {
        if (g.non_terminals().count(x->nt)) fail(op, x->nt + " is already a non-terminal");
        WellFormedReport wf = is_well_formed_body(x->tree);
        if (!wf.ok) fail(op, "rule body is not well formed: " + wf.detail);
        for (const auto& s : symbols_of(x->tree))
            if (s != x->nt && !g.non_terminals().count(s))
                fail(op, "symbol " + s + " is not a non-terminal of the grammar");
        rules.emplace(x->nt, Rule{x->terminal, x->tree});
        starts.insert(x->nt);
        return Grammar(std::move(rules), std::move(starts));
    }
    if (const auto* x = std::get_if<DelTreeRule>(&op)) {
        auto it = rules.find(x->nt);
        if (it == rules.end()) fail(op, "no rule for " + x->nt);
        if (it->second.terminal != x->terminal)
            fail(op, "rule of " + x->nt + " is labeled " + it->second.terminal);
        if (!(it->second.body == x->tree))
            fail(op, "content model of " + x->nt + " is " + tree_to_regex(it->second.body) +
                     ", not " + tree_to_regex(x->tree));
        if (occurs_in_other_rules(rules, x->nt)) throw DanglingReference(x->nt);
        rules.erase(it);
        starts.erase(x->nt);
        return Grammar(std::move(rules), std::move(starts));
    }
    throw Error("unhandled edit op kind");
}

int cost(const EditOp& op, const Grammar& g) {
    apply_edit(g, op);  // definedness check; NotDefined propagates

    if (const auto* x = std::get_if<DelOpr>(&op)) {
        // Registered language-preserving simplifications.
        const RuleTree rt = g.rule_tree(x->nt);
        Position u = x->at.parent();
        const RegexTree* deleted = rule_node_at(rt, x->at);
        if (deleted) {
            // (a) node operator equals its parent's operator
            if (!u.is_root()) {
                const RegexTree* parent = rule_node_at(rt, u);
                if (parent && parent->kind == deleted->kind) return 0;
            }
            // (b) unary choice/concat collapse
            if ((deleted->kind == RegexKind::Choice || deleted->kind == RegexKind::Concat) &&
                deleted->children.size() == 1)
                return 0;
        }
    }
    return is_elementary(op) ? 1 : 5;
}

namespace {

// Builds the target subtree in place of an ε scaffold sitting at `p`.
void build_in_scaffold(const std::string& nt, const Position& p, const RegexTree& target,
                       std::vector<EditOp>& out) {
    switch (target.kind) {
        case RegexKind::Epsilon:
            return;  // scaffold already is ε
        case RegexKind::Symbol:
            out.push_back(RelElm{nt, "", target.symbol, p});
            return;
        case RegexKind::Star:
            out.push_back(InsOpr{nt, RegexKind::Star, p, 1});
            build_in_scaffold(nt, p.child(0), target.children[0], out);
            return;
        case RegexKind::Choice:
        case RegexKind::Concat: {
            out.push_back(InsOpr{nt, target.kind, p, 1});
            for (std::uint32_t j = 0; j < target.children.size(); ++j) {
                const RegexTree& c = target.children[j];
                if (c.is_leaf()) {
                    out.push_back(InsElm{nt, c.kind == RegexKind::Symbol ? c.symbol : "", p.child(j)});
                } else {
                    out.push_back(InsElm{nt, "", p.child(j)});
                    build_in_scaffold(nt, p.child(j), c, out);
                }
            }
            out.push_back(DelElm{nt, "", p.child(static_cast<std::uint32_t>(target.children.size()))});
            return;
        }
    }
}

} // namespace

std::vector<EditOp> expand(const EditOp& op) {
    if (const auto* x = std::get_if<InsTree>(&op)) {
        if (x->tree.is_leaf()) {
            std::string sym = x->tree.kind == RegexKind::Symbol ? x->tree.symbol : "";
            return {InsElm{x->nt, sym, x->at}};
        }
        std::vector<EditOp> out;
        out.push_back(InsElm{x->nt, "", x->at});
        build_in_scaffold(x->nt, x->at, x->tree, out);
        return out;
    }
    if (const auto* x = std::get_if<InsTreeRule>(&op)) {
        std::vector<EditOp> out;
        out.push_back(InsRule{x->nt, x->terminal});
        build_in_scaffold(x->nt, Position::root().child(0), x->tree, out);
        return out;
    }
    if (const auto* x = std::get_if<DelTree>(&op)) {
        std::vector<EditOp> fwd = expand(InsTree{x->nt, x->tree, x->at});
        std::vector<EditOp> out;
        for (auto it = fwd.rbegin(); it != fwd.rend(); ++it) out.push_back(invert_op(*it));
        return out;
    }
    if (const auto* x = std::get_if<DelTreeRule>(&op)) {
        std::vector<EditOp> fwd = expand(InsTreeRule{x->nt, x->terminal, x->tree});
        std::vector<EditOp> out;
        for (auto it = fwd.rbegin(); it != fwd.rend(); ++it) out.push_back(invert_op(*it));
        return out;
    }
    return {op};
}

EditOp invert_op(const EditOp& op) {
    struct Inverter {
        EditOp operator()(const SetStartElm& x) const { return UnsetStartElm{x.nt}; }
        EditOp operator()(const UnsetStartElm& x) const { return SetStartElm{x.nt}; }
        EditOp operator()(const InsElm& x) const { return DelElm{x.nt, x.symbol, x.at}; }
        EditOp operator()(const DelElm& x) const { return InsElm{x.nt, x.symbol, x.at}; }
        EditOp operator()(const RelRoot& x) const { return RelRoot{x.nt, x.to, x.from}; }
        EditOp operator()(const RelElm& x) const { return RelElm{x.nt, x.to, x.from, x.at}; }
        EditOp operator()(const InsOpr& x) const { return DelOpr{x.nt, x.opr, x.at, x.count}; }
        EditOp operator()(const DelOpr& x) const { return InsOpr{x.nt, x.opr, x.at, x.count}; }
        EditOp operator()(const RelOpr& x) const { return RelOpr{x.nt, x.to, x.from, x.at}; }
        EditOp operator()(const InsRule& x) const { return DelRule{x.nt, x.terminal}; }
        EditOp operator()(const DelRule& x) const { return InsRule{x.nt, x.terminal}; }
        EditOp operator()(const InsTree& x) const { return DelTree{x.nt, x.tree, x.at}; }
        EditOp operator()(const DelTree& x) const { return InsTree{x.nt, x.tree, x.at}; }
        EditOp operator()(const InsTreeRule& x) const { return DelTreeRule{x.nt, x.terminal, x.tree}; }
        EditOp operator()(const DelTreeRule& x) const { return InsTreeRule{x.nt, x.terminal, x.tree}; }
    };
    return std::visit(Inverter{}, op);
}

} // namespace rtgmap
