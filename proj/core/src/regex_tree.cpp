#include "rtgmap/regex_tree.hpp"

#include <cctype>

#include "rtgmap/errors.hpp"

namespace rtgmap {

std::string node_label(const RegexTree& t) {
    switch (t.kind) {
        case RegexKind::Epsilon: return "epsilon";
        case RegexKind::Symbol: return t.symbol;
        case RegexKind::Choice: return "|";
        case RegexKind::Concat: return ".";
        case RegexKind::Star: return "*";
    }
    return "?";
}

const RegexTree* node_at(const RegexTree& t, const Position& p) {
    const RegexTree* cur = &t;
    for (std::size_t i = 0; i < p.depth(); ++i) {
        if (p[i] >= cur->children.size()) return nullptr;
        cur = &cur->children[p[i]];
    }
    return cur;
}

RegexTree* node_at(RegexTree& t, const Position& p) {
    return const_cast<RegexTree*>(node_at(static_cast<const RegexTree&>(t), p));
}

std::size_t tree_size(const RegexTree& t) {
    std::size_t n = 1;
    for (const auto& c : t.children) n += tree_size(c);
    return n;
}

namespace {

void collect_symbols(const RegexTree& t, std::set<std::string>& out) {
    if (t.kind == RegexKind::Symbol) out.insert(t.symbol);
    for (const auto& c : t.children) collect_symbols(c, out);
}

void collect_occurrences(const RegexTree& t, const std::string& name, Position here,
                         std::vector<Position>& out) {
    if (t.kind == RegexKind::Symbol && t.symbol == name) out.push_back(here);
    for (std::uint32_t i = 0; i < t.children.size(); ++i)
        collect_occurrences(t.children[i], name, here.child(i), out);
}

} // namespace

std::set<std::string> symbols_of(const RegexTree& t) {
    std::set<std::string> out;
    collect_symbols(t, out);
    return out;
}

std::vector<Position> occurrences_of(const RegexTree& t, const std::string& name) {
    std::vector<Position> out;
    collect_occurrences(t, name, Position::root(), out);
    return out;
}

const RegexTree* rule_node_at(const RuleTree& rt, const Position& p, bool* is_root) {
    if (is_root) *is_root = p.is_root();
    if (p.is_root()) return nullptr;
    if (p[0] != 0) return nullptr;
    return node_at(rt.body, p.strip_prefix(Position::root().child(0)));
}

namespace {

WellFormedReport check_body(const RegexTree& t, Position here) {
    WellFormedReport r;
    switch (t.kind) {
        case RegexKind::Epsilon:
        case RegexKind::Symbol:
            if (!t.children.empty()) {
                r.ok = false;
                r.condition = 2;
                r.where = here;
                r.detail = "leaf node with children";
                return r;
            }
            return r;
        case RegexKind::Star:
            if (t.children.size() != 1) {
                r.ok = false;
                r.condition = 3;
                r.where = here;
                r.detail = "star node must have exactly one child";
                return r;
            }
            break;
        case RegexKind::Choice:
        case RegexKind::Concat:
            if (t.children.empty()) {
                r.ok = false;
                r.condition = 3;
                r.where = here;
                r.detail = "operator node must have at least one child";
                return r;
            }
            break;
    }
    for (std::uint32_t i = 0; i < t.children.size(); ++i) {
        WellFormedReport c = check_body(t.children[i], here.child(i));
        if (!c.ok) return c;
    }
    return r;
}

} // namespace

WellFormedReport is_well_formed_body(const RegexTree& t) {
    return check_body(t, Position::root());
}

WellFormedReport is_well_formed(const RuleTree& rt) {
    WellFormedReport r;
    if (rt.terminal.empty()) {
        r.ok = false;
        r.condition = 1;
        r.detail = "root must be a terminal symbol";
        return r;
    }
    // Root arity one is built into the representation; condition (i) holds
    // whenever the terminal is set.
    WellFormedReport body = check_body(rt.body, Position::root().child(0));
    return body;
}

// ---------------------------------------------------------------------------
// Concrete syntax.
//
//   choice  := concat ('|' concat)*
//   concat  := starred ('.' starred)*
//   starred := atom '*'*
//   atom    := name | 'epsilon' | '(' choice ')'

namespace {

class RegexParser {
public:
    explicit RegexParser(const std::string& text) : text_(text) {}

    RegexTree parse() {
        RegexTree t = parse_choice();
        skip_ws();
        if (pos_ != text_.size())
            throw SyntaxError("unexpected character '" + std::string(1, text_[pos_]) + "' in regex", pos_);
        return t;
    }

private:
    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    bool eat(char c) {
        skip_ws();
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    RegexTree parse_choice() {
        std::vector<RegexTree> parts;
        parts.push_back(parse_concat());
        while (eat('|')) parts.push_back(parse_concat());
        if (parts.size() == 1) return std::move(parts[0]);
        return RegexTree::choice(std::move(parts));
    }

    RegexTree parse_concat() {
        std::vector<RegexTree> parts;
        parts.push_back(parse_starred());
        while (eat('.')) parts.push_back(parse_starred());
        if (parts.size() == 1) return std::move(parts[0]);
        return RegexTree::concat(std::move(parts));
    }

    RegexTree parse_starred() {
        RegexTree t = parse_atom();
        while (eat('*')) t = RegexTree::star(std::move(t));
        return t;
    }

    RegexTree parse_atom() {
        skip_ws();
        if (pos_ >= text_.size()) throw SyntaxError("regex ends unexpectedly", pos_);
        char c = text_[pos_];
        if (c == '(') {
            ++pos_;
            RegexTree inner = parse_choice();  // (R1) collapses to R1
            if (!eat(')')) throw SyntaxError("missing ')'", pos_);
            return inner;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t start = pos_;
            while (pos_ < text_.size() &&
                   (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
                ++pos_;
            std::string name = text_.substr(start, pos_ - start);
            if (name == "epsilon") return RegexTree::epsilon();
            return RegexTree::leaf(std::move(name));
        }
        throw SyntaxError("unexpected character '" + std::string(1, c) + "' in regex", pos_);
    }

    const std::string& text_;
    std::size_t pos_ = 0;
};

int precedence(RegexKind k) {
    switch (k) {
        case RegexKind::Choice: return 0;
        case RegexKind::Concat: return 1;
        case RegexKind::Star: return 2;
        default: return 3;
    }
}

void emit(const RegexTree& t, RegexKind parent, std::string& out) {
    // Unary choice/concat collapse: the syntax cannot express them.
    if ((t.kind == RegexKind::Choice || t.kind == RegexKind::Concat) && t.children.size() == 1) {
        emit(t.children[0], parent, out);
        return;
    }
    bool wrap = false;
    if (parent != RegexKind::Epsilon) {
        wrap = precedence(t.kind) < precedence(parent) ||
               (t.kind == parent && (t.kind == RegexKind::Choice || t.kind == RegexKind::Concat));
    }
    if (wrap) out += '(';
    switch (t.kind) {
        case RegexKind::Epsilon:
            out += "epsilon";
            break;
        case RegexKind::Symbol:
            out += t.symbol;
            break;
        case RegexKind::Star:
            emit(t.children[0], RegexKind::Star, out);
            out += '*';
            break;
        case RegexKind::Choice:
        case RegexKind::Concat: {
            char sep = t.kind == RegexKind::Choice ? '|' : '.';
            for (std::size_t i = 0; i < t.children.size(); ++i) {
                if (i) out += sep;
                emit(t.children[i], t.kind, out);
            }
            break;
        }
    }
    if (wrap) out += ')';
}

} // namespace

RegexTree regex_to_tree(const std::string& text) {
    return RegexParser(text).parse();
}

std::string tree_to_regex(const RegexTree& t) {
    std::string out;
    emit(t, RegexKind::Epsilon, out);
    return out;
}

} // namespace rtgmap
