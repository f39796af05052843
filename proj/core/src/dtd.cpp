#include "rtgmap/dtd.hpp"

#include <cctype>
#include <map>

#include "rtgmap/errors.hpp"

namespace rtgmap {

namespace {

struct Decl {
    std::string element;
    std::string model;  // raw text between the outer parentheses, or "" for EMPTY/#PCDATA
};

struct DtdScanner {
    const std::string& text;
    std::size_t pos = 0;

    void skip_ws_and_comments() {
        while (pos < text.size()) {
            if (std::isspace(static_cast<unsigned char>(text[pos]))) {
                ++pos;
            } else if (text.compare(pos, 4, "<!--") == 0) {
                std::size_t end = text.find("-->", pos);
                if (end == std::string::npos) throw SyntaxError("unterminated comment", pos);
                pos = end + 3;
            } else {
                return;
            }
        }
    }

    std::vector<Decl> scan() {
        std::vector<Decl> decls;
        while (true) {
            skip_ws_and_comments();
            if (pos >= text.size()) return decls;
            if (text.compare(pos, 9, "<!ELEMENT") != 0) {
                if (text.compare(pos, 9, "<!ATTLIST") == 0)
                    throw UnsupportedFeature("attribute lists");
                if (text.compare(pos, 8, "<!ENTITY") == 0) throw UnsupportedFeature("entities");
                throw SyntaxError("expected <!ELEMENT ...>", pos);
            }
            pos += 9;
            skip_ws_and_comments();
            std::string name = scan_name();
            skip_ws_and_comments();
            Decl d;
            d.element = name;
            if (text.compare(pos, 5, "EMPTY") == 0) {
                pos += 5;
            } else if (text[pos] == '(') {
                std::size_t start = pos;
                int depth = 0;
                while (pos < text.size()) {
                    if (text[pos] == '(') ++depth;
                    if (text[pos] == ')') {
                        --depth;
                        if (depth == 0) break;
                    }
                    ++pos;
                }
                if (depth != 0) throw SyntaxError("unbalanced parentheses in content model", start);
                ++pos;  // closing paren
                // Postfix * on the whole group belongs to the model.
                std::string model = text.substr(start, pos - start);
                while (pos < text.size() && (text[pos] == '*' || text[pos] == '+' || text[pos] == '?')) {
                    model += text[pos];
                    ++pos;
                }
                d.model = model;
            } else {
                throw SyntaxError("expected a content model", pos);
            }
            skip_ws_and_comments();
            if (pos >= text.size() || text[pos] != '>')
                throw SyntaxError("expected '>' closing the declaration", pos);
            ++pos;
            decls.push_back(std::move(d));
        }
    }

    std::string scan_name() {
        std::size_t start = pos;
        while (pos < text.size() &&
               (std::isalnum(static_cast<unsigned char>(text[pos])) || text[pos] == '_' ||
                text[pos] == '-' || text[pos] == '.'))
            ++pos;
        if (start == pos) throw SyntaxError("expected an element name", pos);
        return text.substr(start, pos - start);
    }
};

// Content model parser over element names. Output leaves carry the element
// names; non-terminal assignment happens afterwards.
class ModelParser {
public:
    ModelParser(const std::string& text) : text_(text) {}

    RegexTree parse() {
        RegexTree t = parse_choice();
        skip_ws();
        if (pos_ != text_.size()) throw SyntaxError("trailing content in model", pos_);
        return t;
    }

    bool mixed() const { return pcdata_ && saw_element_; }
    bool pcdata() const { return pcdata_; }

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
        parts.push_back(parse_seq());
        while (eat('|')) parts.push_back(parse_seq());
        if (parts.size() == 1) return std::move(parts[0]);
        return RegexTree::choice(std::move(parts));
    }

    RegexTree parse_seq() {
        std::vector<RegexTree> parts;
        parts.push_back(parse_starred());
        while (eat(',')) parts.push_back(parse_starred());
        if (parts.size() == 1) return std::move(parts[0]);
        return RegexTree::concat(std::move(parts));
    }

    RegexTree parse_starred() {
        RegexTree t = parse_atom();
        while (true) {
            skip_ws();
            if (pos_ < text_.size() && text_[pos_] == '*') {
                ++pos_;
                t = RegexTree::star(std::move(t));
            } else if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '?')) {
                throw UnsupportedFeature(std::string("occurrence indicator '") + text_[pos_] + "'");
            } else {
                return t;
            }
        }
    }

    RegexTree parse_atom() {
        skip_ws();
        if (pos_ >= text_.size()) throw SyntaxError("model ends unexpectedly", pos_);
        if (text_[pos_] == '(') {
            ++pos_;
            RegexTree t = parse_choice();
            if (!eat(')')) throw SyntaxError("missing ')'", pos_);
            return t;
        }
        if (text_[pos_] == '#') {
            if (text_.compare(pos_, 7, "#PCDATA") == 0) {
                pos_ += 7;
                pcdata_ = true;
                return RegexTree::epsilon();
            }
            throw SyntaxError("unknown token in model", pos_);
        }
        std::size_t start = pos_;
        while (pos_ < text_.size() &&
               (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_' ||
                text_[pos_] == '-' || text_[pos_] == '.'))
            ++pos_;
        if (start == pos_) throw SyntaxError("expected an element name in model", pos_);
        saw_element_ = true;
        return RegexTree::leaf(text_.substr(start, pos_ - start));
    }

    const std::string& text_;
    std::size_t pos_ = 0;
    bool pcdata_ = false;
    bool saw_element_ = false;
};

std::string capitalized(const std::string& name) {
    std::string out = name;
    if (!out.empty()) out[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(out[0])));
    // DTD names may contain '-' or '.'; the grammar charset does not.
    for (char& c : out)
        if (c == '-' || c == '.') c = '_';
    return out;
}

} // namespace

Grammar import_dtd(const std::string& text) {
    DtdScanner scanner{text};
    std::vector<Decl> decls = scanner.scan();
    if (decls.empty()) throw SyntaxError("no element declarations");

    // Parse models, remembering element reference order for leaf synthesis.
    std::vector<std::pair<std::string, RegexTree>> parsed;  // element -> body over element names
    std::vector<std::string> referenced_order;
    std::set<std::string> referenced;
    std::set<std::string> declared;
    for (const auto& d : decls) {
        if (declared.count(d.element))
            throw SyntaxError("element " + d.element + " declared twice");
        declared.insert(d.element);
        RegexTree body = RegexTree::epsilon();
        if (!d.model.empty()) {
            ModelParser mp(d.model);
            body = mp.parse();
            if (mp.mixed()) throw UnsupportedFeature("#PCDATA mixed with child elements");
            if (mp.pcdata()) body = RegexTree::epsilon();
        }
        for (const auto& s : symbols_of(body)) {
            if (!referenced.count(s)) {
                referenced.insert(s);
                referenced_order.push_back(s);
            }
        }
        parsed.emplace_back(d.element, std::move(body));
    }

    // Assign one non-terminal per element name: declaration order first,
    // then undeclared (PCDATA leaf) elements in reference order.
    std::map<std::string, std::string> nt_of;
    std::set<std::string> taken;
    auto assign = [&](const std::string& element) {
        std::string base = capitalized(element);
        std::string name = base;
        for (unsigned k = 2; taken.count(name); ++k) name = base + "_" + std::to_string(k);
        taken.insert(name);
        nt_of[element] = name;
    };
    for (const auto& d : decls) assign(d.element);
    for (const auto& e : referenced_order)
        if (!nt_of.count(e)) assign(e);

    auto rename = [&](const RegexTree& t, auto&& self) -> RegexTree {
        RegexTree out = t;
        if (out.kind == RegexKind::Symbol) out.symbol = nt_of.at(out.symbol);
        for (auto& c : out.children) c = self(c, self);
        return out;
    };

    std::vector<RawRule> rules;
    for (auto& [element, body] : parsed)
        rules.push_back(RawRule{nt_of.at(element), element, rename(body, rename)});
    for (const auto& e : referenced_order)
        if (!declared.count(e)) rules.push_back(RawRule{nt_of.at(e), e, RegexTree::epsilon()});

    // Start symbols: declared elements never used in any model.
    std::set<std::string> starts;
    for (const auto& d : decls)
        if (!referenced.count(d.element)) starts.insert(nt_of.at(d.element));
    if (starts.empty()) throw SyntaxError("no root element: every declared element is referenced");

    return normalize(rules, starts);
}

} // namespace rtgmap
