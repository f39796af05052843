#include "rtgmap/xml_tree.hpp"

#include <cctype>

#include "rtgmap/errors.hpp"

namespace rtgmap {

bool XmlTree::operator<(const XmlTree& o) const {
    auto a = preorder_labels(*this);
    auto b = preorder_labels(o);
    if (a != b) return a < b;
    // Preorder labels do not determine structure; break ties structurally.
    return to_term_string(*this) < to_term_string(o);
}

std::size_t tree_size(const XmlTree& t) {
    std::size_t n = 1;
    for (const auto& c : t.children) n += tree_size(c);
    return n;
}

const XmlTree* node_at(const XmlTree& t, const Position& p) {
    const XmlTree* cur = &t;
    for (std::size_t i = 0; i < p.depth(); ++i) {
        if (p[i] >= cur->children.size()) return nullptr;
        cur = &cur->children[p[i]];
    }
    return cur;
}

XmlTree* node_at(XmlTree& t, const Position& p) {
    return const_cast<XmlTree*>(node_at(static_cast<const XmlTree&>(t), p));
}

void replace_at(XmlTree& t, const Position& p, XmlTree sub) {
    XmlTree* n = node_at(t, p);
    *n = std::move(sub);
}

namespace {

void collect_labels(const XmlTree& t, std::vector<std::string>& out) {
    out.push_back(t.label);
    for (const auto& c : t.children) collect_labels(c, out);
}

void collect_positions(const XmlTree& t, Position here, std::vector<Position>& out) {
    out.push_back(here);
    for (std::uint32_t i = 0; i < t.children.size(); ++i)
        collect_positions(t.children[i], here.child(i), out);
}

} // namespace

std::vector<std::string> preorder_labels(const XmlTree& t) {
    std::vector<std::string> out;
    collect_labels(t, out);
    return out;
}

std::vector<Position> all_positions(const XmlTree& t) {
    std::vector<Position> out;
    collect_positions(t, Position::root(), out);
    return out;
}

std::string to_term_string(const XmlTree& t) {
    std::string out = t.label;
    if (!t.children.empty()) {
        out += '(';
        for (std::size_t i = 0; i < t.children.size(); ++i) {
            if (i) out += ',';
            out += to_term_string(t.children[i]);
        }
        out += ')';
    }
    return out;
}

namespace {

class TermParser {
public:
    explicit TermParser(const std::string& text) : text_(text) {}

    XmlTree parse() {
        XmlTree t = parse_node();
        skip_ws();
        if (pos_ != text_.size()) throw SyntaxError("trailing characters in term", pos_);
        return t;
    }

private:
    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    XmlTree parse_node() {
        skip_ws();
        std::size_t start = pos_;
        while (pos_ < text_.size() &&
               (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
            ++pos_;
        if (start == pos_) throw SyntaxError("expected a label in term", pos_);
        XmlTree t;
        t.label = text_.substr(start, pos_ - start);
        skip_ws();
        if (pos_ < text_.size() && text_[pos_] == '(') {
            ++pos_;
            while (true) {
                t.children.push_back(parse_node());
                skip_ws();
                if (pos_ < text_.size() && text_[pos_] == ',') {
                    ++pos_;
                    continue;
                }
                break;
            }
            if (pos_ >= text_.size() || text_[pos_] != ')')
                throw SyntaxError("missing ')' in term", pos_);
            ++pos_;
        }
        return t;
    }

    const std::string& text_;
    std::size_t pos_ = 0;
};

class XmlParser {
public:
    explicit XmlParser(const std::string& text) : text_(text) {}

    XmlTree parse() {
        skip_misc();
        XmlTree t = parse_element();
        skip_misc();
        if (pos_ != text_.size()) throw SyntaxError("content after root element", pos_);
        return t;
    }

private:
    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    bool starts_with(const char* s) const {
        return text_.compare(pos_, std::char_traits<char>::length(s), s) == 0;
    }

    void skip_until(const std::string& end) {
        std::size_t at = text_.find(end, pos_);
        if (at == std::string::npos) throw SyntaxError("unterminated markup", pos_);
        pos_ = at + end.size();
    }

    // Whitespace, comments, processing instructions, DOCTYPE.
    void skip_misc() {
        while (true) {
            skip_ws();
            if (starts_with("<!--")) {
                skip_until("-->");
            } else if (starts_with("<?")) {
                skip_until("?>");
            } else if (starts_with("<!DOCTYPE")) {
                skip_until(">");
            } else {
                return;
            }
        }
    }

    std::string parse_name() {
        std::size_t start = pos_;
        while (pos_ < text_.size() &&
               (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_' ||
                text_[pos_] == '-' || text_[pos_] == ':' || text_[pos_] == '.'))
            ++pos_;
        if (start == pos_) throw SyntaxError("expected element name", pos_);
        return text_.substr(start, pos_ - start);
    }

    void skip_attributes() {
        while (true) {
            skip_ws();
            if (pos_ >= text_.size()) throw SyntaxError("unterminated tag", pos_);
            char c = text_[pos_];
            if (c == '>' || c == '/') return;
            parse_name();
            skip_ws();
            if (pos_ < text_.size() && text_[pos_] == '=') {
                ++pos_;
                skip_ws();
                if (pos_ >= text_.size() || (text_[pos_] != '"' && text_[pos_] != '\''))
                    throw SyntaxError("expected quoted attribute value", pos_);
                char q = text_[pos_++];
                std::size_t end = text_.find(q, pos_);
                if (end == std::string::npos) throw SyntaxError("unterminated attribute value", pos_);
                pos_ = end + 1;
            }
        }
    }

    XmlTree parse_element() {
        if (pos_ >= text_.size() || text_[pos_] != '<')
            throw SyntaxError("expected '<'", pos_);
        ++pos_;
        XmlTree t;
        t.label = parse_name();
        skip_attributes();
        if (text_[pos_] == '/') {
            ++pos_;
            if (pos_ >= text_.size() || text_[pos_] != '>') throw SyntaxError("expected '>'", pos_);
            ++pos_;
            return t;
        }
        ++pos_;  // '>'
        while (true) {
            // Text content is ignored.
            while (pos_ < text_.size() && text_[pos_] != '<') ++pos_;
            if (pos_ >= text_.size()) throw SyntaxError("unterminated element " + t.label, pos_);
            if (starts_with("<!--")) {
                skip_until("-->");
                continue;
            }
            if (starts_with("</")) {
                pos_ += 2;
                std::string name = parse_name();
                if (name != t.label)
                    throw SyntaxError("mismatched close tag </" + name + "> for <" + t.label + ">", pos_);
                skip_ws();
                if (pos_ >= text_.size() || text_[pos_] != '>') throw SyntaxError("expected '>'", pos_);
                ++pos_;
                return t;
            }
            t.children.push_back(parse_element());
        }
    }

    const std::string& text_;
    std::size_t pos_ = 0;
};

void serialize_indent(const XmlTree& t, int depth, std::string& out) {
    out.append(static_cast<std::size_t>(depth) * 2, ' ');
    if (t.children.empty()) {
        out += '<' + t.label + "/>\n";
        return;
    }
    out += '<' + t.label + ">\n";
    for (const auto& c : t.children) serialize_indent(c, depth + 1, out);
    out.append(static_cast<std::size_t>(depth) * 2, ' ');
    out += "</" + t.label + ">\n";
}

} // namespace

XmlTree parse_term_string(const std::string& text) {
    return TermParser(text).parse();
}

XmlTree parse_xml(const std::string& text) {
    return XmlParser(text).parse();
}

std::string serialize_xml(const XmlTree& t) {
    std::string out;
    serialize_indent(t, 0, out);
    return out;
}

} // namespace rtgmap
