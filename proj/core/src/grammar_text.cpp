#include "rtgmap/grammar_text.hpp"

#include <sstream>

#include "rtgmap/errors.hpp"

namespace rtgmap {

namespace {

std::string strip(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

bool valid_name(const std::string& s) {
    if (s.empty()) return false;
    if (!std::isalpha(static_cast<unsigned char>(s[0])) && s[0] != '_') return false;
    for (char c : s)
        if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') return false;
    return s != "epsilon";
}

} // namespace

Grammar parse_grammar(const std::string& text) {
    std::vector<RawRule> rules;
    std::set<std::string> starts;
    bool saw_start_header = false;

    std::istringstream in(text);
    std::string raw;
    std::size_t lineno = 0;
    while (std::getline(in, raw)) {
        ++lineno;
        std::string line = strip(raw);
        std::size_t hash = line.find('#');
        if (hash != std::string::npos) line = strip(line.substr(0, hash));
        if (line.empty()) continue;

        if (line.rfind("start:", 0) == 0) {
            saw_start_header = true;
            std::istringstream names(line.substr(6));
            std::string name;
            while (names >> name) {
                if (!valid_name(name))
                    throw SyntaxError("bad start symbol '" + name + "'", lineno, 0);
                starts.insert(name);
            }
            continue;
        }

        std::size_t arrow = line.find("->");
        if (arrow == std::string::npos)
            throw SyntaxError("expected `X -> label [regex]`", lineno, 0);
        std::string nt = strip(line.substr(0, arrow));
        if (!valid_name(nt)) throw SyntaxError("bad non-terminal '" + nt + "'", lineno, 0);

        std::string rhs = strip(line.substr(arrow + 2));
        std::size_t open = rhs.find('[');
        if (open == std::string::npos || rhs.back() != ']')
            throw SyntaxError("expected `label [regex]`", lineno, arrow + 2);
        std::string terminal = strip(rhs.substr(0, open));
        if (!valid_name(terminal))
            throw SyntaxError("bad terminal '" + terminal + "'", lineno, arrow + 2);
        std::string body = rhs.substr(open + 1, rhs.size() - open - 2);

        RegexTree tree;
        try {
            tree = regex_to_tree(body);
        } catch (const SyntaxError& e) {
            throw SyntaxError(std::string(e.what()) + " in rule " + nt, lineno, open + 1);
        }
        rules.push_back(RawRule{nt, terminal, std::move(tree)});
    }

    if (!saw_start_header) {
        // DTD-style default: symbols never used in a content model.
        std::set<std::string> used;
        for (const auto& r : rules)
            for (const auto& s : symbols_of(r.body)) used.insert(s);
        for (const auto& r : rules)
            if (!used.count(r.nt)) starts.insert(r.nt);
    }
    return normalize(rules, starts);
}

std::string serialize_grammar(const Grammar& g) {
    std::string out = "start:";
    for (const auto& s : g.starts()) out += " " + s;
    out += "\n";
    for (const auto& [nt, rule] : g.rules())
        out += nt + " -> " + rule.terminal + " [" + tree_to_regex(rule.body) + "]\n";
    return out;
}

} // namespace rtgmap
