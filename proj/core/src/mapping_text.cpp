#include "rtgmap/mapping_text.hpp"

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

} // namespace

MappingFile parse_mapping_file(const std::string& text) {
    MappingFile out;
    std::istringstream in(text);
    std::string raw;
    std::size_t lineno = 0;
    while (std::getline(in, raw)) {
        ++lineno;
        std::string line = strip(raw);
        std::size_t hash = line.find('#');
        if (hash != std::string::npos) line = strip(line.substr(0, hash));
        if (line.empty()) continue;
        if (line.rfind("source:", 0) == 0) {
            out.source_ref = strip(line.substr(7));
            continue;
        }
        if (line.rfind("target:", 0) == 0) {
            out.target_ref = strip(line.substr(7));
            continue;
        }
        try {
            out.script.push_back(parse_edit_op(line));
        } catch (const SyntaxError& e) {
            throw SyntaxError(std::string(e.what()), lineno, 0);
        }
    }
    return out;
}

std::string serialize_mapping_file(const MappingFile& m) {
    std::string out;
    if (m.source_ref) out += "source: " + *m.source_ref + "\n";
    if (m.target_ref) out += "target: " + *m.target_ref + "\n";
    for (const auto& op : m.script) out += to_string(op) + "\n";
    return out;
}

} // namespace rtgmap
