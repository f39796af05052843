#include "rtgmap/position.hpp"

#include "rtgmap/errors.hpp"

namespace rtgmap {

std::string to_string(const Position& p) {
    if (p.is_root()) return "e";
    std::string out;
    for (std::size_t i = 0; i < p.depth(); ++i) {
        if (i) out += '.';
        out += std::to_string(p[i]);
    }
    return out;
}

Position parse_position(const std::string& text) {
    if (text == "e") return Position::root();
    if (text.empty()) throw SyntaxError("empty position");
    std::vector<std::uint32_t> steps;
    std::size_t i = 0;
    while (i < text.size()) {
        if (!std::isdigit(static_cast<unsigned char>(text[i])))
            throw SyntaxError("bad position '" + text + "'", i);
        std::uint64_t v = 0;
        while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) {
            v = v * 10 + static_cast<std::uint64_t>(text[i] - '0');
            if (v > 0xffffffffULL) throw SyntaxError("position step too large", i);
            ++i;
        }
        steps.push_back(static_cast<std::uint32_t>(v));
        if (i < text.size()) {
            if (text[i] != '.') throw SyntaxError("bad position '" + text + "'", i);
            ++i;
            if (i == text.size()) throw SyntaxError("trailing dot in position", i);
        }
    }
    return Position(std::move(steps));
}

} // namespace rtgmap
