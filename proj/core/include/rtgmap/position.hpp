#ifndef RTGMAP_POSITION_HPP
#define RTGMAP_POSITION_HPP

#include <compare>
#include <cstdint>
#include <string>
#include <vector>

namespace rtgmap {

/// Tree position: a sequence of child indices. The empty sequence is the
/// root, written `e` in the textual syntax.
class Position {
public:
    Position() = default;
    explicit Position(std::vector<std::uint32_t> steps) : steps_(std::move(steps)) {}

    static Position root() { return Position{}; }

    bool is_root() const { return steps_.empty(); }
    std::size_t depth() const { return steps_.size(); }
    std::uint32_t operator[](std::size_t i) const { return steps_[i]; }

    const std::vector<std::uint32_t>& steps() const { return steps_; }

    Position child(std::uint32_t i) const {
        Position p = *this;
        p.steps_.push_back(i);
        return p;
    }
    Position parent() const {
        Position p = *this;
        p.steps_.pop_back();
        return p;
    }
    std::uint32_t last() const { return steps_.back(); }

    bool is_prefix_of(const Position& other) const {
        if (steps_.size() > other.steps_.size()) return false;
        for (std::size_t i = 0; i < steps_.size(); ++i)
            if (steps_[i] != other.steps_[i]) return false;
        return true;
    }

    /// Suffix after a prefix; caller guarantees `prefix.is_prefix_of(*this)`.
    Position strip_prefix(const Position& prefix) const {
        return Position(std::vector<std::uint32_t>(steps_.begin() + static_cast<long>(prefix.depth()),
                                                   steps_.end()));
    }

    Position concat(const Position& suffix) const {
        Position p = *this;
        p.steps_.insert(p.steps_.end(), suffix.steps_.begin(), suffix.steps_.end());
        return p;
    }

    auto operator<=>(const Position&) const = default;

private:
    std::vector<std::uint32_t> steps_;
};

/// Dotted form, root printed as `e`.
std::string to_string(const Position& p);

/// Parses `e` or dot-separated non-negative integers.
Position parse_position(const std::string& text);

} // namespace rtgmap

#endif
