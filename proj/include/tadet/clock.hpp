#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <string>

namespace tadet {

enum class ClockKind { original, level, silent_level };

// A clock is identified by its name; the kind records where it came from.
class ClockId {
public:
    ClockId() = default;
    explicit ClockId(std::string name) : name_(std::move(name)) {}

    static ClockId original(std::string name) { return ClockId(std::move(name)); }
    // x<i>, reset by the i-th observable transition of a path (x0 at the root).
    static ClockId level(int i);
    // x<i>_<j>, reset by the j-th silent transition after observable level i.
    static ClockId silent_level(int i, int j);

    const std::string& name() const noexcept { return name_; }
    ClockKind kind() const noexcept { return kind_; }
    int level_index() const noexcept { return level_; }
    int silent_index() const noexcept { return silent_; }

    friend bool operator==(const ClockId& a, const ClockId& b) { return a.name_ == b.name_; }
    friend std::strong_ordering operator<=>(const ClockId& a, const ClockId& b)
    {
        return a.name_ <=> b.name_;
    }

private:
    std::string name_;
    ClockKind kind_ = ClockKind::original;
    int level_ = -1;
    int silent_ = -1;
};

}  // namespace tadet

template <>
struct std::hash<tadet::ClockId> {
    std::size_t operator()(const tadet::ClockId& c) const noexcept
    {
        return std::hash<std::string>{}(c.name());
    }
};
