#pragma once

#include <bit>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace lam {

using AltIndex = std::size_t;

// Ordered finite set of alternatives, N >= 3, ids unique and non-empty.
class Universe {
public:
    static constexpr std::size_t max_size = 64;

    Universe() = default;
    explicit Universe(std::vector<std::string> ids);

    std::size_t size() const { return ids_.size(); }
    const std::string& id(AltIndex i) const { return ids_.at(i); }
    const std::vector<std::string>& ids() const { return ids_; }
    bool contains(std::string_view id) const;
    // Throws InvalidParameter for unknown ids.
    AltIndex index(std::string_view id) const;

    friend bool operator==(const Universe& a, const Universe& b) { return a.ids_ == b.ids_; }

private:
    std::vector<std::string> ids_;
    std::map<std::string, AltIndex, std::less<>> lookup_;
};

// A menu is a subset of the universe stored as a bitmask over alternative
// indices. Menus order lexicographically by their ascending member lists,
// so {x,y} < {x,y,z} < {x,z} < {y,z}.
class Menu {
public:
    using Bits = std::uint64_t;

    constexpr Menu() = default;
    Menu(std::initializer_list<AltIndex> members);
    explicit Menu(const std::vector<AltIndex>& members);

    static constexpr Menu from_bits(Bits bits) {
        Menu m;
        m.bits_ = bits;
        return m;
    }
    static Menu full(std::size_t n);

    constexpr Bits bits() const { return bits_; }
    constexpr bool empty() const { return bits_ == 0; }
    constexpr std::size_t size() const { return static_cast<std::size_t>(std::popcount(bits_)); }
    constexpr bool contains(AltIndex i) const { return i < 64 && ((bits_ >> i) & 1u) != 0; }
    constexpr bool contains(Menu other) const { return (other.bits_ & ~bits_) == 0; }

    Menu with(AltIndex i) const { return from_bits(bits_ | (Bits{1} << i)); }
    Menu without(AltIndex i) const { return from_bits(bits_ & ~(Bits{1} << i)); }
    Menu intersect(Menu o) const { return from_bits(bits_ & o.bits_); }

    std::vector<AltIndex> members() const;

    friend constexpr bool operator==(Menu a, Menu b) { return a.bits_ == b.bits_; }
    friend std::strong_ordering operator<=>(Menu a, Menu b);

private:
    Bits bits_ = 0;
};

// All menus with at least `min_size` members, in Menu order.
std::vector<Menu> all_menus(std::size_t n, std::size_t min_size = 2);

// Members joined by ';' in universe order, e.g. "x;y;z".
std::string format_menu(const Universe& universe, Menu menu);
// Inverse of format_menu; member order in the text is irrelevant.
// Throws InvalidParameter on unknown, duplicate or empty members.
Menu parse_menu(const Universe& universe, std::string_view text);

}  // namespace lam
