#include "lam/menu.hpp"

#include <algorithm>

#include "lam/errors.hpp"

namespace lam {

Universe::Universe(std::vector<std::string> ids) : ids_(std::move(ids)) {
    if (ids_.size() < 3) {
        throw InvalidParameter("universe needs at least 3 alternatives, got " +
                               std::to_string(ids_.size()));
    }
    if (ids_.size() > max_size) {
        throw InvalidParameter("universe is limited to " + std::to_string(max_size) +
                               " alternatives");
    }
    for (AltIndex i = 0; i < ids_.size(); ++i) {
        const std::string& id = ids_[i];
        if (id.empty()) throw InvalidParameter("empty alternative id");
        if (id.find_first_of(";,\n\r") != std::string::npos) {
            throw InvalidParameter("alternative id contains a reserved character: '" + id + "'");
        }
        if (!lookup_.emplace(id, i).second) {
            throw InvalidParameter("duplicate alternative id '" + id + "'");
        }
    }
}

bool Universe::contains(std::string_view id) const { return lookup_.find(id) != lookup_.end(); }

AltIndex Universe::index(std::string_view id) const {
    auto it = lookup_.find(id);
    if (it == lookup_.end()) {
        throw InvalidParameter("unknown alternative '" + std::string(id) + "'");
    }
    return it->second;
}

Menu::Menu(std::initializer_list<AltIndex> members) {
    for (AltIndex i : members) *this = with(i);
}

Menu::Menu(const std::vector<AltIndex>& members) {
    for (AltIndex i : members) *this = with(i);
}

Menu Menu::full(std::size_t n) {
    return from_bits(n >= 64 ? ~Bits{0} : ((Bits{1} << n) - 1));
}

std::vector<AltIndex> Menu::members() const {
    std::vector<AltIndex> out;
    out.reserve(size());
    for (Bits b = bits_; b != 0; b &= b - 1) out.push_back(static_cast<AltIndex>(std::countr_zero(b)));
    return out;
}

std::strong_ordering operator<=>(Menu a, Menu b) {
    Menu::Bits x = a.bits_;
    Menu::Bits y = b.bits_;
    while (x != 0 && y != 0) {
        int lx = std::countr_zero(x);
        int ly = std::countr_zero(y);
        if (lx != ly) return lx < ly ? std::strong_ordering::less : std::strong_ordering::greater;
        x &= x - 1;
        y &= y - 1;
    }
    if (x == y) return std::strong_ordering::equal;
    return x == 0 ? std::strong_ordering::less : std::strong_ordering::greater;
}

std::vector<Menu> all_menus(std::size_t n, std::size_t min_size) {
    std::vector<Menu> out;
    const Menu::Bits limit = Menu::full(n).bits();
    for (Menu::Bits b = 1; b != 0 && b <= limit; ++b) {
        Menu m = Menu::from_bits(b);
        if (m.size() >= min_size) out.push_back(m);
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::string format_menu(const Universe& universe, Menu menu) {
    std::string out;
    for (AltIndex i : menu.members()) {
        if (!out.empty()) out += ';';
        out += universe.id(i);
    }
    return out;
}

Menu parse_menu(const Universe& universe, std::string_view text) {
    Menu m;
    std::size_t start = 0;
    while (true) {
        std::size_t end = text.find(';', start);
        std::string_view part = text.substr(start, end == std::string_view::npos ? text.npos : end - start);
        if (part.empty()) throw InvalidParameter("empty member in menu '" + std::string(text) + "'");
        AltIndex i = universe.index(part);
        if (m.contains(i)) {
            throw InvalidParameter("duplicate member '" + std::string(part) + "' in menu '" +
                                   std::string(text) + "'");
        }
        m = m.with(i);
        if (end == std::string_view::npos) break;
        start = end + 1;
    }
    return m;
}

}  // namespace lam
