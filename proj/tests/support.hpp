#pragma once

#include <jester/io.hpp>

#include <string>

namespace jester::testing {

inline std::string data_path(const std::string& name) { return std::string(JESTER_DATA_DIR) + "/" + name; }

inline group::Word W(std::string_view text) { return group::parse_word(text); }

/// Equality of the conjugacy classes of u or u^-1 and v, tested on cyclic
/// reductions by trying every rotation.
inline bool same_up_to_rotation_inversion_conjugation(const group::Word& u, const group::Word& v)
{
    const auto a = group::cyclic_reduce(u).reduced;
    const auto b = group::cyclic_reduce(v).reduced;
    if (a.size() != b.size())
        return false;
    for (const auto& c : {a, group::inverse(a)}) {
        for (std::size_t r = 0; r < c.size() || r == 0; ++r) {
            group::Word rotated(c.begin() + static_cast<std::ptrdiff_t>(r), c.end());
            rotated.insert(rotated.end(), c.begin(), c.begin() + static_cast<std::ptrdiff_t>(r));
            if (rotated == b)
                return true;
        }
    }
    return false;
}

inline links::LinkDiagram mazur_diagram() { return io::diagram_from_json(io::read_json(data_path("mazur_link.json"))); }

} // namespace jester::testing
