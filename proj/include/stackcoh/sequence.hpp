#pragma once

#include "stackcoh/fgab.hpp"

#include <string>
#include <vector>

namespace stackcoh {

/// A finite sequence of groups and maps with exactness checked at chosen spots.
struct ExactSequence {
    struct Spot {
        std::size_t index = 0;  // position in `groups`
        bool exact = false;
    };

    std::vector<std::string> labels;
    std::vector<FgAbGroup> groups;
    std::vector<GroupHom> maps;  // maps[i] : groups[i] -> groups[i + 1]
    std::vector<Spot> spots;

    [[nodiscard]] bool verdict() const {
        for (const auto& s : spots)
            if (!s.exact) return false;
        return true;
    }

    [[nodiscard]] std::string str() const {
        std::string out;
        for (std::size_t i = 0; i < groups.size(); ++i) {
            out += labels[i] + " = " + groups[i].str();
            for (const auto& s : spots)
                if (s.index == i) out += s.exact ? "  [exact]" : "  [NOT exact]";
            out += "\n";
        }
        out += std::string("verdict: ") + (verdict() ? "exact" : "not exact") + "\n";
        return out;
    }
};

/// Builds the sequence and checks exactness at every interior group, plus at
/// the ends when the sequence is understood to start or end with 0.
inline ExactSequence make_sequence(std::vector<std::string> labels, std::vector<GroupHom> maps,
                                   bool zero_before, bool zero_after) {
    ExactSequence s;
    s.labels = std::move(labels);
    s.maps = std::move(maps);
    if (s.maps.empty()) throw ValidationError("sequence needs at least one map");
    for (std::size_t i = 0; i + 1 < s.maps.size(); ++i)
        if (s.maps[i].target().ngens() != s.maps[i + 1].source().ngens())
            throw ValidationError("sequence maps are not composable at position " + std::to_string(i + 1));
    for (const auto& m : s.maps) s.groups.push_back(m.source());
    s.groups.push_back(s.maps.back().target());
    if (s.labels.size() != s.groups.size()) throw ValidationError("sequence label count mismatch");
    if (zero_before) s.spots.push_back({0, is_mono(s.maps.front())});
    for (std::size_t i = 0; i + 1 < s.maps.size(); ++i) s.spots.push_back({i + 1, is_exact_at(s.maps[i], s.maps[i + 1])});
    if (zero_after) s.spots.push_back({s.groups.size() - 1, is_epi(s.maps.back())});
    return s;
}

}  // namespace stackcoh
