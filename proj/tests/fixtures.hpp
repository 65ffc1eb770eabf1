#pragma once

#include <string>

#include "plgb/geometry.hpp"

namespace fixtures {

inline std::string data_path(const std::string& name) {
    return std::string(PLGB_DATA_DIR) + "/" + name;
}

inline const plgb::GeometrySpec& su2() {
    static auto spec = plgb::GeometrySpec::load(data_path("su2_selfaction.json"));
    return *spec;
}

inline const plgb::GeometrySpec& s1() {
    static auto spec = plgb::GeometrySpec::load(data_path("s1_group.json"));
    return *spec;
}

inline const plgb::GeometrySpec& hopf() {
    static auto spec = plgb::GeometrySpec::load(data_path("su2_hopf.json"));
    return *spec;
}

inline plgb::ScalarExpr expr(const plgb::GeometrySpec& g, const std::string& text) {
    return plgb::parse_expr(g.ring, text);
}

// 1-form from per-frame coordinate expressions, e.g. {{"e0", "-a"}}.
inline plgb::OneForm form(const plgb::GeometrySpec& g,
                          const std::map<std::string, std::string>& coords) {
    std::vector<plgb::ScalarExpr> c(g.frame->size(), plgb::ScalarExpr::zero(g.ring));
    for (const auto& [fname, text] : coords)
        c[g.frame->index_of(fname)] = plgb::parse_expr(g.ring, text);
    return plgb::OneForm(g.frame, std::move(c));
}

// Vector field dual to one frame element: its action on a generator is the
// corresponding coordinate of the generator's differential.
inline plgb::VectorField frame_dual(const plgb::GeometrySpec& g, size_t frame_index) {
    std::map<std::string, plgb::ScalarExpr> tab;
    for (size_t i = 0; i < g.ring->size(); ++i) {
        if (g.ring->is_localization(i) || !g.frame->has_d_entry(i)) continue;
        tab.emplace(g.ring->generator_names()[i], g.frame->d_generator(i).coord(frame_index));
    }
    std::vector<plgb::ScalarExpr> pairings(g.frame->size(), plgb::ScalarExpr::zero(g.ring));
    pairings[frame_index] = plgb::ScalarExpr::constant(g.ring, 1);
    return plgb::VectorField{plgb::Derivation(g.ring, std::move(tab)), std::move(pairings)};
}

}  // namespace fixtures
