#include "plgb/randexpr.hpp"

namespace plgb {

ScalarExpr random_scalar(const RingPtr& ring, const FramePtr& frame, std::mt19937_64& rng,
                         int degree_bound) {
    std::vector<size_t> usable;
    for (size_t i = 0; i < ring->size(); ++i) {
        if (ring->is_localization(i)) continue;
        if (frame && !frame->has_d_entry(i)) continue;
        usable.push_back(i);
    }
    std::uniform_int_distribution<int> nterms(1, 3);
    std::uniform_int_distribution<int> coeff(-3, 3);
    std::uniform_int_distribution<int> pick_deg(0, degree_bound);
    TermMap t;
    const int n = nterms(rng);
    for (int k = 0; k < n; ++k) {
        Monomial m(ring->size(), 0);
        int deg = pick_deg(rng);
        for (int step = 0; step < deg && !usable.empty(); ++step) {
            const size_t g = usable[std::uniform_int_distribution<size_t>(
                0, usable.size() - 1)(rng)];
            if (ring->is_laurent(g) && std::uniform_int_distribution<int>(0, 1)(rng))
                m[g] -= 1;
            else
                m[g] += 1;
        }
        int c = coeff(rng);
        if (c == 0) c = 1;
        auto it = t.find(m);
        if (it == t.end())
            t.emplace(std::move(m), Rational(c));
        else
            it->second += c;
    }
    return ScalarExpr::from_terms(ring, std::move(t));
}

OneForm random_oneform(const RingPtr& ring, const FramePtr& frame, std::mt19937_64& rng,
                       int degree_bound) {
    std::vector<ScalarExpr> coords;
    coords.reserve(frame->size());
    for (size_t i = 0; i < frame->size(); ++i)
        coords.push_back(random_scalar(ring, frame, rng, degree_bound));
    return OneForm(frame, std::move(coords));
}

}  // namespace plgb
