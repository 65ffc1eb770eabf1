#pragma once

#include <random>

#include "plgb/calculus.hpp"

namespace plgb {

// Seeded random elements for property instances: small rational coefficients
// in {-3..3}\{0}, monomials bounded by the degree bound, Laurent generators
// allowed negative exponents. Localization inverses and generators without a
// d-table entry are excluded so differentials stay defined.
ScalarExpr random_scalar(const RingPtr& ring, const FramePtr& frame, std::mt19937_64& rng,
                         int degree_bound);

OneForm random_oneform(const RingPtr& ring, const FramePtr& frame, std::mt19937_64& rng,
                       int degree_bound);

}  // namespace plgb
