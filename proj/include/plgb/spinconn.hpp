#pragma once

#include "plgb/bundle.hpp"

namespace plgb {

// Spin connection data on a bundle: the g-valued 1-form omega (one frame
// coordinate row per fibre basis element) and the optional first-order
// correction alpha (horizontal, equivariant; zero by default).
struct SpinConnectionData {
    std::vector<OneForm> omega;  // [fibre basis]
    std::vector<OneForm> alpha;  // [fibre basis]
};

struct SpinDefect {
    std::string what;
    std::string value;  // normal-form witness, nonzero
};

// Verticality i_{xi}(omega^i) e_i = xi, equivariance of omega and alpha, and
// horizontality of alpha. Defects are collected, not thrown.
std::vector<SpinDefect> validate_spin_connection(const SpinConnectionData& s,
                                                 const BundleData& b);

// nabla_P p = dp - omega^i e~_i(p); output checked horizontal.
OneForm covariant_derivative(const SpinConnectionData& s, const BundleData& b,
                             const ScalarExpr& p);

// First-order correction of nabla_P:
//   Gamma(p) = Xi*1_{e_i}(Xi*2_{e_i}(p)) omega^i - nabla^X_{d e~_i(p)} omega^i
//              - e~_i(p) alpha^i,
// summed over the fibre basis; output checked horizontal.
OneForm gamma_correction(const SpinConnectionData& s, const BundleData& b, const ScalarExpr& p);

// First-order generalised braiding: sigma(tau) = -nabla^X_{e_i acting on tau} omega^i,
// for horizontal tau.
OneForm sigma_correction(const SpinConnectionData& s, const BundleData& b, const OneForm& tau);

// Gamma(a p) - a Gamma(p) - nabla^X_{da} nabla_P p + nabla^X_{dp} da
// + nabla_P {a,p}; requires a basic (fibre-invariant).
OneForm leibniz_gap(const SpinConnectionData& s, const BundleData& b, const ScalarExpr& a,
                    const ScalarExpr& p);

// Degree of a monomial under the weight field (the single fibre generator's
// action must be diagonal on monomials); used for the closed-form checks.
std::optional<Rational> homogeneous_degree(const BundleData& b, const ScalarExpr& p);

}  // namespace plgb
