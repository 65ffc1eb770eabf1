#include "plgb/spinconn.hpp"

namespace plgb {

std::vector<SpinDefect> validate_spin_connection(const SpinConnectionData& s,
                                                 const BundleData& b) {
    std::vector<SpinDefect> defects;
    const LieBialgebra& L = b.action().fibre();
    const size_t n = L.dim();
    const RingPtr& ring = b.total_frame()->ring();

    // verticality: i_{xi}(omega^i) e_i = xi for every basis xi
    for (size_t x = 0; x < n; ++x)
        for (size_t i = 0; i < n; ++i) {
            const ScalarExpr v = interior(b.action().field(x), s.omega[i]);
            const ScalarExpr expect =
                ScalarExpr::constant(ring, x == i ? Rational(1) : Rational(0));
            if (!(v == expect))
                defects.push_back({"verticality i_" + L.basis[x] + "(omega^" + L.basis[i] + ")",
                                   (v - expect).str()});
        }

    // equivariance: xi(omega^i) (x) e_i + omega^i (x) [xi, e_i] = 0
    auto equivariance = [&](const std::vector<OneForm>& rows, const std::string& label) {
        for (size_t x = 0; x < n; ++x)
            for (size_t m = 0; m < n; ++m) {
                OneForm acc = b.action().act_form(x, rows[m]);
                for (size_t i = 0; i < n; ++i) {
                    const Rational c = L.c[x][i][m];
                    if (c != 0) acc = acc + rows[i].scaled(ScalarExpr::constant(ring, c));
                }
                if (!acc.is_zero())
                    defects.push_back({"equivariance of " + label + " (xi=" + L.basis[x] +
                                           ", component " + L.basis[m] + ")",
                                       acc.str()});
            }
    };
    equivariance(s.omega, "omega");
    equivariance(s.alpha, "alpha");

    for (size_t i = 0; i < n; ++i) {
        std::string witness;
        if (!b.is_horizontal(s.alpha[i], &witness))
            defects.push_back({"horizontality of alpha^" + L.basis[i], witness});
    }
    return defects;
}

OneForm covariant_derivative(const SpinConnectionData& s, const BundleData& b,
                             const ScalarExpr& p) {
    const size_t n = b.action().fibre().dim();
    OneForm acc = differential(p, b.total_frame());
    for (size_t i = 0; i < n; ++i)
        acc = acc - s.omega[i].scaled(b.action().act_scalar(i, p));
    std::string witness;
    if (!b.is_horizontal(acc, &witness))
        throw ring_error("covariant derivative output is not horizontal: " + witness);
    return acc;
}

OneForm gamma_correction(const SpinConnectionData& s, const BundleData& b, const ScalarExpr& p) {
    const LieBialgebra& L = b.action().fibre();
    const size_t n = L.dim();
    const XiTensor& X = b.xi();
    OneForm acc = OneForm::zero(b.total_frame());
    for (size_t i = 0; i < n; ++i) {
        // Xi*1_{e_i}(Xi*2_{e_i}(p)) omega^i
        ScalarExpr second = ScalarExpr::zero(b.total_frame()->ring());
        for (size_t u = 0; u < n; ++u)
            for (size_t v = 0; v < n; ++v) {
                const Rational c = X.x[u][v][i];
                if (c == 0) continue;
                second = second +
                         b.action().act_scalar(u, b.action().act_scalar(v, p)).scaled(c);
            }
        acc = acc + s.omega[i].scaled(second);
        // - nabla^X_{d e~_i(p)} omega^i
        const ScalarExpr ei_p = b.action().act_scalar(i, p);
        if (!ei_p.is_zero()) {
            const OneForm dir = differential(ei_p, b.total_frame());
            acc = acc - b.connection().apply(b.poisson(), dir, s.omega[i]);
        }
        // - e~_i(p) alpha^i
        acc = acc - s.alpha[i].scaled(ei_p);
    }
    std::string witness;
    if (!b.is_horizontal(acc, &witness))
        throw ring_error("first-order correction is not horizontal (transversality violated): " +
                         witness);
    return acc;
}

OneForm sigma_correction(const SpinConnectionData& s, const BundleData& b, const OneForm& tau) {
    std::string witness;
    if (!b.is_horizontal(tau, &witness))
        throw ring_error("sigma correction requires a horizontal argument: " + witness);
    const size_t n = b.action().fibre().dim();
    OneForm acc = OneForm::zero(b.total_frame());
    for (size_t i = 0; i < n; ++i) {
        const OneForm moved = b.action().act_form(i, tau);
        if (moved.is_zero()) continue;
        acc = acc - b.connection().apply(b.poisson(), moved, s.omega[i]);
    }
    return acc;
}

OneForm leibniz_gap(const SpinConnectionData& s, const BundleData& b, const ScalarExpr& a,
                    const ScalarExpr& p) {
    const size_t n = b.action().fibre().dim();
    for (size_t i = 0; i < n; ++i)
        if (!b.action().act_scalar(i, a).is_zero())
            throw ring_error("leibniz gap requires a basic first argument");
    const OneForm lhs = gamma_correction(s, b, a * p);
    const OneForm da = differential(a, b.total_frame());
    const OneForm dp = differential(p, b.total_frame());
    OneForm rhs = gamma_correction(s, b, p).scaled(a);
    rhs = rhs + b.connection().apply(b.poisson(), da, covariant_derivative(s, b, p));
    rhs = rhs - b.connection().apply(b.poisson(), dp, da);
    rhs = rhs - covariant_derivative(s, b, b.poisson().bracket(a, p));
    return lhs - rhs;
}

std::optional<Rational> homogeneous_degree(const BundleData& b, const ScalarExpr& p) {
    if (b.action().fibre().dim() != 1) return std::nullopt;
    if (p.is_zero()) return Rational(0);
    const ScalarExpr moved = b.action().act_scalar(0, p);
    // moved == w * p for a rational w?
    if (moved.is_zero()) return Rational(0);
    if (moved.terms().size() != p.terms().size()) return std::nullopt;
    auto it = moved.terms().begin();
    auto jt = p.terms().begin();
    std::optional<Rational> w;
    for (; it != moved.terms().end(); ++it, ++jt) {
        if (it->first != jt->first) return std::nullopt;
        const Rational ratio = it->second / jt->second;
        if (!w)
            w = ratio;
        else if (*w != ratio)
            return std::nullopt;
    }
    return w;
}

}  // namespace plgb
