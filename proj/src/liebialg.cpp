#include "plgb/liebialg.hpp"

#include <sstream>

#include "plgb/linsolve.hpp"

namespace plgb {

size_t LieBialgebra::index_of(const std::string& name) const {
    for (size_t i = 0; i < basis.size(); ++i)
        if (basis[i] == name) return i;
    throw ring_error("unknown basis element '" + name + "'");
}

bool DefectTensor::is_zero() const {
    for (const auto& v : values)
        if (v != 0) return false;
    return true;
}

Rational& DefectTensor::at(const std::vector<size_t>& idx) {
    size_t flat = 0;
    for (size_t k = 0; k < dims.size(); ++k) flat = flat * dims[k] + idx[k];
    return values[flat];
}

std::string DefectTensor::first_nonzero() const {
    for (size_t flat = 0; flat < values.size(); ++flat) {
        if (values[flat] == 0) continue;
        std::vector<size_t> idx(dims.size());
        size_t rest = flat;
        for (size_t k = dims.size(); k-- > 0;) {
            idx[k] = rest % dims[k];
            rest /= dims[k];
        }
        return describe(idx) + " = " + to_string(values[flat]);
    }
    return {};
}

static DefectTensor make_tensor(std::vector<size_t> dims,
                                std::function<std::string(const std::vector<size_t>&)> desc) {
    DefectTensor t;
    t.dims = std::move(dims);
    size_t n = 1;
    for (auto d : t.dims) n *= d;
    t.values.assign(n, Rational(0));
    t.describe = std::move(desc);
    return t;
}

DefectTensor check_lie(const LieBialgebra& L) {
    const size_t n = L.dim();
    auto t = make_tensor({n, n, n, n}, [&L](const std::vector<size_t>& i) {
        return "jacobi(" + L.basis[i[0]] + "," + L.basis[i[1]] + "," + L.basis[i[2]] +
               ") on " + L.basis[i[3]];
    });
    for (size_t a = 0; a < n; ++a)
        for (size_t b = 0; b < n; ++b)
            for (size_t c = 0; c < n; ++c)
                for (size_t m = 0; m < n; ++m) {
                    Rational acc(0);
                    for (size_t k = 0; k < n; ++k) {
                        acc += L.c[a][b][k] * L.c[k][c][m];
                        acc += L.c[b][c][k] * L.c[k][a][m];
                        acc += L.c[c][a][k] * L.c[k][b][m];
                    }
                    t.at({a, b, c, m}) = acc;
                }
    return t;
}

std::pair<DefectTensor, DefectTensor> check_cobracket(const LieBialgebra& L) {
    const size_t n = L.dim();
    // co-Jacobi == Jacobi of the dual bracket
    auto cj = make_tensor({n, n, n, n}, [&L](const std::vector<size_t>& i) {
        return "co-jacobi(f_" + L.basis[i[0]] + ",f_" + L.basis[i[1]] + ",f_" + L.basis[i[2]] +
               ") on f_" + L.basis[i[3]];
    });
    for (size_t a = 0; a < n; ++a)
        for (size_t b = 0; b < n; ++b)
            for (size_t c = 0; c < n; ++c)
                for (size_t m = 0; m < n; ++m) {
                    Rational acc(0);
                    for (size_t k = 0; k < n; ++k) {
                        acc += L.dual_bracket(a, b, k) * L.dual_bracket(k, c, m);
                        acc += L.dual_bracket(b, c, k) * L.dual_bracket(k, a, m);
                        acc += L.dual_bracket(c, a, k) * L.dual_bracket(k, b, m);
                    }
                    cj.at({a, b, c, m}) = acc;
                }

    // cocycle: delta([a,b]) - ad_a(delta b) + ad_b(delta a)
    auto cc = make_tensor({n, n, n, n}, [&L](const std::vector<size_t>& i) {
        return "cocycle(" + L.basis[i[0]] + "," + L.basis[i[1]] + ") component " +
               L.basis[i[2]] + "(x)" + L.basis[i[3]];
    });
    for (size_t a = 0; a < n; ++a)
        for (size_t b = 0; b < n; ++b)
            for (size_t m1 = 0; m1 < n; ++m1)
                for (size_t m2 = 0; m2 < n; ++m2) {
                    Rational acc(0);
                    for (size_t k = 0; k < n; ++k) {
                        acc += L.c[a][b][k] * L.dlt[k][m1][m2];
                        // ad_a(delta b) = [a, b1] (x) b2 + b1 (x) [a, b2]
                        acc -= L.dlt[b][k][m2] * L.c[a][k][m1];
                        acc -= L.dlt[b][m1][k] * L.c[a][k][m2];
                        acc += L.dlt[a][k][m2] * L.c[b][k][m1];
                        acc += L.dlt[a][m1][k] * L.c[b][k][m2];
                    }
                    cc.at({a, b, m1, m2}) = acc;
                }
    return {std::move(cj), std::move(cc)};
}

DefectTensor check_xi_compat(const LieBialgebra& L, const XiTensor& X) {
    const size_t n = L.dim();
    if (X.dim() != n) throw ring_error("Xi tensor dimension mismatch");
    auto t = make_tensor({n, n, n}, [&L](const std::vector<size_t>& i) {
        return "Xi(f_" + L.basis[i[0]] + ",f_" + L.basis[i[1]] + ") antisymmetrisation on f_" +
               L.basis[i[2]];
    });
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j)
            for (size_t k = 0; k < n; ++k)
                t.at({i, j, k}) = X.x[i][j][k] - X.x[j][i][k] - L.dual_bracket(i, j, k);
    return t;
}

DefectTensor check_bicovariant(const LieBialgebra& L, const XiTensor& X) {
    const size_t n = L.dim();
    if (X.dim() != n) throw ring_error("Xi tensor dimension mismatch");
    auto t = make_tensor({n, n, n, n}, [&L](const std::vector<size_t>& i) {
        return "bicovariance(eta=" + L.basis[i[0]] + ", xi=" + L.basis[i[1]] + ") component " +
               L.basis[i[2]] + "(x)" + L.basis[i[3]];
    });
    for (size_t a = 0; a < n; ++a)          // eta
        for (size_t b = 0; b < n; ++b)      // xi
            for (size_t m1 = 0; m1 < n; ++m1)
                for (size_t m2 = 0; m2 < n; ++m2) {
                    Rational acc(0);
                    for (size_t k = 0; k < n; ++k) {
                        // Xi*_{[eta,xi]}
                        acc += L.c[a][b][k] * X.x[m1][m2][k];
                        // [Xi*1_eta, xi] (x) Xi*2_eta
                        acc -= X.x[k][m2][a] * L.c[k][b][m1];
                        // Xi*1_eta (x) [Xi*2_eta, xi]
                        acc -= X.x[m1][k][a] * L.c[k][b][m2];
                        // delta1_xi (x) [eta, delta2_xi]
                        acc -= L.dlt[b][m1][k] * L.c[a][k][m2];
                    }
                    t.at({a, b, m1, m2}) = acc;
                }
    return t;
}

DefectTensor check_prelie(const LieBialgebra& L, const XiTensor& X) {
    const size_t n = L.dim();
    auto t = make_tensor({n, n, n, n}, [&L](const std::vector<size_t>& i) {
        return "pre-lie associator(f_" + L.basis[i[0]] + ",f_" + L.basis[i[1]] + ",f_" +
               L.basis[i[2]] + ") on f_" + L.basis[i[3]];
    });
    // A(p,q,r) = Xi_p Xi_q r - Xi_{Xi(p,q)} r, antisymmetrised in (p,q)
    auto assoc = [&](size_t p, size_t q, size_t r, size_t m) {
        Rational acc(0);
        for (size_t k = 0; k < n; ++k) {
            acc += X.x[q][r][k] * X.x[p][k][m];
            acc -= X.x[p][q][k] * X.x[k][r][m];
        }
        return acc;
    };
    for (size_t p = 0; p < n; ++p)
        for (size_t q = 0; q < n; ++q)
            for (size_t r = 0; r < n; ++r)
                for (size_t m = 0; m < n; ++m)
                    t.at({p, q, r, m}) = assoc(p, q, r, m) - assoc(q, p, r, m);
    return t;
}

XiTensor xi_from_connection(const GroupConnectionData& g) {
    const RingPtr& ring = g.ring;
    const FramePtr& frame = g.frame;
    if (!ring->point_evaluation())
        throw ring_error("xi extraction needs an identity point evaluation");
    const auto& pt = *ring->point_evaluation();
    const size_t n = frame->size();
    const size_t ngen = ring->base_size();

    // frame-dual derivations on generators: e~_k(g) = coord k of dg
    std::vector<std::vector<ScalarExpr>> dual(ngen, std::vector<ScalarExpr>(n));
    for (size_t gi = 0; gi < ngen; ++gi) {
        const OneForm dg = frame->d_generator(gi);
        for (size_t k = 0; k < n; ++k) dual[gi][k] = dg.coord(k);
    }

    // solve E X_col = T_col at the identity for each (i,j)
    LinearSystem sys(ngen, n);
    for (size_t gi = 0; gi < ngen; ++gi)
        for (size_t k = 0; k < n; ++k) sys.at(gi, k) = dual[gi][k].evaluate(pt);

    std::vector<std::vector<Rational>> rhss;
    rhss.reserve(n * n);
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j) {
            std::vector<Rational> rhs(ngen);
            for (size_t gi = 0; gi < ngen; ++gi)
                rhs[gi] = g.conn->entry(gi, i).coord(j).evaluate(pt);
            rhss.push_back(std::move(rhs));
        }
    const auto sols = sys.solve(rhss);

    XiTensor X;
    X.x.assign(n, std::vector<std::vector<Rational>>(n, std::vector<Rational>(n, Rational(0))));
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j) {
            const auto& sol = sols[i * n + j];
            if (!sol)
                throw ring_error(
                    "no constant Xi matches the connection at the identity (frame is not "
                    "translation-invariant?)");
            for (size_t k = 0; k < n; ++k) X.x[k][i][j] = (*sol)[k];
        }

    // constancy: table(g, i) == sum_k e~_k(g) X[k][i][.] symbolically
    for (size_t gi = 0; gi < ngen; ++gi)
        for (size_t i = 0; i < n; ++i)
            for (size_t j = 0; j < n; ++j) {
                ScalarExpr expect = ScalarExpr::zero(ring);
                for (size_t k = 0; k < n; ++k)
                    expect = expect + dual[gi][k].scaled(X.x[k][i][j]);
                if (!(g.conn->entry(gi, i).coord(j) == expect)) {
                    std::ostringstream msg;
                    msg << "Xi is not constant: connection entry ("
                        << ring->generator_names()[gi] << ", " << frame->names()[i]
                        << ") coordinate " << frame->names()[j]
                        << " differs from its invariant synthesis";
                    throw ring_error(msg.str());
                }
            }
    return X;
}

}  // namespace plgb
