#pragma once

#include <functional>

#include "plgb/poisson.hpp"

namespace plgb {

// Finite-dimensional Lie bialgebra given by structure constants c[i][j][k]
// ([e_i,e_j] = sum c[i][j][k] e_k) and cobracket components d[i][j][k]
// (delta(e_i) = sum d[i][j][k] e_j (x) e_k).
struct LieBialgebra {
    std::vector<std::string> basis;
    std::vector<std::vector<std::vector<Rational>>> c;    // antisymmetric in (i,j)
    std::vector<std::vector<std::vector<Rational>>> dlt;  // antisymmetric in (j,k)

    size_t dim() const { return basis.size(); }
    size_t index_of(const std::string& name) const;

    // Dual bracket [f^i,f^j](e_k) = dlt[k][i][j].
    Rational dual_bracket(size_t i, size_t j, size_t k) const { return dlt[k][i][j]; }
};

// Xi tensor: Xi(f^i, f^j) = sum X[i][j][k] f^k, equivalently
// Xi*(e_k) = sum X[i][j][k] e_i (x) e_j.
struct XiTensor {
    std::vector<std::vector<std::vector<Rational>>> x;
    size_t dim() const { return x.size(); }
    bool operator==(const XiTensor& o) const { return x == o.x; }
};

// A defect tensor of arbitrary arity with named axes; all-zero means the
// identity holds. first_nonzero() gives a printable witness.
struct DefectTensor {
    std::vector<size_t> dims;
    std::vector<Rational> values;  // row-major
    std::function<std::string(const std::vector<size_t>&)> describe;

    bool is_zero() const;
    std::string first_nonzero() const;  // empty when zero
    Rational& at(const std::vector<size_t>& idx);
};

// Jacobi defect of the bracket.
DefectTensor check_lie(const LieBialgebra& L);

// (co-Jacobi defect of the dual bracket, 1-cocycle defect).
std::pair<DefectTensor, DefectTensor> check_cobracket(const LieBialgebra& L);

// Xi(phi,psi) - Xi(psi,phi) - [phi,psi]_{g*}.
DefectTensor check_xi_compat(const LieBialgebra& L, const XiTensor& X);

// Dual-form bicovariance: Xi*_{[eta,xi]} - [Xi*1,xi](x)Xi*2 - Xi*1(x)[Xi*2,xi]
// - delta1_xi (x) [eta, delta2_xi], per basis pair (eta, xi).
DefectTensor check_bicovariant(const LieBialgebra& L, const XiTensor& X);

// Antisymmetrised associator of Xi on basis triples (pre-Lie defect).
DefectTensor check_prelie(const LieBialgebra& L, const XiTensor& X);

// Extraction of the constant Xi from a translation-invariant group
// connection: evaluates the table and the frame-dual fields at the identity
// point, solves the linear system, then re-verifies the defining relation
// symbolically on every generator (constancy).
struct GroupConnectionData {
    RingPtr ring;                        // must carry a point evaluation
    FramePtr frame;                      // left-invariant frame, dim == fibre dim
    const ContravariantConnection* conn; // table on (generator, frame)
};
XiTensor xi_from_connection(const GroupConnectionData& g);

}  // namespace plgb
