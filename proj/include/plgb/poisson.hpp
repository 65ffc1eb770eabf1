#pragma once

#include "plgb/calculus.hpp"

namespace plgb {

// Antisymmetric biderivation given by its values on generator pairs.
// {g,g} = 0 is structural: only pairs i<j are stored.
class PoissonStructure {
public:
    PoissonStructure() = default;

    // Pairs keyed "g1,g2" in either order; storing both orders or a diagonal
    // entry is rejected. Values for localization inverses are derived by the
    // quotient rule.
    static PoissonStructure make(RingPtr ring, const std::map<std::string, ScalarExpr>& table);

    const RingPtr& ring() const { return ring_; }

    // Value on a generator pair, with sign.
    const ScalarExpr& pair_value(size_t i, size_t j, bool& negate) const;

    ScalarExpr bracket(const ScalarExpr& p, const ScalarExpr& q) const;

    // {g_i, g_j} with sign applied.
    ScalarExpr gen_bracket(size_t i, size_t j) const;

    // {g, q} where the partials of q are already known (hot path helper).
    ScalarExpr bracket_against_partials(size_t gen_index,
                                        const std::vector<ScalarExpr>& dq) const;

    // Poisson bivector against two 1-forms.
    ScalarExpr apply(const OneForm& a, const OneForm& b) const;

    // {p,{q,r}} + {q,{r,p}} + {r,{p,q}}
    ScalarExpr jacobiator(const ScalarExpr& p, const ScalarExpr& q, const ScalarExpr& r) const;

    // Throws if some {relation, generator} fails to vanish.
    void check_respects_relations() const;

private:
    RingPtr ring_;
    // full antisymmetric matrix over all generators (localizations included),
    // upper triangle i<j
    std::vector<std::vector<ScalarExpr>> pi_;
};

// Contravariant connection, stored on the spanning set (generator, frame
// element) as in the source data; extended function-linearly in the
// direction and by the bracket Leibniz rule in the argument.
class ContravariantConnection {
public:
    ContravariantConnection() = default;

    // Keys "gen|frame" with OneForm values.
    static ContravariantConnection make(FramePtr frame,
                                        std::map<std::string, OneForm> table);

    const FramePtr& frame() const { return frame_; }
    const OneForm& entry(size_t gen_index, size_t frame_index) const;
    bool has_entry(size_t gen_index, size_t frame_index) const;

    // nabla_eta tau
    OneForm apply(const PoissonStructure& pi, const OneForm& eta, const OneForm& tau) const;

    // Direction-slot well-definedness on the quotient: the presentation of
    // d(relation) contracted with the table must vanish. Argument-slot: the
    // connection applied to the (identically zero) relation 1-form vanishes.
    void check_respects_relations(const PoissonStructure& pi) const;

private:
    RingPtr ring_;
    FramePtr frame_;
    std::vector<std::vector<std::optional<OneForm>>> table_;  // [gen][frame]
};

// Schouten bracket of 1-forms: [p dg, q dh] = pq d{g,h} + p{g,q} dh - q{h,p} dg.
OneForm schouten(const PoissonStructure& pi, const OneForm& a, const OneForm& b);

// nabla_eta tau - nabla_tau eta - [eta,tau]
OneForm compatibility_defect(const ContravariantConnection& conn, const PoissonStructure& pi,
                             const OneForm& eta, const OneForm& tau);

// R(eta,tau)sigma = nabla_eta nabla_tau sigma - nabla_tau nabla_eta sigma
//                   - nabla_[eta,tau] sigma
OneForm curvature(const ContravariantConnection& conn, const PoissonStructure& pi,
                  const OneForm& eta, const OneForm& tau, const OneForm& sigma);

}  // namespace plgb
