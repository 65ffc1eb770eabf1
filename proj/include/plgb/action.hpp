#pragma once

#include "plgb/liebialg.hpp"

namespace plgb {

enum class Chirality { Left, Right };  // Left: triangleright (tilde fields); Right:
                                       // triangleleft (grave fields)

// Lie algebra action on the manifold: one vector field per fibre basis
// element, plus the induced action on frame elements.
class ActionSpec {
public:
    ActionSpec() = default;

    static ActionSpec make(FramePtr frame, const LieBialgebra* fibre, Chirality chirality,
                           std::vector<VectorField> fields, std::vector<std::vector<OneForm>>
                                                                form_action /* [basis][frame] */);

    Chirality chirality() const { return chirality_; }
    const LieBialgebra& fibre() const { return *fibre_; }
    const FramePtr& frame() const { return frame_; }
    const VectorField& field(size_t basis_index) const { return fields_[basis_index]; }
    const std::vector<OneForm>& form_action_row(size_t basis_index) const {
        return form_action_[basis_index];
    }

    ScalarExpr act_scalar(size_t basis_index, const ScalarExpr& p) const;
    OneForm act_form(size_t basis_index, const OneForm& form) const;

    // Load-time invariants: fields are quotient-compatible derivations with
    // consistent pairings; form_action agrees with the Cartan formula when
    // structure equations exist.
    void validate() const;

private:
    FramePtr frame_;
    const LieBialgebra* fibre_ = nullptr;
    Chirality chirality_ = Chirality::Left;
    std::vector<VectorField> fields_;
    std::vector<std::vector<OneForm>> form_action_;
};

// xi acting on {p,q} minus the PLG-action expansion; zero iff the bracket is
// covariant for this basis element on the pair (p, q).
ScalarExpr plg_action_defect(const ActionSpec& act, const PoissonStructure& pi,
                             size_t basis_index, const ScalarExpr& p, const ScalarExpr& q);

// Covariance defect of the connection on the pair (eta, tau):
//   xi(nabla_eta tau) - nabla_{xi eta} tau - nabla_eta (xi tau)
//   - sum (i_{delta1-field} eta)(delta2 acting on tau).
OneForm conn_covariance_defect(const ActionSpec& act, const PoissonStructure& pi,
                               const ContravariantConnection& conn, size_t basis_index,
                               const OneForm& eta, const OneForm& tau);

// Covariance of the Schouten bracket (needs structure equations):
//   xi[tau,eta] - [xi tau, eta] - [tau, xi eta] - (1/2) L_{Lie_{delta-bivector}}(tau, eta),
// the last term evaluated through the bivector-interior expansion.
OneForm schouten_covariance_defect(const ActionSpec& act, const PoissonStructure& pi,
                                   size_t basis_index, const OneForm& tau, const OneForm& eta);

}  // namespace plgb
