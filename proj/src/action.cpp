#include "plgb/action.hpp"

namespace plgb {

ActionSpec ActionSpec::make(FramePtr frame, const LieBialgebra* fibre, Chirality chirality,
                            std::vector<VectorField> fields,
                            std::vector<std::vector<OneForm>> form_action) {
    ActionSpec a;
    a.frame_ = std::move(frame);
    a.fibre_ = fibre;
    a.chirality_ = chirality;
    a.fields_ = std::move(fields);
    a.form_action_ = std::move(form_action);
    if (a.fields_.size() != fibre->dim() || a.form_action_.size() != fibre->dim())
        throw ring_error("action tables must cover every fibre basis element");
    return a;
}

ScalarExpr ActionSpec::act_scalar(size_t basis_index, const ScalarExpr& p) const {
    return fields_[basis_index].action(p);
}

OneForm ActionSpec::act_form(size_t basis_index, const OneForm& form) const {
    return lie_derivative(fields_[basis_index], form, &form_action_[basis_index]);
}

void ActionSpec::validate() const {
    for (size_t b = 0; b < fibre_->dim(); ++b) {
        fields_[b].action.check_respects_relations();
        fields_[b].check_consistency(*frame_);
        if (frame_->has_d2()) {
            for (size_t i = 0; i < frame_->size(); ++i) {
                const OneForm cartan = lie_derivative(fields_[b], OneForm::unit(frame_, i));
                if (!(cartan == form_action_[b][i]))
                    throw ring_error("form action of '" + fibre_->basis[b] + "' on '" +
                                     frame_->names()[i] + "' disagrees with the Cartan formula");
            }
        }
    }
}

ScalarExpr plg_action_defect(const ActionSpec& act, const PoissonStructure& pi,
                             size_t basis_index, const ScalarExpr& p, const ScalarExpr& q) {
    const LieBialgebra& L = act.fibre();
    const size_t n = L.dim();
    ScalarExpr lhs = act.act_scalar(basis_index, pi.bracket(p, q));
    ScalarExpr rhs = pi.bracket(act.act_scalar(basis_index, p), q) +
                     pi.bracket(p, act.act_scalar(basis_index, q));
    // cocycle term (delta1 p)(delta2 q)
    for (size_t u = 0; u < n; ++u)
        for (size_t v = 0; v < n; ++v) {
            const Rational c = L.dlt[basis_index][u][v];
            if (c == 0) continue;
            rhs = rhs + (act.act_scalar(u, p) * act.act_scalar(v, q)).scaled(c);
        }
    return lhs - rhs;
}

OneForm conn_covariance_defect(const ActionSpec& act, const PoissonStructure& pi,
                               const ContravariantConnection& conn, size_t basis_index,
                               const OneForm& eta, const OneForm& tau) {
    const LieBialgebra& L = act.fibre();
    const size_t n = L.dim();
    OneForm lhs = act.act_form(basis_index, conn.apply(pi, eta, tau));
    OneForm rhs = conn.apply(pi, act.act_form(basis_index, eta), tau) +
                  conn.apply(pi, eta, act.act_form(basis_index, tau));
    // (i_{delta1-field} eta)(delta2 acting on tau); the interior field is the
    // action's own field for delta1 (left actions: tilde, right: grave)
    for (size_t u = 0; u < n; ++u)
        for (size_t v = 0; v < n; ++v) {
            const Rational c = L.dlt[basis_index][u][v];
            if (c == 0) continue;
            const ScalarExpr iu = interior(act.field(u), eta);
            rhs = rhs + act.act_form(v, tau).scaled(iu.scaled(c));
        }
    return lhs - rhs;
}

OneForm schouten_covariance_defect(const ActionSpec& act, const PoissonStructure& pi,
                                   size_t basis_index, const OneForm& tau, const OneForm& eta) {
    const LieBialgebra& L = act.fibre();
    const size_t n = L.dim();
    OneForm lhs = act.act_form(basis_index, schouten(pi, tau, eta));
    OneForm rhs = schouten(pi, act.act_form(basis_index, tau), eta) +
                  schouten(pi, tau, act.act_form(basis_index, eta));

    // (1/2) Leibnizator of the Lie derivative along the delta bivector:
    //   (1/2)( L_{v^w}(tau^eta) - (i_{v^w} d tau) eta + (i_{v^w} d eta) tau )
    // with L_{v^w}(tau^eta) expanded as
    //   i_{v^w}(d tau) eta - i_{v^w}(d eta) tau + 2 i_v(tau) L_w eta + 2 i_w(eta) L_v tau.
    const TwoForm dtau = exterior_d(tau);
    const TwoForm deta = exterior_d(eta);
    for (size_t u = 0; u < n; ++u)
        for (size_t v = 0; v < n; ++v) {
            const Rational c = L.dlt[basis_index][u][v];
            if (c == 0) continue;
            // i_{v^w} = i_v i_w on the wedge; on a decomposable two-form this
            // is -interior2(v, w, .)
            const ScalarExpr ivw_dtau = -interior2(act.field(u), act.field(v), dtau);
            const ScalarExpr ivw_deta = -interior2(act.field(u), act.field(v), deta);
            OneForm lie_part = act.act_form(v, eta).scaled(interior(act.field(u), tau)) +
                               act.act_form(u, tau).scaled(interior(act.field(v), eta));
            OneForm bracket_part = eta.scaled(ivw_dtau) - tau.scaled(ivw_deta);
            // half of (bracket_part + 2 lie_part - bracket_part) = lie_part
            OneForm half_leibnizator =
                (bracket_part + lie_part + lie_part - bracket_part).scaled(
                    ScalarExpr::constant(eta.frame()->ring(), Rational(1, 2)));
            rhs = rhs + half_leibnizator.scaled(ScalarExpr::constant(eta.frame()->ring(), c));
        }
    return lhs - rhs;
}

}  // namespace plgb
