#pragma once

#include "plgb/action.hpp"

namespace plgb {

// Forward-declared aggregate from geometry.hpp; induce_base returns the
// pieces needed to assemble a standalone base spec.
struct InducedBase {
    RingPtr ring;
    FramePtr frame;  // frame = generator differentials, with the module
                     // relation oriented through the localized denominator
    PoissonStructure poisson;
    ContravariantConnection connection;
    // denominator-free representatives of the connection values, keyed
    // "gen|dgen", coordinates over the base frame before reduction
    std::map<std::string, std::vector<ScalarExpr>> connection_polynomial;
    // base values of the residual action, when one was supplied upstairs
    std::optional<std::vector<std::vector<ScalarExpr>>> residual_fields;  // [basis][gen]
};

// A principal-bundle structure over one total-space geometry.
class BundleData {
public:
    struct BaseGenerator {
        std::string name;
        ScalarExpr upstairs;
    };

    static BundleData make(FramePtr total_frame, const PoissonStructure* pi,
                           const ContravariantConnection* conn, const ActionSpec* action,
                           const XiTensor* xi, std::vector<BaseGenerator> base_generators,
                           std::vector<RingSpec::Relation> base_relations,
                           std::vector<std::string> base_denominators, int degree_bound,
                           const ActionSpec* residual_action);

    const ActionSpec& action() const { return *action_; }
    const ActionSpec* residual_action() const { return residual_; }
    const XiTensor& xi() const { return *xi_; }
    const PoissonStructure& poisson() const { return *pi_; }
    const ContravariantConnection& connection() const { return *conn_; }
    const FramePtr& total_frame() const { return frame_; }
    const std::vector<BaseGenerator>& base_generators() const { return base_gens_; }
    int degree_bound() const { return degree_bound_; }

    // ver: components xi -> i_{field(xi)}(form).
    std::vector<ScalarExpr> vertical_components(const OneForm& form) const;

    // true iff every vertical component vanishes; witness names the first
    // nonzero component.
    bool is_horizontal(const OneForm& form, std::string* witness = nullptr) const;

    // i_{xi}(nabla_eta tau) - sum i_{Xi*1}(eta) i_{Xi*2}(tau) - pi(eta, d i_{xi} tau)
    ScalarExpr transversality_defect(size_t basis_index, const OneForm& eta,
                                     const OneForm& tau) const;

    // i_{xi}[eta,tau] - pi(eta, d i_xi tau) + pi(d i_xi eta, tau)
    //   + (1/2) i_{delta-bivector}(eta ^ tau)
    ScalarExpr vertical_schouten_defect(size_t basis_index, const OneForm& eta,
                                        const OneForm& tau) const;

    // Invariance/relation checks on the declared base generators.
    void validate() const;

    InducedBase induce_base() const;

    std::vector<std::string> base_gen_names() const;
    bool act_form_is_zero(size_t basis_index, const OneForm& form) const;

private:
    BundleData() = default;

    // Expresses an upstairs scalar as a base polynomial (normal-form
    // monomials up to the degree bound); throws when not expressible.
    ScalarExpr express_in_base(const RingPtr& base_ring, const ScalarExpr& upstairs_value,
                               const std::string& what) const;

    FramePtr frame_;
    const PoissonStructure* pi_ = nullptr;
    const ContravariantConnection* conn_ = nullptr;
    const ActionSpec* action_ = nullptr;
    const XiTensor* xi_ = nullptr;
    const ActionSpec* residual_ = nullptr;
    std::vector<BaseGenerator> base_gens_;
    std::vector<RingSpec::Relation> base_rels_;
    std::vector<std::string> base_dens_;
    int degree_bound_ = 6;
};

}  // namespace plgb
