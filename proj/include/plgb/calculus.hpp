#pragma once

#include <optional>

#include "plgb/ring.hpp"

namespace plgb {

class FrameSpec;
using FramePtr = std::shared_ptr<const FrameSpec>;

// Element of the 1-form module in frame coordinates. Coordinates are kept
// normalized; on frames with module relations the reduced coordinates are
// the canonical representative (see FrameSpec::reduce).
class OneForm {
public:
    OneForm() = default;
    OneForm(FramePtr frame, std::vector<ScalarExpr> coords);

    static OneForm zero(FramePtr frame);
    static OneForm unit(FramePtr frame, size_t frame_index);  // the frame element itself

    const FramePtr& frame() const { return frame_; }
    const std::vector<ScalarExpr>& coords() const { return coords_; }
    const ScalarExpr& coord(size_t i) const { return coords_[i]; }

    bool is_zero() const;
    OneForm operator-() const;
    OneForm operator+(const OneForm& o) const;
    OneForm operator-(const OneForm& o) const;
    OneForm scaled(const ScalarExpr& p) const;

    bool operator==(const OneForm& o) const;
    bool operator!=(const OneForm& o) const { return !(*this == o); }

    std::string str() const;

private:
    friend class FrameSpec;
    FramePtr frame_;
    std::vector<ScalarExpr> coords_;
};

// Antisymmetric 2-form; coordinates indexed by frame pairs i<j.
class TwoForm {
public:
    TwoForm() = default;
    explicit TwoForm(FramePtr frame);

    const FramePtr& frame() const { return frame_; }
    const ScalarExpr& coord(size_t i, size_t j) const;  // signed lookup, i != j
    void add(size_t i, size_t j, const ScalarExpr& v);  // antisymmetric accumulate

    bool is_zero() const;
    TwoForm operator+(const TwoForm& o) const;
    TwoForm scaled(const ScalarExpr& p) const;
    bool operator==(const TwoForm& o) const;

    std::string str() const;

private:
    FramePtr frame_;
    std::vector<ScalarExpr> coords_;  // pair-indexed, i<j row-major
    size_t pair_index(size_t i, size_t j) const;
};

// Derivation of the ring together with its frame pairings i_V(e^i).
struct VectorField {
    Derivation action;
    std::vector<ScalarExpr> pairings;

    // i_V(dg) computed through the d-table must reproduce action(g).
    void check_consistency(const FrameSpec& frame) const;
};

// Frame data for the 1-form module: d on generators, the inverse expression
// of each frame element through generator differentials, optional structure
// equations de^i, and optional module relations (reductions) for non-free
// frames arising on bundle bases.
class FrameSpec : public std::enable_shared_from_this<FrameSpec> {
public:
    struct DiffTerm {
        ScalarExpr coeff;
        size_t gen_index;
    };

    static FramePtr make(RingPtr ring, std::vector<std::string> names,
                         std::map<std::string, std::vector<std::pair<std::string, ScalarExpr>>>
                             d_table,  // gen -> frame coords
                         std::map<std::string, std::vector<std::pair<ScalarExpr, std::string>>>
                             in_differentials,  // frame -> sum of p * d(gen)
                         std::optional<std::map<std::string, std::vector<std::pair<std::string, ScalarExpr>>>>
                             d2 = std::nullopt);  // frame -> 2-form coords keyed "i,j"

    const RingPtr& ring() const { return ring_; }
    const std::vector<std::string>& names() const { return names_; }
    size_t size() const { return names_.size(); }
    size_t index_of(const std::string& name) const;
    bool has_d2() const { return d2_.has_value(); }
    const TwoForm& d2(size_t frame_index) const;
    const std::vector<DiffTerm>& in_differentials(size_t frame_index) const {
        return in_diff_[frame_index];
    }
    bool has_d_entry(size_t gen_index) const;

    // Canonical coordinates: substitutes reduced frame elements, normalizes.
    std::vector<ScalarExpr> reduce(std::vector<ScalarExpr> coords) const;
    bool is_reduced_direction(size_t frame_index) const { return reduction_[frame_index].has_value(); }

    // d of a generator, from the table (chain rule on localization inverses).
    OneForm d_generator(size_t gen_index) const;

    // Invariant checks, run at load time. Throw with the invariant name.
    void check_round_trip() const;
    void check_relations_closed() const;      // d(relation) == 0
    void check_d2_against_oracle() const;     // de^i = d(in_differentials)

    // Oracle: exterior derivative of the defining presentation of e^i.
    TwoForm d_of_presentation(size_t frame_index) const;

private:
    FrameSpec() = default;
    void derive_reductions();

    RingPtr ring_;
    std::vector<std::string> names_;
    std::map<std::string, size_t> index_;
    std::vector<std::optional<OneForm>> d_table_;  // per generator
    std::vector<std::vector<DiffTerm>> in_diff_;
    std::optional<std::vector<TwoForm>> d2_;
    std::vector<std::optional<OneForm>> reduction_;
    friend class OneForm;
};

// Exterior derivative on functions: Leibniz extension of the d-table.
OneForm differential(const ScalarExpr& p, const FramePtr& frame);

// p * d(q) in frame coordinates.
OneForm oneform_from_pdq(const ScalarExpr& p, const ScalarExpr& q, const FramePtr& frame);

// Presentation of a 1-form as sum of p * d(gen) through in_differentials.
std::vector<FrameSpec::DiffTerm> to_differential_presentation(const OneForm& form);

ScalarExpr interior(const VectorField& v, const OneForm& form);

TwoForm wedge(const OneForm& a, const OneForm& b);

// interior2(V, W, a^b) = i_V(a) i_W(b) - i_W(a) i_V(b)
ScalarExpr interior2(const VectorField& v, const VectorField& w, const TwoForm& form);

// Contraction of a 2-form down to a 1-form, i_V.
OneForm interior_one(const VectorField& v, const TwoForm& form);

// d on 1-forms (needs the structure equations).
TwoForm exterior_d(const OneForm& form);

// Lie derivative along V. The per-frame action table, when given, supplies
// L_V(e^i) directly; otherwise the Cartan formula with d2 is used.
OneForm lie_derivative(const VectorField& v, const OneForm& form,
                       const std::vector<OneForm>* frame_action = nullptr);

}  // namespace plgb
