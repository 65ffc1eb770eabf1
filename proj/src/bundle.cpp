#include "plgb/bundle.hpp"

#include <functional>
#include <sstream>

#include "plgb/linsolve.hpp"

namespace plgb {

BundleData BundleData::make(FramePtr total_frame, const PoissonStructure* pi,
                            const ContravariantConnection* conn, const ActionSpec* action,
                            const XiTensor* xi, std::vector<BaseGenerator> base_generators,
                            std::vector<RingSpec::Relation> base_relations,
                            std::vector<std::string> base_denominators, int degree_bound,
                            const ActionSpec* residual_action) {
    BundleData b;
    b.frame_ = std::move(total_frame);
    b.pi_ = pi;
    b.conn_ = conn;
    b.action_ = action;
    b.xi_ = xi;
    b.base_gens_ = std::move(base_generators);
    b.base_rels_ = std::move(base_relations);
    b.base_dens_ = std::move(base_denominators);
    b.degree_bound_ = degree_bound;
    b.residual_ = residual_action;
    if (action->chirality() != Chirality::Left)
        throw ring_error("bundle structure group must act through a left (tilde) action");
    if (xi->dim() != action->fibre().dim())
        throw ring_error("fibre Xi tensor dimension mismatch");
    return b;
}

std::vector<ScalarExpr> BundleData::vertical_components(const OneForm& form) const {
    std::vector<ScalarExpr> out;
    out.reserve(action_->fibre().dim());
    for (size_t b = 0; b < action_->fibre().dim(); ++b)
        out.push_back(interior(action_->field(b), form));
    return out;
}

bool BundleData::is_horizontal(const OneForm& form, std::string* witness) const {
    const auto comps = vertical_components(form);
    for (size_t b = 0; b < comps.size(); ++b) {
        if (comps[b].is_zero()) continue;
        if (witness)
            *witness = "ver_" + action_->fibre().basis[b] + " = " + comps[b].str();
        return false;
    }
    return true;
}

ScalarExpr BundleData::transversality_defect(size_t basis_index, const OneForm& eta,
                                             const OneForm& tau) const {
    const RingPtr& ring = frame_->ring();
    const size_t n = action_->fibre().dim();
    ScalarExpr lhs = interior(action_->field(basis_index), conn_->apply(*pi_, eta, tau));
    // sum over Xi*(xi) = sum X[p][q][xi] e_p (x) e_q
    ScalarExpr xi_term = ScalarExpr::zero(ring);
    for (size_t p = 0; p < n; ++p)
        for (size_t q = 0; q < n; ++q) {
            const Rational c = xi_->x[p][q][basis_index];
            if (c == 0) continue;
            xi_term = xi_term + (interior(action_->field(p), eta) *
                                 interior(action_->field(q), tau))
                                    .scaled(c);
        }
    const ScalarExpr pi_term =
        pi_->apply(eta, differential(interior(action_->field(basis_index), tau), frame_));
    return lhs - xi_term - pi_term;
}

ScalarExpr BundleData::vertical_schouten_defect(size_t basis_index, const OneForm& eta,
                                                const OneForm& tau) const {
    const RingPtr& ring = frame_->ring();
    const LieBialgebra& L = action_->fibre();
    ScalarExpr lhs = interior(action_->field(basis_index), schouten(*pi_, eta, tau));
    ScalarExpr rhs =
        pi_->apply(eta, differential(interior(action_->field(basis_index), tau), frame_)) -
        pi_->apply(tau, differential(interior(action_->field(basis_index), eta), frame_));
    // -(1/2) i_{delta-bivector}(eta ^ tau), through the wedge
    const TwoForm w = wedge(eta, tau);
    ScalarExpr biv = ScalarExpr::zero(ring);
    for (size_t u = 0; u < L.dim(); ++u)
        for (size_t v = 0; v < L.dim(); ++v) {
            const Rational c = L.dlt[basis_index][u][v];
            if (c == 0) continue;
            biv = biv - interior2(action_->field(u), action_->field(v), w).scaled(c);
        }
    rhs = rhs - biv.scaled(Rational(1, 2));
    return lhs - rhs;
}

void BundleData::validate() const {
    const RingPtr& ring = frame_->ring();
    for (const auto& g : base_gens_) {
        for (size_t b = 0; b < action_->fibre().dim(); ++b)
            if (!action_->act_scalar(b, g.upstairs).is_zero())
                throw ring_error("base generator '" + g.name +
                                 "' is not invariant under the fibre action (field '" +
                                 action_->fibre().basis[b] + "')");
    }
    // base relations hold upstairs
    RingPtr base = RingSpec::make(base_gen_names(), {}, base_rels_, base_dens_);
    for (size_t k = 0; k < base->rules().size(); ++k) {
        bool local_rule = false;
        for (const auto& loc : base->localizations())
            if (base->rules()[k].lhs[loc.gen_index] > 0) local_rule = true;
        if (local_rule) continue;
        const TermMap defect = base->rule_defect(k);
        ScalarExpr up = ScalarExpr::zero(ring);
        for (const auto& [m, c] : defect) {
            ScalarExpr prod = ScalarExpr::constant(ring, c);
            for (size_t i = 0; i < base->base_size(); ++i)
                for (int e = 0; e < m[i]; ++e) prod = prod * base_gens_[i].upstairs;
            up = up + prod;
        }
        if (!up.is_zero())
            throw ring_error("base relation '" + base->rules()[k].name +
                             "' fails upstairs: " + up.str());
    }
}

std::vector<std::string> base_gen_names_of(const std::vector<BundleData::BaseGenerator>& gens) {
    std::vector<std::string> names;
    names.reserve(gens.size());
    for (const auto& g : gens) names.push_back(g.name);
    return names;
}

namespace {

// all normal-form monomials over the plain generators with total degree <= bound
std::vector<Monomial> normal_monomials(const RingPtr& ring, int bound) {
    std::vector<Monomial> out;
    Monomial m(ring->size(), 0);
    const size_t nb = ring->base_size();
    auto reducible = [&](const Monomial& mm) {
        for (const auto& rule : ring->rules()) {
            bool div = true;
            for (size_t i = 0; i < mm.size(); ++i)
                if (rule.lhs[i] > 0 && mm[i] < rule.lhs[i]) div = false;
            if (div) return true;
        }
        return false;
    };
    std::function<void(size_t, int)> rec = [&](size_t i, int left) {
        if (i == nb) {
            if (!reducible(m)) out.push_back(m);
            return;
        }
        for (int e = 0; e <= left; ++e) {
            m[i] = e;
            rec(i + 1, left - e);
        }
        m[i] = 0;
    };
    rec(0, bound);
    return out;
}

}  // namespace

ScalarExpr BundleData::express_in_base(const RingPtr& base_ring, const ScalarExpr& value,
                                       const std::string& what) const {
    const RingPtr& up = frame_->ring();
    const auto candidates = normal_monomials(base_ring, degree_bound_);

    // columns: substituted candidate monomials; rows: upstairs monomials
    std::vector<ScalarExpr> columns;
    columns.reserve(candidates.size());
    for (const auto& m : candidates) {
        ScalarExpr prod = ScalarExpr::constant(up, 1);
        for (size_t i = 0; i < base_ring->base_size(); ++i)
            for (int e = 0; e < m[i]; ++e) prod = prod * base_gens_[i].upstairs;
        columns.push_back(std::move(prod));
    }
    std::map<Monomial, size_t, MonomialOrder> row_of;
    auto note_rows = [&](const ScalarExpr& e) {
        for (const auto& [mm, cc] : e.terms())
            if (!row_of.count(mm)) row_of.emplace(mm, row_of.size());
    };
    for (const auto& c : columns) note_rows(c);
    note_rows(value);

    LinearSystem sys(row_of.size(), candidates.size());
    for (size_t c = 0; c < columns.size(); ++c)
        for (const auto& [mm, cc] : columns[c].terms()) sys.at(row_of[mm], c) = cc;
    std::vector<Rational> rhs(row_of.size(), Rational(0));
    for (const auto& [mm, cc] : value.terms()) rhs[row_of[mm]] = cc;

    const auto sol = sys.solve_one(rhs);
    if (!sol)
        throw ring_error(what + " is not expressible in base monomials up to degree " +
                         std::to_string(degree_bound_));
    TermMap t;
    for (size_t c = 0; c < candidates.size(); ++c)
        if ((*sol)[c] != 0) t.emplace(candidates[c], (*sol)[c]);
    return ScalarExpr::from_terms(base_ring, std::move(t));
}

std::vector<std::string> BundleData::base_gen_names() const {
    return base_gen_names_of(base_gens_);
}

InducedBase BundleData::induce_base() const {
    validate();
    const RingPtr& up_ring = frame_->ring();
    const size_t nb = base_gens_.size();

    RingPtr base = RingSpec::make(base_gen_names(), {}, base_rels_, base_dens_);

    // frame d<gen>, trivial d-table, zero structure equations
    std::vector<std::string> fnames;
    std::map<std::string, std::vector<std::pair<std::string, ScalarExpr>>> d_table;
    std::map<std::string, std::vector<std::pair<ScalarExpr, std::string>>> in_diff;
    std::map<std::string, std::vector<std::pair<std::string, ScalarExpr>>> d2;
    for (size_t i = 0; i < nb; ++i) {
        const std::string fn = "d" + base_gens_[i].name;
        fnames.push_back(fn);
        d_table[base_gens_[i].name] = {{fn, ScalarExpr::constant(base, 1)}};
        in_diff[fn] = {{ScalarExpr::constant(base, 1), base_gens_[i].name}};
        d2[fn] = {};
    }
    FramePtr bframe = FrameSpec::make(base, fnames, d_table, in_diff, d2);
    bframe->check_round_trip();
    bframe->check_relations_closed();

    // upstairs differentials of the base coordinates
    std::vector<OneForm> dup;
    dup.reserve(nb);
    for (const auto& g : base_gens_) dup.push_back(differential(g.upstairs, frame_));

    // (i) brackets
    std::map<std::string, ScalarExpr> ptable;
    for (size_t i = 0; i < nb; ++i)
        for (size_t j = i + 1; j < nb; ++j) {
            const ScalarExpr upv = pi_->bracket(base_gens_[i].upstairs, base_gens_[j].upstairs);
            ptable[base_gens_[i].name + "," + base_gens_[j].name] = express_in_base(
                base, upv, "bracket {" + base_gens_[i].name + "," + base_gens_[j].name + "}");
        }
    PoissonStructure bpi = PoissonStructure::make(base, ptable);
    bpi.check_respects_relations();

    // (ii) connection: one elimination, nb*nb right hand sides
    const auto candidates = normal_monomials(base, degree_bound_);
    std::vector<std::vector<ScalarExpr>> col_forms;  // [w * candidates] upstairs 1-forms
    for (size_t w = 0; w < nb; ++w)
        for (const auto& m : candidates) {
            ScalarExpr prod = ScalarExpr::constant(up_ring, 1);
            for (size_t i = 0; i < nb; ++i)
                for (int e = 0; e < m[i]; ++e) prod = prod * base_gens_[i].upstairs;
            col_forms.push_back({});
            std::vector<ScalarExpr> coords;
            coords.reserve(frame_->size());
            for (size_t f = 0; f < frame_->size(); ++f)
                coords.push_back(dup[w].coord(f) * prod);
            col_forms.back() = std::move(coords);
        }

    std::map<std::pair<size_t, Monomial>, size_t> row_of;
    auto row_index = [&](size_t f, const Monomial& m) {
        auto key = std::make_pair(f, m);
        auto it = row_of.find(key);
        if (it != row_of.end()) return it->second;
        return row_of.emplace(key, row_of.size()).first->second;
    };
    std::vector<OneForm> rhs_forms;
    std::vector<std::string> rhs_names;
    for (size_t i = 0; i < nb; ++i)
        for (size_t j = 0; j < nb; ++j) {
            OneForm r = conn_->apply(*pi_, dup[i], dup[j]);
            std::string witness;
            if (!is_horizontal(r, &witness))
                throw ring_error("induced connection value (" + base_gens_[i].name + "," +
                                 base_gens_[j].name + ") is not horizontal: " + witness);
            for (size_t b = 0; b < action_->fibre().dim(); ++b)
                if (!act_form_is_zero(b, r))
                    throw ring_error("induced connection value (" + base_gens_[i].name + "," +
                                     base_gens_[j].name + ") is not invariant");
            rhs_forms.push_back(std::move(r));
            rhs_names.push_back(base_gens_[i].name + "|d" + base_gens_[j].name);
        }

    for (const auto& cf : col_forms)
        for (size_t f = 0; f < frame_->size(); ++f)
            for (const auto& [mm, cc] : cf[f].terms()) row_index(f, mm);
    for (const auto& r : rhs_forms)
        for (size_t f = 0; f < frame_->size(); ++f)
            for (const auto& [mm, cc] : r.coord(f).terms()) row_index(f, mm);

    LinearSystem sys(row_of.size(), col_forms.size());
    for (size_t c = 0; c < col_forms.size(); ++c)
        for (size_t f = 0; f < frame_->size(); ++f)
            for (const auto& [mm, cc] : col_forms[c][f].terms())
                sys.at(row_index(f, mm), c) = cc;
    std::vector<std::vector<Rational>> rhss;
    for (const auto& r : rhs_forms) {
        std::vector<Rational> rhs(row_of.size(), Rational(0));
        for (size_t f = 0; f < frame_->size(); ++f)
            for (const auto& [mm, cc] : r.coord(f).terms()) rhs[row_index(f, mm)] = cc;
        rhss.push_back(std::move(rhs));
    }
    const auto sols = sys.solve(rhss);

    std::map<std::string, OneForm> ctable;
    std::map<std::string, std::vector<ScalarExpr>> craw;
    for (size_t k = 0; k < sols.size(); ++k) {
        if (!sols[k])
            throw ring_error("induced connection value " + rhs_names[k] +
                             " is not expressible over base differentials up to degree " +
                             std::to_string(degree_bound_));
        std::vector<ScalarExpr> coords(nb, ScalarExpr::zero(base));
        for (size_t w = 0; w < nb; ++w) {
            TermMap t;
            for (size_t c = 0; c < candidates.size(); ++c) {
                const Rational& v = (*sols[k])[w * candidates.size() + c];
                if (v != 0) t.emplace(candidates[c], v);
            }
            coords[w] = ScalarExpr::from_terms(base, std::move(t));
        }
        craw.emplace(rhs_names[k], coords);
        ctable.emplace(rhs_names[k], OneForm(bframe, std::move(coords)));
    }
    ContravariantConnection bconn = ContravariantConnection::make(bframe, std::move(ctable));
    bconn.check_respects_relations(bpi);

    InducedBase out;
    out.ring = base;
    out.frame = bframe;
    out.poisson = std::move(bpi);
    out.connection = std::move(bconn);
    out.connection_polynomial = std::move(craw);

    // (iii) residual action restricted to the base coordinates
    if (residual_) {
        std::vector<std::vector<ScalarExpr>> fields(residual_->fibre().dim());
        for (size_t b = 0; b < residual_->fibre().dim(); ++b) {
            for (size_t i = 0; i < nb; ++i) {
                const ScalarExpr upv = residual_->act_scalar(b, base_gens_[i].upstairs);
                fields[b].push_back(express_in_base(
                    base, upv,
                    "residual action " + residual_->fibre().basis[b] + " on " +
                        base_gens_[i].name));
            }
        }
        out.residual_fields = std::move(fields);
    }
    return out;
}

bool BundleData::act_form_is_zero(size_t basis_index, const OneForm& form) const {
    return action_->act_form(basis_index, form).is_zero();
}

}  // namespace plgb
