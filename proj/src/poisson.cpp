#include "plgb/poisson.hpp"

namespace plgb {

// --- PoissonStructure ------------------------------------------------------

PoissonStructure PoissonStructure::make(RingPtr ring,
                                        const std::map<std::string, ScalarExpr>& table) {
    PoissonStructure p;
    p.ring_ = ring;
    const size_t n = ring->size();
    p.pi_.assign(n, std::vector<ScalarExpr>(n, ScalarExpr::zero(ring)));
    std::vector<std::vector<bool>> seen(n, std::vector<bool>(n, false));

    for (const auto& [key, value] : table) {
        const auto comma = key.find(',');
        if (comma == std::string::npos)
            throw ring_error("poisson key '" + key + "' must be 'g1,g2'");
        const size_t i = ring->index_of(key.substr(0, comma));
        const size_t j = ring->index_of(key.substr(comma + 1));
        if (i == j) {
            if (!value.is_zero())
                throw ring_error("poisson antisymmetry requires {" + key + "} = 0");
            continue;
        }
        const size_t a = std::min(i, j), b = std::max(i, j);
        if (seen[a][b])
            throw ring_error("poisson pair '" + key + "' given twice (antisymmetric storage)");
        seen[a][b] = true;
        p.pi_[a][b] = (i < j) ? value : -value;
    }

    // quotient rule rows for localization inverses: {u, g} = -u^2 {D, g}
    for (const auto& loc : ring->localizations()) {
        const ScalarExpr den = ScalarExpr::from_terms(ring, loc.denominator);
        const ScalarExpr u = ScalarExpr::generator(ring, ring->generator_names()[loc.gen_index]);
        const ScalarExpr mu2 = -(u * u);
        for (size_t g = 0; g < n; ++g) {
            if (g == loc.gen_index) continue;
            // {D, g} through already-known rows (denominator has no inverses)
            ScalarExpr dg = ScalarExpr::zero(ring);
            for (size_t h = 0; h < n; ++h) {
                const ScalarExpr ph = den.partial(h);
                if (ph.is_zero() || h == g) continue;
                bool neg = false;
                const ScalarExpr& v = p.pair_value(h, g, neg);
                dg = dg + (neg ? -(ph * v) : ph * v);
            }
            const ScalarExpr val = mu2 * dg;  // {u, g}
            const size_t a = std::min(loc.gen_index, g), b = std::max(loc.gen_index, g);
            p.pi_[a][b] = (loc.gen_index < g) ? val : -val;
        }
    }
    return p;
}

const ScalarExpr& PoissonStructure::pair_value(size_t i, size_t j, bool& negate) const {
    if (i < j) {
        negate = false;
        return pi_[i][j];
    }
    negate = true;
    return pi_[j][i];
}

ScalarExpr PoissonStructure::gen_bracket(size_t i, size_t j) const {
    if (i == j) return ScalarExpr::zero(ring_);
    bool neg = false;
    const ScalarExpr& v = pair_value(i, j, neg);
    return neg ? -v : v;
}

ScalarExpr PoissonStructure::bracket_against_partials(size_t gen_index,
                                                      const std::vector<ScalarExpr>& dq) const {
    ScalarExpr acc = ScalarExpr::zero(ring_);
    for (size_t h = 0; h < ring_->size(); ++h) {
        if (h == gen_index || dq[h].is_zero()) continue;
        bool neg = false;
        const ScalarExpr& v = pair_value(gen_index, h, neg);
        if (v.is_zero()) continue;
        acc = acc + (neg ? -(v * dq[h]) : v * dq[h]);
    }
    return acc;
}

ScalarExpr PoissonStructure::bracket(const ScalarExpr& p, const ScalarExpr& q) const {
    if (p.ring() != ring_ || q.ring() != ring_)
        throw ring_error("bracket applied across rings");
    const size_t n = ring_->size();
    ScalarExpr acc = ScalarExpr::zero(ring_);
    std::vector<ScalarExpr> dp(n), dq(n);
    for (size_t i = 0; i < n; ++i) {
        dp[i] = p.partial(i);
        dq[i] = q.partial(i);
    }
    for (size_t i = 0; i < n; ++i)
        for (size_t j = i + 1; j < n; ++j) {
            if (pi_[i][j].is_zero()) continue;
            acc = acc + pi_[i][j] * (dp[i] * dq[j] - dp[j] * dq[i]);
        }
    return acc;
}

ScalarExpr PoissonStructure::apply(const OneForm& a, const OneForm& b) const {
    const auto pres_a = to_differential_presentation(a);
    const auto pres_b = to_differential_presentation(b);
    ScalarExpr acc = ScalarExpr::zero(ring_);
    for (const auto& ta : pres_a)
        for (const auto& tb : pres_b) {
            if (ta.gen_index == tb.gen_index) continue;
            bool neg = false;
            const ScalarExpr& v =
                pair_value(std::min(ta.gen_index, tb.gen_index),
                           std::max(ta.gen_index, tb.gen_index), neg);
            ScalarExpr term = ta.coeff * tb.coeff * v;
            if ((ta.gen_index > tb.gen_index)) term = -term;
            acc = acc + term;
        }
    return acc;
}

ScalarExpr PoissonStructure::jacobiator(const ScalarExpr& p, const ScalarExpr& q,
                                        const ScalarExpr& r) const {
    return bracket(p, bracket(q, r)) + bracket(q, bracket(r, p)) + bracket(r, bracket(p, q));
}

void PoissonStructure::check_respects_relations() const {
    for (size_t k = 0; k < ring_->rules().size(); ++k) {
        bool local_rule = false;
        for (const auto& loc : ring_->localizations())
            if (ring_->rules()[k].lhs[loc.gen_index] > 0) local_rule = true;
        if (local_rule) continue;
        const TermMap defect = ring_->rule_defect(k);
        for (size_t g = 0; g < ring_->base_size(); ++g) {
            // {relation, g} with the relation differentiated pre-quotient
            ScalarExpr acc = ScalarExpr::zero(ring_);
            for (size_t h = 0; h < ring_->size(); ++h) {
                if (h == g) continue;
                const ScalarExpr p = ScalarExpr::from_terms(ring_, raw_partial(defect, h));
                if (p.is_zero()) continue;
                bool neg = false;
                const ScalarExpr& v = pair_value(h, g, neg);
                acc = acc + (neg ? -(p * v) : p * v);
            }
            if (!acc.is_zero())
                throw ring_error("poisson bracket does not annihilate relation '" +
                                 ring_->rules()[k].name + "' against generator '" +
                                 ring_->generator_names()[g] + "'");
        }
    }
}

// --- ContravariantConnection -------------------------------------------------

ContravariantConnection ContravariantConnection::make(FramePtr frame,
                                                      std::map<std::string, OneForm> table) {
    ContravariantConnection c;
    c.frame_ = frame;
    c.ring_ = frame->ring();
    c.table_.assign(c.ring_->size(),
                    std::vector<std::optional<OneForm>>(frame->size(), std::nullopt));
    for (auto& [key, value] : table) {
        const auto bar = key.find('|');
        if (bar == std::string::npos)
            throw ring_error("connection key '" + key + "' must be 'gen|frame'");
        const size_t g = c.ring_->index_of(key.substr(0, bar));
        const size_t f = frame->index_of(key.substr(bar + 1));
        if (value.frame() != frame) throw ring_error("connection entry in wrong frame");
        c.table_[g][f] = std::move(value);
    }
    return c;
}

bool ContravariantConnection::has_entry(size_t gen_index, size_t frame_index) const {
    return table_[gen_index][frame_index].has_value();
}

const OneForm& ContravariantConnection::entry(size_t gen_index, size_t frame_index) const {
    const auto& e = table_[gen_index][frame_index];
    if (!e)
        throw ring_error("connection table lacks entry for (" +
                         ring_->generator_names()[gen_index] + ", " +
                         frame_->names()[frame_index] + ")");
    return *e;
}

OneForm ContravariantConnection::apply(const PoissonStructure& pi, const OneForm& eta,
                                       const OneForm& tau) const {
    // eta = sum_t c_t dg_t (function-linear slot), tau = sum_j q_j e^j
    const auto pres = to_differential_presentation(eta);
    std::vector<ScalarExpr> coords(frame_->size(), ScalarExpr::zero(ring_));
    OneForm acc = OneForm::zero(frame_);
    for (size_t j = 0; j < frame_->size(); ++j) {
        const ScalarExpr& q = tau.coord(j);
        if (q.is_zero()) continue;
        std::vector<ScalarExpr> dq(ring_->size());
        for (size_t h = 0; h < ring_->size(); ++h) dq[h] = q.partial(h);
        // bracket part: pi(eta, dq) e^j
        ScalarExpr br = ScalarExpr::zero(ring_);
        for (const auto& t : pres)
            br = br + t.coeff * pi.bracket_against_partials(t.gen_index, dq);
        coords[j] = coords[j] + br;
        // table part: q * sum_t c_t nabla_{dg_t} e^j
        for (const auto& t : pres) acc = acc + entry(t.gen_index, j).scaled(t.coeff * q);
    }
    return acc + OneForm(frame_, std::move(coords));
}

void ContravariantConnection::check_respects_relations(const PoissonStructure& pi) const {
    auto self_frame = frame_;
    for (size_t k = 0; k < ring_->rules().size(); ++k) {
        bool local_rule = false;
        for (const auto& loc : ring_->localizations())
            if (ring_->rules()[k].lhs[loc.gen_index] > 0) local_rule = true;
        if (local_rule) continue;
        const TermMap defect = ring_->rule_defect(k);
        std::vector<ScalarExpr> parts(ring_->size());
        for (size_t g = 0; g < ring_->size(); ++g)
            parts[g] = ScalarExpr::from_terms(ring_, raw_partial(defect, g));

        // direction slot: contract the presentation of d(defect) with the table
        for (size_t j = 0; j < frame_->size(); ++j) {
            OneForm acc = OneForm::zero(self_frame);
            bool covered = true;
            for (size_t g = 0; g < ring_->size() && covered; ++g) {
                if (parts[g].is_zero()) continue;
                if (ring_->is_localization(g) || !table_[g][j]) {
                    covered = false;
                    break;
                }
                acc = acc + entry(g, j).scaled(parts[g]);
            }
            if (covered && !acc.is_zero())
                throw ring_error(
                    "connection is not well defined in the direction slot on relation '" +
                    ring_->rules()[k].name + "'");
        }

        // argument slot: nabla_{dg} applied to the presentation of the zero
        // form d(relation)
        for (size_t g = 0; g < ring_->base_size(); ++g) {
            if (!frame_->has_d_entry(g)) continue;
            const OneForm eta = frame_->d_generator(g);
            OneForm acc = OneForm::zero(self_frame);
            bool covered = true;
            for (size_t h = 0; h < ring_->size() && covered; ++h) {
                if (parts[h].is_zero()) continue;
                if (!frame_->has_d_entry(h) && !ring_->is_localization(h)) {
                    covered = false;
                    break;
                }
                const OneForm dh = frame_->d_generator(h);
                acc = acc + dh.scaled(pi.bracket(
                                ScalarExpr::generator(ring_, ring_->generator_names()[g]),
                                parts[h]));
                acc = acc + apply(pi, eta, dh).scaled(parts[h]);
            }
            if (covered && !acc.is_zero())
                throw ring_error(
                    "connection is not well defined in the argument slot on relation '" +
                    ring_->rules()[k].name + "'");
        }
    }
}

// --- derived operations -------------------------------------------------------

OneForm schouten(const PoissonStructure& pi, const OneForm& a, const OneForm& b) {
    const auto& frame = a.frame();
    if (frame != b.frame()) throw ring_error("schouten across frames");
    const RingPtr& ring = frame->ring();
    const auto pa = to_differential_presentation(a);
    const auto pb = to_differential_presentation(b);
    auto partials = [&](const std::vector<FrameSpec::DiffTerm>& pres) {
        std::vector<std::vector<ScalarExpr>> out(pres.size());
        for (size_t t = 0; t < pres.size(); ++t) {
            out[t].resize(ring->size());
            for (size_t h = 0; h < ring->size(); ++h) out[t][h] = pres[t].coeff.partial(h);
        }
        return out;
    };
    const auto da = partials(pa);
    const auto db = partials(pb);
    OneForm acc = OneForm::zero(frame);
    for (size_t ia = 0; ia < pa.size(); ++ia) {
        const auto& ta = pa[ia];
        const OneForm dg = frame->d_generator(ta.gen_index);
        for (size_t ib = 0; ib < pb.size(); ++ib) {
            const auto& tb = pb[ib];
            const OneForm dh = frame->d_generator(tb.gen_index);
            // [p dg, q dh] = pq d{g,h} + p{g,q} dh - q{h,p} dg
            const ScalarExpr gh = pi.gen_bracket(ta.gen_index, tb.gen_index);
            if (!gh.is_zero())
                acc = acc + differential(gh, frame).scaled(ta.coeff * tb.coeff);
            acc = acc + dh.scaled(ta.coeff *
                                  pi.bracket_against_partials(ta.gen_index, db[ib]));
            acc = acc - dg.scaled(tb.coeff *
                                  pi.bracket_against_partials(tb.gen_index, da[ia]));
        }
    }
    return acc;
}

OneForm compatibility_defect(const ContravariantConnection& conn, const PoissonStructure& pi,
                             const OneForm& eta, const OneForm& tau) {
    return conn.apply(pi, eta, tau) - conn.apply(pi, tau, eta) - schouten(pi, eta, tau);
}

OneForm curvature(const ContravariantConnection& conn, const PoissonStructure& pi,
                  const OneForm& eta, const OneForm& tau, const OneForm& sigma) {
    const OneForm a = conn.apply(pi, eta, conn.apply(pi, tau, sigma));
    const OneForm b = conn.apply(pi, tau, conn.apply(pi, eta, sigma));
    const OneForm c = conn.apply(pi, schouten(pi, eta, tau), sigma);
    return a - b - c;
}

}  // namespace plgb
