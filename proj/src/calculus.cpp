#include "plgb/calculus.hpp"

#include <sstream>

namespace plgb {

// --- OneForm ---------------------------------------------------------------

OneForm::OneForm(FramePtr frame, std::vector<ScalarExpr> coords) : frame_(std::move(frame)) {
    if (coords.size() != frame_->size()) throw ring_error("frame coordinate width mismatch");
    coords_ = frame_->reduce(std::move(coords));
}

OneForm OneForm::zero(FramePtr frame) {
    std::vector<ScalarExpr> c(frame->size(), ScalarExpr::zero(frame->ring()));
    return OneForm(std::move(frame), std::move(c));
}

OneForm OneForm::unit(FramePtr frame, size_t frame_index) {
    std::vector<ScalarExpr> c(frame->size(), ScalarExpr::zero(frame->ring()));
    c[frame_index] = ScalarExpr::constant(frame->ring(), 1);
    return OneForm(std::move(frame), std::move(c));
}

bool OneForm::is_zero() const {
    for (const auto& c : coords_)
        if (!c.is_zero()) return false;
    return true;
}

static void require_same_frame(const OneForm& a, const OneForm& b) {
    if (a.frame() != b.frame()) throw ring_error("operands belong to different frames");
}

OneForm OneForm::operator-() const {
    std::vector<ScalarExpr> c;
    c.reserve(coords_.size());
    for (const auto& x : coords_) c.push_back(-x);
    return OneForm(frame_, std::move(c));
}

OneForm OneForm::operator+(const OneForm& o) const {
    require_same_frame(*this, o);
    std::vector<ScalarExpr> c;
    c.reserve(coords_.size());
    for (size_t i = 0; i < coords_.size(); ++i) c.push_back(coords_[i] + o.coords_[i]);
    return OneForm(frame_, std::move(c));
}

OneForm OneForm::operator-(const OneForm& o) const { return *this + (-o); }

OneForm OneForm::scaled(const ScalarExpr& p) const {
    std::vector<ScalarExpr> c;
    c.reserve(coords_.size());
    for (const auto& x : coords_) c.push_back(x * p);
    return OneForm(frame_, std::move(c));
}

bool OneForm::operator==(const OneForm& o) const {
    require_same_frame(*this, o);
    return coords_ == o.coords_;
}

std::string OneForm::str() const {
    std::ostringstream out;
    bool first = true;
    for (size_t i = 0; i < coords_.size(); ++i) {
        if (coords_[i].is_zero()) continue;
        if (!first) out << " + ";
        out << "(" << coords_[i].str() << ")*" << frame_->names()[i];
        first = false;
    }
    if (first) out << "0";
    return out.str();
}

// --- TwoForm ---------------------------------------------------------------

TwoForm::TwoForm(FramePtr frame) : frame_(std::move(frame)) {
    const size_t n = frame_->size();
    coords_.assign(n * (n - 1) / 2, ScalarExpr::zero(frame_->ring()));
}

size_t TwoForm::pair_index(size_t i, size_t j) const {
    // i < j in [0, n): row-major over the strict upper triangle
    const size_t n = frame_->size();
    return i * n - i * (i + 1) / 2 + (j - i - 1);
}

const ScalarExpr& TwoForm::coord(size_t i, size_t j) const {
    if (i == j) throw ring_error("diagonal 2-form coordinate");
    if (i < j) return coords_[pair_index(i, j)];
    throw ring_error("2-form coordinates are stored with i<j; use add for signed access");
}

void TwoForm::add(size_t i, size_t j, const ScalarExpr& v) {
    if (i == j) return;  // antisymmetry kills the diagonal
    if (i < j)
        coords_[pair_index(i, j)] = coords_[pair_index(i, j)] + v;
    else
        coords_[pair_index(j, i)] = coords_[pair_index(j, i)] - v;
}

bool TwoForm::is_zero() const {
    for (const auto& c : coords_)
        if (!c.is_zero()) return false;
    return true;
}

TwoForm TwoForm::operator+(const TwoForm& o) const {
    if (frame_ != o.frame_) throw ring_error("operands belong to different frames");
    TwoForm r(frame_);
    for (size_t k = 0; k < coords_.size(); ++k) r.coords_[k] = coords_[k] + o.coords_[k];
    return r;
}

TwoForm TwoForm::scaled(const ScalarExpr& p) const {
    TwoForm r(frame_);
    for (size_t k = 0; k < coords_.size(); ++k) r.coords_[k] = coords_[k] * p;
    return r;
}

bool TwoForm::operator==(const TwoForm& o) const {
    if (frame_ != o.frame_) throw ring_error("operands belong to different frames");
    return coords_ == o.coords_;
}

std::string TwoForm::str() const {
    std::ostringstream out;
    bool first = true;
    const size_t n = frame_->size();
    for (size_t i = 0; i < n; ++i)
        for (size_t j = i + 1; j < n; ++j) {
            const ScalarExpr& c = coords_[pair_index(i, j)];
            if (c.is_zero()) continue;
            if (!first) out << " + ";
            out << "(" << c.str() << ")*" << frame_->names()[i] << "^" << frame_->names()[j];
            first = false;
        }
    if (first) out << "0";
    return out.str();
}

// --- FrameSpec ---------------------------------------------------------------

FramePtr FrameSpec::make(
    RingPtr ring, std::vector<std::string> names,
    std::map<std::string, std::vector<std::pair<std::string, ScalarExpr>>> d_table,
    std::map<std::string, std::vector<std::pair<ScalarExpr, std::string>>> in_differentials,
    std::optional<std::map<std::string, std::vector<std::pair<std::string, ScalarExpr>>>> d2) {
    auto fr = std::shared_ptr<FrameSpec>(new FrameSpec());
    fr->ring_ = std::move(ring);
    fr->names_ = std::move(names);
    for (size_t i = 0; i < fr->names_.size(); ++i)
        if (!fr->index_.emplace(fr->names_[i], i).second)
            throw ring_error("duplicate frame name '" + fr->names_[i] + "'");

    fr->d_table_.assign(fr->ring_->size(), std::nullopt);
    fr->reduction_.assign(fr->names_.size(), std::nullopt);
    for (auto& [gen, entries] : d_table) {
        const size_t gi = fr->ring_->index_of(gen);
        std::vector<ScalarExpr> coords(fr->size(), ScalarExpr::zero(fr->ring_));
        for (auto& [fname, value] : entries) {
            auto it = fr->index_.find(fname);
            if (it == fr->index_.end())
                throw ring_error("d-table entry for unknown frame element '" + fname + "'");
            coords[it->second] = coords[it->second] + value;
        }
        OneForm form;
        form.frame_ = fr;  // bypass reduce; reductions not derived yet
        form.coords_ = std::move(coords);
        fr->d_table_[gi] = std::move(form);
    }

    fr->in_diff_.assign(fr->size(), {});
    for (auto& [fname, terms] : in_differentials) {
        auto it = fr->index_.find(fname);
        if (it == fr->index_.end())
            throw ring_error("in_differentials entry for unknown frame element '" + fname + "'");
        for (auto& [coeff, gen] : terms)
            fr->in_diff_[it->second].push_back(DiffTerm{coeff, fr->ring_->index_of(gen)});
    }

    if (d2) {
        std::vector<TwoForm> table;
        table.reserve(fr->size());
        for (const auto& n : fr->names_) {
            TwoForm w(fr);
            auto it = d2->find(n);
            if (it != d2->end()) {
                for (auto& [pair_key, value] : it->second) {
                    const auto comma = pair_key.find(',');
                    if (comma == std::string::npos)
                        throw ring_error("d2 coordinate key '" + pair_key +
                                         "' must be 'frame,frame'");
                    const size_t i = fr->index_of(pair_key.substr(0, comma));
                    const size_t j = fr->index_of(pair_key.substr(comma + 1));
                    if (i == j) throw ring_error("d2 diagonal coordinate '" + pair_key + "'");
                    w.add(i, j, value);
                }
            }
            table.push_back(std::move(w));
        }
        fr->d2_ = std::move(table);
    }

    fr->derive_reductions();

    // normalize the stored d-table through the reductions
    for (auto& entry : fr->d_table_)
        if (entry) entry->coords_ = fr->reduce(std::move(entry->coords_));
    return fr;
}

size_t FrameSpec::index_of(const std::string& name) const {
    auto it = index_.find(name);
    if (it == index_.end()) throw ring_error("unknown frame element '" + name + "'");
    return it->second;
}

bool FrameSpec::has_d_entry(size_t gen_index) const {
    return gen_index < d_table_.size() && d_table_[gen_index].has_value();
}

const TwoForm& FrameSpec::d2(size_t frame_index) const {
    if (!d2_) throw ring_error("frame has no structure equations (d2 table)");
    return (*d2_)[frame_index];
}

// Module relations: each ring relation R gives d(R) = 0. On a free frame the
// d-table already kills R coordinate-wise; otherwise we orient the relation
// at a frame element whose coefficient is invertible (a unit or a declared
// denominator up to a unit) and substitute it away in every 1-form.
void FrameSpec::derive_reductions() {
    auto self = shared_from_this();
    for (size_t k = 0; k < ring_->rules().size(); ++k) {
        bool local_rule = false;
        for (const auto& loc : ring_->localizations())
            if (ring_->rules()[k].lhs[loc.gen_index] > 0) local_rule = true;
        if (local_rule) continue;

        const TermMap defect = ring_->rule_defect(k);
        // raw coordinates of d(defect), no reduction applied; the relation
        // polynomial is differentiated before quotient rewriting
        std::vector<ScalarExpr> coords(size(), ScalarExpr::zero(ring_));
        bool covered = true;
        for (size_t g = 0; g < ring_->size() && covered; ++g) {
            const ScalarExpr p = ScalarExpr::from_terms(ring_, raw_partial(defect, g));
            if (p.is_zero()) continue;
            if (!d_table_[g]) {
                covered = false;
                break;
            }
            for (size_t i = 0; i < size(); ++i)
                coords[i] = coords[i] + p * d_table_[g]->coords_[i];
        }
        if (!covered) continue;
        bool trivial = true;
        for (const auto& c : coords)
            if (!c.is_zero()) trivial = false;
        if (trivial) continue;

        // scan frame elements from the back for an invertible coefficient
        bool oriented = false;
        for (size_t ii = size(); ii-- > 0 && !oriented;) {
            const ScalarExpr& c = coords[ii];
            if (c.is_zero() || reduction_[ii]) continue;
            ScalarExpr inv = ScalarExpr::zero(ring_);
            if (c.is_constant()) {
                inv = ScalarExpr::constant(ring_, Rational(1) / c.constant_value());
            } else {
                for (const auto& loc : ring_->localizations()) {
                    const ScalarExpr den = ScalarExpr::from_terms(ring_, loc.denominator);
                    const ScalarExpr u =
                        ScalarExpr::generator(ring_, ring_->generator_names()[loc.gen_index]);
                    // c = s * den with rational s?
                    for (const Rational& s : {Rational(1), Rational(-1)}) {
                        if (c == den.scaled(s)) inv = u.scaled(Rational(1) / s);
                    }
                }
            }
            if (inv.is_zero()) continue;
            std::vector<ScalarExpr> subst(size(), ScalarExpr::zero(ring_));
            for (size_t j = 0; j < size(); ++j) {
                if (j == ii) continue;
                subst[j] = -(coords[j] * inv);
            }
            reduction_[ii] = OneForm();
            reduction_[ii]->frame_ = self;
            reduction_[ii]->coords_ = std::move(subst);
            oriented = true;
        }
        if (!oriented)
            throw ring_error("d of relation '" + ring_->rules()[k].name +
                             "' is nonzero but no frame coefficient is invertible");
    }
    // reductions must not chain: a substitute may not mention a reduced frame
    for (const auto& r : reduction_) {
        if (!r) continue;
        for (size_t j = 0; j < size(); ++j)
            if (reduction_[j] && !r->coords_[j].is_zero())
                throw ring_error("frame reductions chain; unsupported relation pattern");
    }
}

std::vector<ScalarExpr> FrameSpec::reduce(std::vector<ScalarExpr> coords) const {
    bool any = false;
    for (size_t i = 0; i < coords.size(); ++i)
        if (reduction_[i] && !coords[i].is_zero()) any = true;
    if (!any) return coords;
    std::vector<ScalarExpr> out(size(), ScalarExpr::zero(ring_));
    for (size_t i = 0; i < coords.size(); ++i) {
        if (coords[i].is_zero()) continue;
        if (reduction_[i]) {
            for (size_t j = 0; j < size(); ++j)
                out[j] = out[j] + coords[i] * reduction_[i]->coords_[j];
        } else {
            out[i] = out[i] + coords[i];
        }
    }
    return out;
}

OneForm FrameSpec::d_generator(size_t gen_index) const {
    if (d_table_[gen_index]) return *d_table_[gen_index];
    if (ring_->is_localization(gen_index)) {
        // d(u) = -u^2 d(D)
        const auto& loc = ring_->localization_of(gen_index);
        const ScalarExpr den = ScalarExpr::from_terms(ring_, loc.denominator);
        const ScalarExpr u = ScalarExpr::generator(ring_, ring_->generator_names()[gen_index]);
        auto self = shared_from_this();
        return differential(den, self).scaled(-(u * u));
    }
    throw ring_error("no differential table entry for generator '" +
                     ring_->generator_names()[gen_index] + "'");
}

void FrameSpec::check_round_trip() const {
    auto self = shared_from_this();
    for (size_t i = 0; i < size(); ++i) {
        if (in_diff_[i].empty() && !reduction_[i])
            throw ring_error("frame element '" + names_[i] + "' lacks an in_differentials entry");
        OneForm acc = OneForm::zero(self);
        for (const auto& t : in_diff_[i]) acc = acc + d_generator(t.gen_index).scaled(t.coeff);
        OneForm expected = OneForm::unit(self, i);
        if (!(acc == expected))
            throw ring_error("frame round-trip fails on '" + names_[i] + "': got " + acc.str());
    }
}

void FrameSpec::check_relations_closed() const {
    auto self = shared_from_this();
    for (size_t k = 0; k < ring_->rules().size(); ++k) {
        bool local_rule = false;
        for (const auto& loc : ring_->localizations())
            if (ring_->rules()[k].lhs[loc.gen_index] > 0) local_rule = true;
        if (local_rule) continue;
        const TermMap defect = ring_->rule_defect(k);
        OneForm acc = OneForm::zero(self);
        bool covered = true;
        for (size_t g = 0; g < ring_->size() && covered; ++g) {
            const ScalarExpr p = ScalarExpr::from_terms(ring_, raw_partial(defect, g));
            if (p.is_zero()) continue;
            if (!d_table_[g] && !ring_->is_localization(g)) {
                covered = false;
                break;
            }
            acc = acc + d_generator(g).scaled(p);
        }
        if (covered && !acc.is_zero())
            throw ring_error("d-table does not annihilate relation '" + ring_->rules()[k].name +
                             "'");
    }
}

TwoForm FrameSpec::d_of_presentation(size_t frame_index) const {
    auto self = shared_from_this();
    TwoForm acc(self);
    // e^i = sum p * dg  =>  de^i = sum dp ^ dg
    for (const auto& t : in_diff_[frame_index]) {
        const TwoForm w = wedge(differential(t.coeff, self), d_generator(t.gen_index));
        acc = acc + w;
    }
    return acc;
}

void FrameSpec::check_d2_against_oracle() const {
    if (!d2_) return;
    for (size_t i = 0; i < size(); ++i) {
        if (in_diff_[i].empty()) continue;
        if (!(d_of_presentation(i) == (*d2_)[i]))
            throw ring_error("d2 entry for '" + names_[i] +
                             "' disagrees with d applied to its presentation");
    }
}

// --- VectorField -------------------------------------------------------------

void VectorField::check_consistency(const FrameSpec& frame) const {
    for (size_t g = 0; g < frame.ring()->size(); ++g) {
        if (frame.ring()->is_localization(g)) continue;
        if (!frame.has_d_entry(g)) continue;
        if (!action.covers(g)) continue;
        const OneForm dg = frame.d_generator(g);
        ScalarExpr paired = ScalarExpr::zero(frame.ring());
        for (size_t i = 0; i < frame.size(); ++i)
            paired = paired + dg.coord(i) * pairings[i];
        if (!(paired == action.on_generator(g)))
            throw ring_error("vector field pairings inconsistent with its action on '" +
                             frame.ring()->generator_names()[g] + "'");
    }
}

// --- operations ---------------------------------------------------------------

OneForm differential(const ScalarExpr& p, const FramePtr& frame) {
    OneForm acc = OneForm::zero(frame);
    for (size_t g = 0; g < frame->ring()->size(); ++g) {
        const ScalarExpr pg = p.partial(g);
        if (pg.is_zero()) continue;
        acc = acc + frame->d_generator(g).scaled(pg);
    }
    return acc;
}

OneForm oneform_from_pdq(const ScalarExpr& p, const ScalarExpr& q, const FramePtr& frame) {
    return differential(q, frame).scaled(p);
}

std::vector<FrameSpec::DiffTerm> to_differential_presentation(const OneForm& form) {
    std::vector<FrameSpec::DiffTerm> out;
    const auto& frame = form.frame();
    for (size_t i = 0; i < frame->size(); ++i) {
        if (form.coord(i).is_zero()) continue;
        if (frame->in_differentials(i).empty())
            throw ring_error("frame element '" + frame->names()[i] +
                             "' has no differential presentation");
        for (const auto& t : frame->in_differentials(i))
            out.push_back(FrameSpec::DiffTerm{form.coord(i) * t.coeff, t.gen_index});
    }
    return out;
}

ScalarExpr interior(const VectorField& v, const OneForm& form) {
    ScalarExpr acc = ScalarExpr::zero(form.frame()->ring());
    for (size_t i = 0; i < form.frame()->size(); ++i)
        acc = acc + form.coord(i) * v.pairings[i];
    return acc;
}

TwoForm wedge(const OneForm& a, const OneForm& b) {
    if (a.frame() != b.frame()) throw ring_error("wedge across frames");
    TwoForm r(a.frame());
    const size_t n = a.frame()->size();
    for (size_t i = 0; i < n; ++i)
        for (size_t j = i + 1; j < n; ++j)
            r.add(i, j, a.coord(i) * b.coord(j) - a.coord(j) * b.coord(i));
    return r;
}

ScalarExpr interior2(const VectorField& v, const VectorField& w, const TwoForm& form) {
    const size_t n = form.frame()->size();
    ScalarExpr acc = ScalarExpr::zero(form.frame()->ring());
    for (size_t i = 0; i < n; ++i)
        for (size_t j = i + 1; j < n; ++j) {
            const ScalarExpr& c = form.coord(i, j);
            if (c.is_zero()) continue;
            acc = acc + c * (v.pairings[i] * w.pairings[j] - v.pairings[j] * w.pairings[i]);
        }
    return acc;
}

OneForm interior_one(const VectorField& v, const TwoForm& form) {
    const auto& frame = form.frame();
    const size_t n = frame->size();
    std::vector<ScalarExpr> coords(n, ScalarExpr::zero(frame->ring()));
    // i_V(e^i ^ e^j) = V^i e^j - V^j e^i
    for (size_t i = 0; i < n; ++i)
        for (size_t j = i + 1; j < n; ++j) {
            const ScalarExpr& c = form.coord(i, j);
            if (c.is_zero()) continue;
            coords[j] = coords[j] + c * v.pairings[i];
            coords[i] = coords[i] - c * v.pairings[j];
        }
    return OneForm(frame, std::move(coords));
}

TwoForm exterior_d(const OneForm& form) {
    const auto& frame = form.frame();
    TwoForm acc(frame);
    for (size_t i = 0; i < frame->size(); ++i) {
        const ScalarExpr& q = form.coord(i);
        if (q.is_zero()) continue;
        acc = acc + wedge(differential(q, frame), OneForm::unit(frame, i));
        acc = acc + frame->d2(i).scaled(q);
    }
    return acc;
}

OneForm lie_derivative(const VectorField& v, const OneForm& form,
                       const std::vector<OneForm>* frame_action) {
    const auto& frame = form.frame();
    OneForm acc = OneForm::zero(frame);
    for (size_t i = 0; i < frame->size(); ++i) {
        const ScalarExpr& q = form.coord(i);
        if (q.is_zero()) continue;
        acc = acc + OneForm::unit(frame, i).scaled(v.action(q));
        OneForm on_frame = frame_action
                               ? (*frame_action)[i]
                               : interior_one(v, frame->d2(i)) +
                                     differential(v.pairings[i], frame);
        acc = acc + on_frame.scaled(q);
    }
    return acc;
}

}  // namespace plgb
