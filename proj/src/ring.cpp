#include "plgb/ring.hpp"

#include <algorithm>
#include <cctype>
#include <deque>
#include <numeric>
#include <sstream>

namespace plgb {

int total_degree(const Monomial& m) {
    return std::accumulate(m.begin(), m.end(), 0);
}

bool MonomialOrder::operator()(const Monomial& a, const Monomial& b) const {
    // descending graded lex: higher degree first, then lex on exponents
    const int da = total_degree(a), db = total_degree(b);
    if (da != db) return da > db;
    return std::lexicographical_compare(b.begin(), b.end(), a.begin(), a.end());
}

namespace {

void add_term(TermMap& dst, const Monomial& m, const Rational& c) {
    if (c == 0) return;
    auto it = dst.find(m);
    if (it == dst.end()) {
        dst.emplace(m, c);
    } else {
        it->second += c;
        if (it->second == 0) dst.erase(it);
    }
}

bool divides(const Monomial& lhs, const Monomial& m) {
    for (size_t i = 0; i < lhs.size(); ++i)
        if (lhs[i] > 0 && m[i] < lhs[i]) return false;
    return true;
}

Monomial quotient(const Monomial& m, const Monomial& lhs) {
    Monomial q(m);
    for (size_t i = 0; i < m.size(); ++i) q[i] -= lhs[i];
    return q;
}

Monomial mono_mul(const Monomial& a, const Monomial& b) {
    Monomial r(a);
    for (size_t i = 0; i < a.size(); ++i) r[i] += b[i];
    return r;
}

}  // namespace

// --- ScalarExpr ----------------------------------------------------------

ScalarExpr ScalarExpr::zero(RingPtr ring) {
    ScalarExpr e;
    e.ring_ = std::move(ring);
    return e;
}

ScalarExpr ScalarExpr::constant(RingPtr ring, const Rational& c) {
    ScalarExpr e;
    e.ring_ = std::move(ring);
    if (c != 0) e.terms_.emplace(Monomial(e.ring_->size(), 0), c);
    return e;
}

ScalarExpr ScalarExpr::generator(RingPtr ring, const std::string& name, int power) {
    const size_t i = ring->index_of(name);
    if (power < 0 && !ring->is_laurent(i) && !ring->is_localization(i))
        throw ring_error("negative power of non-Laurent generator '" + name + "'");
    Monomial m(ring->size(), 0);
    m[i] = power;
    TermMap t;
    t.emplace(std::move(m), Rational(1));
    return from_terms(std::move(ring), std::move(t));
}

ScalarExpr ScalarExpr::from_terms(RingPtr ring, TermMap terms) {
    for (const auto& [m, c] : terms) {
        if (m.size() != ring->size()) throw ring_error("monomial width mismatch");
        for (size_t i = 0; i < m.size(); ++i)
            if (m[i] < 0 && !ring->is_laurent(i) && !ring->is_localization(i))
                throw ring_error("negative exponent on non-Laurent generator '" +
                                 ring->generator_names()[i] + "'");
    }
    ScalarExpr e;
    e.terms_ = ring->normal_form(std::move(terms));
    e.ring_ = std::move(ring);
    return e;
}

bool ScalarExpr::is_constant() const {
    if (terms_.empty()) return true;
    return terms_.size() == 1 && total_degree(terms_.begin()->first) == 0 &&
           *std::max_element(terms_.begin()->first.begin(), terms_.begin()->first.end()) == 0 &&
           *std::min_element(terms_.begin()->first.begin(), terms_.begin()->first.end()) == 0;
}

Rational ScalarExpr::constant_value() const {
    if (terms_.empty()) return Rational(0);
    if (!is_constant()) throw ring_error("expression is not constant: " + str());
    return terms_.begin()->second;
}

static void require_same_ring(const ScalarExpr& a, const ScalarExpr& b) {
    if (a.ring() != b.ring()) throw ring_error("operands belong to different rings");
}

ScalarExpr ScalarExpr::operator-() const {
    ScalarExpr e;
    e.ring_ = ring_;
    for (const auto& [m, c] : terms_) e.terms_.emplace(m, -c);
    return e;
}

ScalarExpr ScalarExpr::operator+(const ScalarExpr& o) const {
    require_same_ring(*this, o);
    // sums of normal-form monomials stay normal (reducibility is monotone)
    ScalarExpr e;
    e.ring_ = ring_;
    e.terms_ = terms_;
    for (const auto& [m, c] : o.terms_) add_term(e.terms_, m, c);
    return e;
}

ScalarExpr ScalarExpr::operator-(const ScalarExpr& o) const { return *this + (-o); }

ScalarExpr ScalarExpr::operator*(const ScalarExpr& o) const {
    require_same_ring(*this, o);
    TermMap t;
    for (const auto& [ma, ca] : terms_)
        for (const auto& [mb, cb] : o.terms_) add_term(t, mono_mul(ma, mb), ca * cb);
    return from_terms(ring_, std::move(t));
}

ScalarExpr ScalarExpr::scaled(const Rational& c) const {
    if (c == 0) return zero(ring_);
    ScalarExpr e;
    e.ring_ = ring_;
    for (const auto& [m, k] : terms_) e.terms_.emplace(m, k * c);
    return e;
}

ScalarExpr ScalarExpr::pow(int e) const {
    if (e == 0) return constant(ring_, 1);
    if (e < 0) {
        if (terms_.size() != 1 || terms_.begin()->second != 1)
            throw ring_error("negative power of a non-monomial expression");
        TermMap t;
        Monomial m = terms_.begin()->first;
        for (auto& k : m) k *= e;
        t.emplace(std::move(m), Rational(1));
        return from_terms(ring_, std::move(t));
    }
    ScalarExpr acc = constant(ring_, 1);
    for (int i = 0; i < e; ++i) acc = acc * *this;
    return acc;
}

bool ScalarExpr::operator==(const ScalarExpr& o) const {
    require_same_ring(*this, o);
    return terms_ == o.terms_;
}

ScalarExpr ScalarExpr::partial(size_t gen_index) const {
    // dividing a normal-form monomial by a generator keeps it normal
    ScalarExpr e;
    e.ring_ = ring_;
    for (const auto& [m, c] : terms_) {
        const int k = m[gen_index];
        if (k == 0) continue;
        Monomial q(m);
        q[gen_index] -= 1;
        add_term(e.terms_, q, c * k);
    }
    return e;
}

Rational ScalarExpr::evaluate(const std::vector<Rational>& point) const {
    if (point.size() != ring_->size()) throw ring_error("evaluation point width mismatch");
    Rational acc(0);
    for (const auto& [m, c] : terms_) {
        Rational v = c;
        for (size_t i = 0; i < m.size(); ++i)
            if (m[i] != 0) v *= rational_pow(point[i], m[i]);
        acc += v;
    }
    return acc;
}

std::string ScalarExpr::str() const { return to_string(*this); }

// --- RingSpec ------------------------------------------------------------

namespace {

// Minimal shared tokenizer/parser for polynomial text.
struct ExprParser {
    const RingSpec& ring;
    RingPtr ring_ptr;
    std::string s;
    size_t pos = 0;

    void skip_ws() {
        while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
    }
    bool eat(char c) {
        skip_ws();
        if (pos < s.size() && s[pos] == c) {
            ++pos;
            return true;
        }
        return false;
    }
    [[noreturn]] void fail(const std::string& what) {
        throw ring_error("parse error in '" + s + "' at offset " + std::to_string(pos) + ": " +
                         what);
    }

    std::string name_token() {
        skip_ws();
        size_t start = pos;
        if (pos < s.size() &&
            (std::isalpha(static_cast<unsigned char>(s[pos])) || s[pos] == '_')) {
            ++pos;
            while (pos < s.size() &&
                   (std::isalnum(static_cast<unsigned char>(s[pos])) || s[pos] == '_'))
                ++pos;
        }
        return s.substr(start, pos - start);
    }

    std::optional<Integer> integer_token() {
        skip_ws();
        size_t start = pos;
        while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
        if (pos == start) return std::nullopt;
        return Integer(s.substr(start, pos - start));
    }

    int signed_int() {
        skip_ws();
        int sign = 1;
        if (eat('-')) sign = -1;
        auto v = integer_token();
        if (!v) fail("expected integer exponent");
        if (*v > 64) fail("exponent too large");
        return sign * static_cast<int>(*v);
    }

    ScalarExpr parse() {
        ScalarExpr e = expr();
        skip_ws();
        if (pos != s.size()) fail("trailing input");
        return e;
    }

    ScalarExpr expr() {
        ScalarExpr acc = term();
        for (;;) {
            skip_ws();
            if (eat('+'))
                acc = acc + term();
            else if (eat('-'))
                acc = acc - term();
            else
                return acc;
        }
    }

    ScalarExpr term() {
        ScalarExpr acc = factor();
        for (;;) {
            skip_ws();
            if (eat('*')) {
                acc = acc * factor();
            } else if (eat('/')) {
                skip_ws();
                auto v = integer_token();
                if (!v || *v == 0) fail("'/' requires a nonzero integer literal");
                acc = acc.scaled(Rational(Integer(1), *v));
            } else {
                return acc;
            }
        }
    }

    ScalarExpr factor() {
        skip_ws();
        if (eat('-')) return -factor();
        if (eat('+')) return factor();
        if (eat('(')) {
            ScalarExpr e = expr();
            if (!eat(')')) fail("expected ')'");
            return maybe_pow(e);
        }
        if (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) {
            auto v = integer_token();
            ScalarExpr e = ScalarExpr::constant(ring_ptr, Rational(*v));
            return maybe_pow(e);
        }
        const std::string n = name_token();
        if (n.empty()) fail("expected name, number or '('");
        if (!ring.has_generator(n)) fail("unknown generator '" + n + "'");
        skip_ws();
        if (eat('^')) return ScalarExpr::generator(ring_ptr, n, signed_int());
        return ScalarExpr::generator(ring_ptr, n);
    }

    ScalarExpr maybe_pow(const ScalarExpr& e) {
        skip_ws();
        if (eat('^')) return e.pow(signed_int());
        return e;
    }
};

TermMap parse_raw_terms(const RingPtr& ring, const std::string& text) {
    ExprParser p{*ring, ring, text};
    return p.parse().terms();
}

}  // namespace

RingPtr RingSpec::make(std::vector<std::string> generators, std::vector<std::string> laurent,
                       const std::vector<Relation>& relations,
                       const std::vector<std::string>& denominators,
                       std::map<std::string, Rational> point_evaluations,
                       size_t max_rewrite_steps) {
    auto ring = std::shared_ptr<RingSpec>(new RingSpec());
    ring->max_rewrite_steps = max_rewrite_steps;
    ring->names_ = std::move(generators);
    ring->base_size_ = ring->names_.size();
    for (size_t k = 0; k < denominators.size(); ++k)
        ring->names_.push_back("@inv" + std::to_string(k));
    for (size_t i = 0; i < ring->names_.size(); ++i) {
        if (!ring->index_.emplace(ring->names_[i], i).second)
            throw ring_error("duplicate generator name '" + ring->names_[i] + "'");
    }
    ring->laurent_.assign(ring->names_.size(), false);
    for (const auto& n : laurent) {
        auto it = ring->index_.find(n);
        if (it == ring->index_.end() || it->second >= ring->base_size_)
            throw ring_error("laurent entry '" + n + "' is not a generator");
        ring->laurent_[it->second] = true;
    }

    RingPtr view = ring;  // parse against the ring under construction (no rules yet),
                          // so relation texts are read literally
    std::vector<RewriteRule> parsed;
    for (const auto& rel : relations) {
        TermMap lhs = parse_raw_terms(view, rel.lhs_text);
        if (lhs.size() != 1 || lhs.begin()->second != 1)
            throw ring_error("relation lhs '" + rel.lhs_text +
                             "' must be a single monomial with coefficient 1");
        const Monomial& lm = lhs.begin()->first;
        for (size_t i = 0; i < lm.size(); ++i)
            if (lm[i] < 0) throw ring_error("relation lhs must have nonnegative exponents");
        if (total_degree(lm) == 0) throw ring_error("relation lhs must be non-constant");
        RewriteRule rule;
        rule.lhs = lm;
        rule.rhs = parse_raw_terms(view, rel.rhs_text);
        rule.name = rel.lhs_text + " -> " + rel.rhs_text;
        parsed.push_back(std::move(rule));
    }
    ring->rules_ = std::move(parsed);

    // Localization rules: u*D = 1 oriented at u*LM(D). Denominators are
    // normalized against the user relations first.
    for (size_t k = 0; k < denominators.size(); ++k) {
        TermMap den = ring->normal_form(parse_raw_terms(view, denominators[k]));
        if (den.empty())
            throw ring_error("denominator '" + denominators[k] + "' normalizes to zero");
        const size_t u = ring->base_size_ + k;
        for (const auto& [m, c] : den)
            if (m[u] != 0) throw ring_error("denominator may not mention its own inverse");
        auto lead = den.begin();  // largest monomial
        const Rational lc = lead->second;
        Monomial lhs(lead->first);
        lhs[u] += 1;
        TermMap rhs;
        add_term(rhs, Monomial(ring->names_.size(), 0), Rational(1) / lc);
        for (auto it = std::next(den.begin()); it != den.end(); ++it) {
            Monomial m(it->first);
            m[u] += 1;
            add_term(rhs, m, -it->second / lc);
        }
        RewriteRule rule;
        rule.lhs = std::move(lhs);
        rule.rhs = std::move(rhs);
        rule.name = ring->names_[u] + "*(" + denominators[k] + ") -> 1";
        ring->rules_.push_back(std::move(rule));
        ring->locs_.push_back(Localization{u, std::move(den), denominators[k]});
    }

    // Rule sanity: pairwise distinct leading monomials, no self-reducible rhs.
    for (size_t i = 0; i < ring->rules_.size(); ++i) {
        for (size_t j = i + 1; j < ring->rules_.size(); ++j)
            if (ring->rules_[i].lhs == ring->rules_[j].lhs)
                throw ring_error("rules '" + ring->rules_[i].name + "' and '" +
                                 ring->rules_[j].name + "' share a leading monomial");
        for (const auto& [m, c] : ring->rules_[i].rhs)
            if (divides(ring->rules_[i].lhs, m))
                throw ring_error("rule '" + ring->rules_[i].name +
                                 "' replacement contains its own leading monomial");
    }

    // Normalize rule replacements against the full system now that it exists.
    for (auto& rule : ring->rules_) rule.rhs = ring->normal_form(rule.rhs);

    // Denominators must not be in the ideal.
    for (const auto& loc : ring->locs_)
        if (ring->normal_form(loc.denominator).empty())
            throw ring_error("denominator '" + loc.text + "' normalizes to zero");

    if (!point_evaluations.empty()) {
        std::vector<Rational> pt(ring->names_.size(), Rational(0));
        std::vector<bool> have(ring->names_.size(), false);
        for (const auto& [n, v] : point_evaluations) {
            auto it = ring->index_.find(n);
            if (it == ring->index_.end())
                throw ring_error("point evaluation for unknown generator '" + n + "'");
            pt[it->second] = v;
            have[it->second] = true;
        }
        for (size_t i = 0; i < ring->base_size_; ++i)
            if (!have[i])
                throw ring_error("point evaluation missing generator '" + ring->names_[i] + "'");
        // relations must hold at the point; denominators must be invertible there
        for (size_t k = 0; k < ring->rules_.size(); ++k) {
            const TermMap defect = ring->rule_defect(k);
            Rational acc(0);
            bool uses_loc = false;
            for (const auto& [m, c] : defect)
                for (size_t i = ring->base_size_; i < ring->names_.size(); ++i)
                    if (m[i] != 0) uses_loc = true;
            if (uses_loc) continue;  // localization rules handled via denominators below
            for (const auto& [m, c] : defect) {
                Rational v = c;
                for (size_t i = 0; i < m.size(); ++i)
                    if (m[i] != 0) v *= rational_pow(pt[i], m[i]);
                acc += v;
            }
            if (acc != 0)
                throw ring_error("point evaluation violates relation '" +
                                 ring->rules_[k].name + "'");
        }
        for (auto& loc : ring->locs_) {
            Rational dv(0);
            for (const auto& [m, c] : loc.denominator) {
                Rational v = c;
                for (size_t i = 0; i < m.size(); ++i)
                    if (m[i] != 0) v *= rational_pow(pt[i], m[i]);
                dv += v;
            }
            if (dv == 0)
                throw ring_error("denominator '" + loc.text + "' vanishes at the point");
            pt[loc.gen_index] = Rational(1) / dv;
        }
        ring->point_ = std::move(pt);
    }
    return ring;
}

size_t RingSpec::index_of(const std::string& name) const {
    auto it = index_.find(name);
    if (it == index_.end()) throw ring_error("unknown generator '" + name + "'");
    return it->second;
}

bool RingSpec::has_generator(const std::string& name) const {
    return index_.count(name) != 0;
}

const Localization& RingSpec::localization_of(size_t gen_index) const {
    for (const auto& loc : locs_)
        if (loc.gen_index == gen_index) return loc;
    throw ring_error("generator is not a localization inverse");
}

TermMap RingSpec::rule_defect(size_t k) const {
    TermMap d = rules_[k].rhs;
    for (auto& [m, c] : d) c = -c;
    add_term(d, rules_[k].lhs, Rational(1));
    return d;
}

TermMap RingSpec::normal_form(TermMap terms, const std::vector<size_t>& rule_order) const {
    if (rules_.empty()) return terms;
    std::vector<size_t> order(rules_.size());
    if (rule_order.empty()) {
        for (size_t i = 0; i < order.size(); ++i) order[i] = i;
    } else {
        if (rule_order.size() != rules_.size())
            throw ring_error("rule order permutation has wrong length");
        order = rule_order;
    }

    size_t steps = 0;
    std::deque<std::string> chain;
    // Replacement monomials are strictly smaller than the rewritten one in
    // the term order, so the scan never needs to revisit earlier terms.
    auto it = terms.begin();
    while (it != terms.end()) {
        const RewriteRule* hit = nullptr;
        for (size_t oi = 0; oi < order.size() && !hit; ++oi)
            if (divides(rules_[order[oi]].lhs, it->first)) hit = &rules_[order[oi]];
        if (!hit) {
            ++it;
            continue;
        }
        if (++steps > max_rewrite_steps) {
            std::string msg = "rewriting exceeded " + std::to_string(max_rewrite_steps) +
                              " steps; recent rule chain:";
            for (const auto& n : chain) msg += " [" + n + "]";
            throw rewrite_limit_error(msg);
        }
        chain.push_back(hit->name);
        if (chain.size() > 8) chain.pop_front();
        const Monomial q = quotient(it->first, hit->lhs);
        const Monomial erased = it->first;
        const Rational c = it->second;
        terms.erase(it);
        for (const auto& [rm, rc] : hit->rhs) add_term(terms, mono_mul(q, rm), c * rc);
        it = terms.lower_bound(erased);
    }
    return terms;
}

void accumulate_term(TermMap& dst, const Monomial& m, const Rational& c) {
    add_term(dst, m, c);
}

TermMap raw_partial(const TermMap& terms, size_t gen_index) {
    TermMap out;
    for (const auto& [m, c] : terms) {
        const int k = m[gen_index];
        if (k == 0) continue;
        Monomial q(m);
        q[gen_index] -= 1;
        add_term(out, q, c * k);
    }
    return out;
}

// --- text ----------------------------------------------------------------

ScalarExpr parse_expr(RingPtr ring, const std::string& text) {
    ExprParser p{*ring, ring, text};
    return p.parse();
}

std::string to_string(const ScalarExpr& e) {
    if (e.is_zero()) return "0";
    const auto& names = e.ring()->generator_names();
    std::ostringstream out;
    bool first = true;
    for (const auto& [m, c] : e.terms()) {
        Rational a = c;
        if (first) {
            if (a < 0) {
                out << "-";
                a = -a;
            }
        } else {
            out << (a < 0 ? " - " : " + ");
            if (a < 0) a = -a;
        }
        first = false;
        std::vector<std::string> factors;
        for (size_t i = 0; i < m.size(); ++i) {
            if (m[i] == 0) continue;
            if (m[i] == 1)
                factors.push_back(names[i]);
            else
                factors.push_back(names[i] + "^" + std::to_string(m[i]));
        }
        if (factors.empty()) {
            out << to_string(a);
            continue;
        }
        if (a != 1) out << to_string(a) << "*";
        for (size_t i = 0; i < factors.size(); ++i) {
            if (i) out << "*";
            out << factors[i];
        }
    }
    return out.str();
}

// --- Derivation ----------------------------------------------------------

Derivation::Derivation(RingPtr ring, std::map<std::string, ScalarExpr> on_generators)
    : ring_(std::move(ring)), table_(ring_->size()) {
    for (auto& [name, value] : on_generators) {
        const size_t i = ring_->index_of(name);
        if (value.ring() != ring_) throw ring_error("derivation value in wrong ring");
        table_[i] = std::move(value);
    }
    // quotient rule for localization inverses: V(u) = -u^2 V(D)
    for (const auto& loc : ring_->localizations()) {
        if (table_[loc.gen_index]) continue;
        ScalarExpr d = ScalarExpr::zero(ring_);
        const ScalarExpr den = ScalarExpr::from_terms(ring_, loc.denominator);
        bool ok = true;
        for (size_t j = 0; j < ring_->size() && ok; ++j) {
            const ScalarExpr pj = den.partial(j);
            if (pj.is_zero()) continue;
            if (!table_[j]) {
                ok = false;
                break;
            }
            d = d + pj * *table_[j];
        }
        if (!ok) continue;
        const ScalarExpr u = ScalarExpr::generator(ring_, ring_->generator_names()[loc.gen_index]);
        table_[loc.gen_index] = -(u * u * d);
    }
}

const ScalarExpr& Derivation::on_generator(size_t gen_index) const {
    if (!table_[gen_index])
        throw ring_error("derivation does not cover generator '" +
                         ring_->generator_names()[gen_index] + "'");
    return *table_[gen_index];
}

ScalarExpr Derivation::operator()(const ScalarExpr& e) const {
    if (e.ring() != ring_) throw ring_error("derivation applied across rings");
    ScalarExpr acc = ScalarExpr::zero(ring_);
    for (size_t i = 0; i < ring_->size(); ++i) {
        const ScalarExpr p = e.partial(i);
        if (p.is_zero()) continue;
        acc = acc + p * on_generator(i);
    }
    return acc;
}

void Derivation::check_respects_relations() const {
    // raw partials: the relation polynomial itself is zero in the quotient
    for (size_t k = 0; k < ring_->rules().size(); ++k) {
        const TermMap defect = ring_->rule_defect(k);
        ScalarExpr acc = ScalarExpr::zero(ring_);
        for (size_t g = 0; g < ring_->size(); ++g) {
            const ScalarExpr p = ScalarExpr::from_terms(ring_, raw_partial(defect, g));
            if (p.is_zero()) continue;
            acc = acc + p * on_generator(g);
        }
        if (!acc.is_zero())
            throw ring_error("derivation does not annihilate relation '" +
                             ring_->rules()[k].name + "'");
    }
}

}  // namespace plgb
