#pragma once

#include <boost/container/small_vector.hpp>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "plgb/rational.hpp"

namespace plgb {

struct ring_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Raised when exhaustive rewriting exceeds the step bound; carries the tail
// of the applied rule chain for diagnosis.
struct rewrite_limit_error : ring_error {
    using ring_error::ring_error;
};

// Exponent vector aligned with RingSpec::generator_names(). Negative entries
// are only legal on Laurent or localization generators. The small-buffer
// width covers every bundled ring without heap traffic.
using Monomial = boost::container::small_vector<int, 8>;

int total_degree(const Monomial& m);

// Graded-lex, descending (leading term first when used as a map comparator).
struct MonomialOrder {
    bool operator()(const Monomial& a, const Monomial& b) const;
};

using TermMap = std::map<Monomial, Rational, MonomialOrder>;

class RingSpec;
using RingPtr = std::shared_ptr<const RingSpec>;

// Exact element of the (quotient, optionally localized) polynomial ring,
// kept in rewrite normal form. Immutable value semantics throughout.
class ScalarExpr {
public:
    ScalarExpr() = default;

    static ScalarExpr zero(RingPtr ring);
    static ScalarExpr constant(RingPtr ring, const Rational& c);
    static ScalarExpr generator(RingPtr ring, const std::string& name, int power = 1);
    static ScalarExpr from_terms(RingPtr ring, TermMap terms);  // normalizes

    const RingPtr& ring() const { return ring_; }
    const TermMap& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    bool is_constant() const;
    Rational constant_value() const;  // requires is_constant()

    ScalarExpr operator-() const;
    ScalarExpr operator+(const ScalarExpr& o) const;
    ScalarExpr operator-(const ScalarExpr& o) const;
    ScalarExpr operator*(const ScalarExpr& o) const;
    ScalarExpr scaled(const Rational& c) const;
    ScalarExpr pow(int e) const;  // e >= 0 unless the expr is a single invertible monomial

    bool operator==(const ScalarExpr& o) const;
    bool operator!=(const ScalarExpr& o) const { return !(*this == o); }

    // Formal partial derivative with respect to one generator.
    ScalarExpr partial(size_t gen_index) const;

    // Substitutes point values for every generator (used for identity-point
    // evaluation and random-point spot checks).
    Rational evaluate(const std::vector<Rational>& point) const;

    std::string str() const;

private:
    RingPtr ring_;
    TermMap terms_;
};

struct RewriteRule {
    Monomial lhs;      // pure monomial, nonnegative exponents
    TermMap rhs;
    std::string name;  // e.g. "a*d -> 1+b*c", used in diagnostics
};

// One declared-invertible denominator, realised as an extra generator u with
// the oriented rule u*LM(D) -> (1 - u*(D - LM))/lc.
struct Localization {
    size_t gen_index = 0;
    TermMap denominator;  // over the plain generators
    std::string text;     // the denominator as written in the source spec
};

class RingSpec : public std::enable_shared_from_this<RingSpec> {
public:
    struct Relation {
        std::string lhs_text;  // single monomial with unit coefficient
        std::string rhs_text;
    };

    // `relations` are parsed and oriented as given; one localization
    // generator is appended per denominator.
    static RingPtr make(std::vector<std::string> generators,
                        std::vector<std::string> laurent,
                        const std::vector<Relation>& relations,
                        const std::vector<std::string>& denominators,
                        std::map<std::string, Rational> point_evaluations = {},
                        size_t max_rewrite_steps = 200000);

    const std::vector<std::string>& generator_names() const { return names_; }
    size_t size() const { return names_.size(); }
    size_t base_size() const { return base_size_; }  // excludes localization generators
    size_t index_of(const std::string& name) const;
    bool has_generator(const std::string& name) const;
    bool is_laurent(size_t i) const { return laurent_[i]; }
    bool is_localization(size_t i) const { return i >= base_size_; }
    const std::vector<RewriteRule>& rules() const { return rules_; }
    const std::vector<Localization>& localizations() const { return locs_; }
    const Localization& localization_of(size_t gen_index) const;
    const std::optional<std::vector<Rational>>& point_evaluation() const { return point_; }

    // Exhaustive rewriting; `rule_order` permutes rule priority (for the
    // confluence property test), empty means declaration order.
    TermMap normal_form(TermMap terms, const std::vector<size_t>& rule_order = {}) const;

    size_t max_rewrite_steps = 200000;

    // Relation polynomial lhs - rhs of rule k, as a raw term map.
    TermMap rule_defect(size_t k) const;

private:
    RingSpec() = default;
    std::vector<std::string> names_;
    std::map<std::string, size_t> index_;
    std::vector<bool> laurent_;
    size_t base_size_ = 0;
    std::vector<RewriteRule> rules_;
    std::vector<Localization> locs_;
    std::optional<std::vector<Rational>> point_;
};

// Adds c * m into dst with cancellation.
void accumulate_term(TermMap& dst, const Monomial& m, const Rational& c);

// Formal partial derivative of a raw term map, applied before any quotient
// rewriting. Needed wherever a relation polynomial (which normalizes to zero
// in its own ring) must be differentiated.
TermMap raw_partial(const TermMap& terms, size_t gen_index);

// --- expression text ---------------------------------------------------

// Grammar: names, integer and p/q literals, + - * ^ and parentheses; no
// implicit multiplication. '^' takes an (optionally negative) integer.
ScalarExpr parse_expr(RingPtr ring, const std::string& text);

// Canonical rendering, parseable by parse_expr. Terms in descending order.
std::string to_string(const ScalarExpr& e);

// --- derivations --------------------------------------------------------

// Leibniz extension of a table of generator values. Localization generators
// are derived by the quotient rule when absent from the table; any other
// generator missing from the table makes application to expressions that
// contain it an error.
class Derivation {
public:
    Derivation(RingPtr ring, std::map<std::string, ScalarExpr> on_generators);

    ScalarExpr operator()(const ScalarExpr& e) const;
    bool covers(size_t gen_index) const { return table_[gen_index].has_value(); }
    const ScalarExpr& on_generator(size_t gen_index) const;
    const RingPtr& ring() const { return ring_; }

    // Checks V(lhs - rhs) == 0 for every rewrite rule; throws naming the
    // offending rule (the derivation would not descend to the quotient).
    void check_respects_relations() const;

private:
    RingPtr ring_;
    std::vector<std::optional<ScalarExpr>> table_;
};

}  // namespace plgb
