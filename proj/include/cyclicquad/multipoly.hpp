#pragma once

// Exact multivariate polynomial arithmetic over arbitrary-precision rationals.
//
// Polynomials are immutable values in canonical form: an ordered variable
// universe plus a term map from exponent vectors to nonzero coefficients.
// Every operation is a pure function, so values can be shared freely across
// threads.

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "cyclicquad/rational.hpp"

namespace cyclicquad {

struct PolyError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A single polynomial may involve at most this many variables.
inline constexpr std::size_t kMaxVars = 8;

// Exponent vector, zero-padded past the universe size. Lexicographic array
// order doubles as the monomial order (leading term = largest key).
using Exponents = std::array<std::uint16_t, kMaxVars>;

// Canonical variable ordering: the chart variables x,y,z,u,t,lam first (in
// that order), then any other names lexicographically.
int var_rank(const std::string& name);
bool var_precedes(const std::string& a, const std::string& b);

struct ExponentWeighting {
    // Non-negative integer weight per variable. A variable of the target
    // polynomial with no entry is an error; weight 0 is allowed (it excludes
    // the variable from the weighted degree).
    std::map<std::string, unsigned> weights;
};

class MultiPoly {
  public:
    using TermMap = std::map<Exponents, Rational, std::greater<Exponents>>;

    MultiPoly() = default;  // zero polynomial over the empty universe

    static MultiPoly constant(Rational c);
    static MultiPoly constant(long c) { return constant(rat(c)); }
    static MultiPoly variable(const std::string& name);

    // Canonical constructor: duplicate exponent vectors are summed, zero
    // coefficients dropped, the given universe re-sorted canonically.
    // Throws PolyError if an exponent vector length mismatches the universe.
    static MultiPoly build(const std::vector<std::string>& vars,
                           const std::vector<std::pair<std::vector<unsigned>, Rational>>& terms);

    const std::vector<std::string>& vars() const { return vars_; }
    const TermMap& terms() const { return terms_; }

    bool is_zero() const { return terms_.empty(); }
    bool is_constant() const;
    Rational constant_value() const;  // 0 for the zero polynomial

    std::size_t term_count() const { return terms_.size(); }
    int total_degree() const;  // -1 for the zero polynomial
    int degree_in(const std::string& var) const;
    bool depends_on(const std::string& var) const { return degree_in(var) > 0; }

    bool is_homogeneous() const;
    bool is_homogeneous(const ExponentWeighting& w) const;
    long weighted_degree_min(const ExponentWeighting& w) const;  // error on zero poly
    long weighted_degree_max(const ExponentWeighting& w) const;

    Rational coefficient(const std::map<std::string, unsigned>& monomial) const;
    Rational leading_coefficient() const;  // 0 for zero polynomial

    // Drops variables that no longer occur in any term.
    MultiPoly compact() const;

    // Semantic equality: compares over the aligned union universe.
    friend bool operator==(const MultiPoly& a, const MultiPoly& b);
    friend bool operator!=(const MultiPoly& a, const MultiPoly& b) { return !(a == b); }

    friend MultiPoly operator+(const MultiPoly& a, const MultiPoly& b);
    friend MultiPoly operator-(const MultiPoly& a, const MultiPoly& b);
    friend MultiPoly operator-(const MultiPoly& a);
    friend MultiPoly operator*(const MultiPoly& a, const MultiPoly& b);
    friend MultiPoly operator*(const Rational& c, const MultiPoly& a);

    friend MultiPoly poly_pow(const MultiPoly& base, unsigned exp);

    // Exact composition p[var := replacement]. The variable must belong to
    // p's universe; it is removed from the result if it no longer occurs.
    friend MultiPoly substitute(const MultiPoly& p, const std::string& var,
                                const MultiPoly& replacement);

    // den^deg_var(p) * p[var := num/den], as a polynomial. Used to impose a
    // linear or rational case constraint exactly.
    friend MultiPoly substitute_rational(const MultiPoly& p, const std::string& var,
                                         const MultiPoly& num, const MultiPoly& den);

    friend MultiPoly derivative(const MultiPoly& p, const std::string& var);

    // Returns q with q*divisor == dividend exactly, or nullopt. Implemented
    // as long division by the leading monomial in the canonical variable
    // order (equivalent to recursive univariate division in that order, and
    // a singleton divisor set is a Groebner basis, so remainder 0 is exact
    // divisibility). Throws on zero divisor.
    friend std::optional<MultiPoly> divide_exact(const MultiPoly& dividend,
                                                 const MultiPoly& divisor);

    // Sylvester resultant with respect to var; the block of rows built from
    // p comes first, so for p = a*v + b, q = c*v + d the result is a*d - b*c.
    // Throws if var occurs in neither input.
    friend MultiPoly resultant(const MultiPoly& p, const MultiPoly& q, const std::string& var);

    friend Rational evaluate(const MultiPoly& p, const std::map<std::string, Rational>& point);

  private:
    std::vector<std::string> vars_;  // canonically ordered, size <= kMaxVars
    TermMap terms_;

    static MultiPoly from_parts(std::vector<std::string> vars, TermMap terms);
    friend std::pair<MultiPoly, MultiPoly> aligned(const MultiPoly& a, const MultiPoly& b);
};

// Coefficients of p viewed as univariate in var: index k = coefficient of
// var^k (with var removed from each coefficient's exponents, universe kept).
std::vector<MultiPoly> coefficients_in(const MultiPoly& p, const std::string& var);

// Sum of the terms of p whose weighted degree equals `order`; with no order
// given, the stratum at the minimal weighted degree (the Newton-polygon
// first truncation). Throws on the zero polynomial or if order lies below
// the minimal weighted degree.
MultiPoly weighted_truncation(const MultiPoly& p, const ExponentWeighting& w,
                              std::optional<long> order = std::nullopt);

// Primitive part with positive leading coefficient; on return *content holds
// the rational c with p == c * primitive. Zero polynomial maps to itself.
MultiPoly primitive_part(const MultiPoly& p, Rational* content = nullptr);

// Fraction-free (Bareiss) determinant; entries are consumed.
MultiPoly poly_determinant(std::vector<std::vector<MultiPoly>> m);

struct PolyStructure {
    std::size_t term_count = 0;
    int total_degree = -1;
    std::map<std::string, int> degree_by_var;
};
PolyStructure structure(const MultiPoly& p);

// Plain-text form: sum of "coef*x^i*y^j" monomials with '/' in rational
// coefficients, leading term first, e.g. "3/4*x^2*y - 2*x + 5".
std::string to_string(const MultiPoly& p);
MultiPoly parse_poly(const std::string& text);

}  // namespace cyclicquad
