#pragma once

#include <gmpxx.h>

#include <stdexcept>
#include <string>

namespace cyclicquad {

// Exact rational coefficient field. Backed by GMP; always canonicalized
// (lowest terms, positive denominator), so equality is plain value equality.
using Rational = mpq_class;

inline Rational rat(long num, long den = 1) {
    if (den == 0) throw std::invalid_argument("rat: zero denominator");
    Rational r(num, den);
    r.canonicalize();
    return r;
}

// Accepts "7", "-3/4", "0".
inline Rational rat_from_string(const std::string& text) {
    Rational r;
    if (r.set_str(text, 10) != 0)
        throw std::invalid_argument("rat_from_string: cannot parse '" + text + "'");
    if (r.get_den() == 0) throw std::invalid_argument("rat_from_string: zero denominator");
    r.canonicalize();
    return r;
}

inline std::string to_string(const Rational& r) { return r.get_str(); }

inline double to_double(const Rational& r) { return r.get_d(); }

inline Rational rat_pow(const Rational& base, unsigned long exp) {
    Rational out;
    mpz_pow_ui(out.get_num_mpz_t(), base.get_num_mpz_t(), exp);
    mpz_pow_ui(out.get_den_mpz_t(), base.get_den_mpz_t(), exp);
    return out;  // base canonical => powers canonical
}

}  // namespace cyclicquad
