#ifndef MORSEOPT_RATIONAL_HPP
#define MORSEOPT_RATIONAL_HPP

#include <cstdint>
#include <string>

#include <gmpxx.h>

namespace morseopt {

// Exact arbitrary-precision rational. All symbolic-layer arithmetic runs on
// this type; doubles appear only at evaluation boundaries.
using Rational = mpq_class;

inline Rational rational_from_long(long n) { return Rational(n); }

// Largest bit length among numerator and denominator, used by the
// coefficient-growth guard.
inline std::size_t rational_bits(const Rational& q) {
    const std::size_t nb = mpz_sizeinbase(q.get_num().get_mpz_t(), 2);
    const std::size_t db = mpz_sizeinbase(q.get_den().get_mpz_t(), 2);
    return nb > db ? nb : db;
}

inline double to_double(const Rational& q) { return q.get_d(); }

// Exact conversion: every finite double is a dyadic rational.
inline Rational rational_from_double_exact(double x) {
    Rational q;
    mpq_set_d(q.get_mpq_t(), x);
    return q;
}

// Continued-fraction rationalization with a denominator cap. Returns the
// last convergent of x whose denominator stays within `max_den`. Used to
// round float certificates back onto nearby exact rationals.
Rational rationalize(double x, unsigned long max_den);

std::string rational_to_string(const Rational& q);

}  // namespace morseopt

#endif
