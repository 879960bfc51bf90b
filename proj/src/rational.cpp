#include "morseopt/rational.hpp"

#include <cmath>
#include <limits>

namespace morseopt {

Rational rationalize(double x, unsigned long max_den) {
    if (!std::isfinite(x)) return Rational(0);
    const bool neg = x < 0;
    double v = neg ? -x : x;

    // Continued-fraction convergents h/k of v; keep the last one whose
    // denominator stays within the cap.
    mpz_class h_prev(1), k_prev(0);
    mpz_class h(static_cast<unsigned long>(std::floor(v))), k(1);
    double frac = v - std::floor(v);
    for (int it = 0; it < 64; ++it) {
        const double approx = mpq_class(h, k).get_d();
        if (std::abs(v - approx) <= 1e-15 * std::max(1.0, v)) break;
        if (frac < std::numeric_limits<double>::epsilon()) break;
        const double inv = 1.0 / frac;
        const double a_f = std::floor(inv);
        if (a_f > 1e18) break;
        mpz_class a(static_cast<unsigned long>(a_f));
        mpz_class h_next = a * h + h_prev;
        mpz_class k_next = a * k + k_prev;
        if (k_next > mpz_class(max_den)) break;
        h_prev = h;
        k_prev = k;
        h = h_next;
        k = k_next;
        frac = inv - a_f;
    }
    Rational q(h, k);
    q.canonicalize();
    return neg ? Rational(-q) : q;
}

std::string rational_to_string(const Rational& q) { return q.get_str(); }

}  // namespace morseopt
