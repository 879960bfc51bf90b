#ifndef MORSEOPT_GROEBNER_HPP
#define MORSEOPT_GROEBNER_HPP

#include <cstdlib>
#include <optional>
#include <vector>

#include "morseopt/polynomial.hpp"

namespace morseopt {

// Resource guards for basis computations. Exceeding either cap is a hard,
// reported failure, never a silent truncation.
struct GroebnerLimits {
    std::size_t max_coeff_bits = 4096;
    std::size_t max_pairs = 200000;

    // Honors MORSE_OPT_MAX_COEFF_BITS when set.
    static GroebnerLimits from_env();
};

// Reduced Groebner basis: generators are monic, no term of any generator is
// divisible by the leading monomial of another, and generators are sorted by
// increasing leading monomial.
struct GroebnerBasis {
    std::vector<Polynomial> generators;
    std::vector<Monomial> leading;  // cached leading monomials, same order
    MonomialOrder order;
    std::vector<Polynomial> original;  // input generators, retained for audit
    std::size_t nvars = 0;

    bool is_unit_ideal() const;
};

// Standard monomials (not divisible by any leading monomial), increasing in
// the basis order. Finite iff the ideal is zero-dimensional.
struct QuotientBasis {
    std::vector<Monomial> standard_monomials;
    std::size_t size() const { return standard_monomials.size(); }
};

// Leading term of p under `order`; p must be nonzero.
std::pair<Monomial, Rational> leading_term(const Polynomial& p, const MonomialOrder& order);

Polynomial s_polynomial(const Polynomial& f, const Polynomial& g, const MonomialOrder& order);

// Remainder of multivariate division by the basis generators: no term of the
// result is divisible by any leading monomial. normal_form(p) == 0 iff p lies
// in the ideal.
Polynomial normal_form(const Polynomial& p, const GroebnerBasis& gb);

// Buchberger's algorithm with the normal pair-selection strategy and the two
// classic elimination criteria. Deterministic for fixed input and order.
GroebnerBasis buchberger(const std::vector<Polynomial>& gens, const MonomialOrder& order,
                         const GroebnerLimits& limits = {});

// True iff every variable has a pure-power leading monomial (or the ideal is
// the unit ideal, whose variety is empty).
bool is_zero_dimensional(const GroebnerBasis& gb);

QuotientBasis quotient_basis(const GroebnerBasis& gb);

// dim of the quotient ring by the gradient ideal; nullopt encodes "infinite"
// (positive-dimensional critical locus).
std::optional<std::size_t> total_milnor_number(const Polynomial& f,
                                               const MonomialOrder& order = MonomialOrder::grevlex(),
                                               const GroebnerLimits& limits = {});

// Exhaustive Buchberger criterion: every S-polynomial of basis pairs reduces
// to zero and every original generator reduces to zero.
bool verify_groebner(const GroebnerBasis& gb);

}  // namespace morseopt

#endif
