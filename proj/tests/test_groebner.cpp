#include <doctest.h>

#include <random>

#include "helpers.hpp"
#include "morseopt/groebner.hpp"

using namespace morseopt;
using morseopt::testing::random_polynomial;

namespace {

Polynomial poly(const std::string& s, std::size_t n) { return parse_polynomial(s, n); }

// Exact univariate division remainder, used as an independent oracle.
Polynomial univariate_rem(Polynomial a, const Polynomial& b) {
    const MonomialOrder order = MonomialOrder::grevlex();
    const auto [lmb, lcb] = leading_term(b, order);
    while (!a.is_zero()) {
        const auto [lma, lca] = leading_term(a, order);
        if (lma.total_degree() < lmb.total_degree()) break;
        const Polynomial q = Polynomial::term(1, lma / lmb, lca / lcb);
        a = a - q * b;
    }
    return a;
}

Polynomial univariate_gcd(Polynomial a, Polynomial b) {
    while (!b.is_zero()) {
        Polynomial r = univariate_rem(a, b);
        a = b;
        b = r;
    }
    return a;
}

}  // namespace

TEST_CASE("scaled variable generators reduce to the monic basis {x1, x2}") {
    const auto gb = buchberger({poly("2*x1", 2), poly("2*x2", 2)}, MonomialOrder::grevlex());
    REQUIRE(gb.generators.size() == 2);
    CHECK(gb.generators[0] == poly("x1", 2));
    CHECK(gb.generators[1] == poly("x2", 2));
}

TEST_CASE("gradient basis of the running example has a one-dimensional quotient") {
    const Polynomial f = poly("x1^2 + (x1*x2 - 1)^2", 2);
    const auto gb = buchberger(gradient(f), MonomialOrder::grevlex());
    CHECK(is_zero_dimensional(gb));
    const auto qb = quotient_basis(gb);
    CHECK(qb.size() == 1);
    CHECK(qb.standard_monomials[0].is_one());
}

TEST_CASE("single univariate generator is made monic") {
    const auto gb = buchberger({poly("4*x1^3", 1)}, MonomialOrder::grevlex());
    REQUIRE(gb.generators.size() == 1);
    CHECK(gb.generators[0] == poly("x1^3", 1));
}

TEST_CASE("f - 1 lies in the gradient ideal of the running example") {
    const Polynomial f = poly("x1^2 + (x1*x2 - 1)^2", 2);
    const auto gb = buchberger(gradient(f), MonomialOrder::grevlex());
    const Polynomial shifted = f - Polynomial::constant(2, Rational(1));
    CHECK(normal_form(shifted, gb).is_zero());
}

TEST_CASE("generators reduce to zero; constants survive reduction") {
    const Polynomial f = poly("x1^3 - 3*x1*x2 + x2^2", 2);
    const auto gens = gradient(f);
    const auto gb = buchberger(gens, MonomialOrder::grevlex());
    for (const auto& g : gens) CHECK(normal_form(g, gb).is_zero());

    const auto axes = buchberger({poly("x1", 2), poly("x2", 2)}, MonomialOrder::grevlex());
    CHECK(normal_form(poly("1", 2), axes) == poly("1", 2));
}

TEST_CASE("zero-dimensionality detection") {
    CHECK(is_zero_dimensional(buchberger(gradient(poly("x1^2 + x2^2", 2)), MonomialOrder::grevlex())));
    CHECK(is_zero_dimensional(buchberger(gradient(poly("x1*x2", 2)), MonomialOrder::grevlex())));
    // The single generator x1*x2 cuts out the coordinate axes, a curve.
    CHECK_FALSE(is_zero_dimensional(buchberger({poly("x1*x2", 2)}, MonomialOrder::grevlex())));
}

TEST_CASE("quotient bases of monomial and near-monomial ideals") {
    const auto gb1 = buchberger({poly("x1^3", 1)}, MonomialOrder::grevlex());
    const auto qb1 = quotient_basis(gb1);
    REQUIRE(qb1.size() == 3);
    CHECK(qb1.standard_monomials[0] == Monomial({0}));
    CHECK(qb1.standard_monomials[1] == Monomial({1}));
    CHECK(qb1.standard_monomials[2] == Monomial({2}));

    const auto gb2 = buchberger(gradient(poly("x1^4 - 2*x1^2", 1)), MonomialOrder::grevlex());
    REQUIRE(gb2.generators.size() == 1);
    CHECK(gb2.generators[0] == poly("x1^3 - x1", 1));
    CHECK(quotient_basis(gb2).size() == 3);
}

TEST_CASE("quotient basis of a positive-dimensional ideal is an error") {
    const auto gb = buchberger({poly("x1*x2", 2)}, MonomialOrder::grevlex());
    CHECK_THROWS_AS(quotient_basis(gb), PositiveDimensionalError);
}

TEST_CASE("total Milnor numbers of the named fixtures") {
    CHECK(total_milnor_number(poly("x1^2 + x2^2", 2)) == 1u);
    CHECK(total_milnor_number(poly("x1^4", 1)) == 3u);
    CHECK(total_milnor_number(poly("x1^2 + (x1*x2 - 1)^2", 2)) == 1u);
    CHECK(total_milnor_number(poly("x1^4 - 2*x1^2", 1)) == 3u);
}

TEST_CASE("positive-dimensional gradient ideal reports an infinite Milnor number") {
    CHECK(!total_milnor_number(poly("x1^2*x2^2", 2)).has_value());
}

TEST_CASE("constant input is rejected") {
    CHECK_THROWS_AS(total_milnor_number(poly("5", 2)), std::invalid_argument);
}

TEST_CASE("resource limits fail loudly") {
    GroebnerLimits tight;
    tight.max_pairs = 1;
    const std::vector<Polynomial> gens = {poly("x1^2 + x2", 2), poly("x1*x2 + x1", 2),
                                          poly("x2^3 - x1", 2)};
    CHECK_THROWS_AS(buchberger(gens, MonomialOrder::grevlex(), tight), ResourceLimitError);

    GroebnerLimits small_bits;
    small_bits.max_coeff_bits = 4;
    const std::vector<Polynomial> big = {poly("65536*x1^2 + x2", 2), poly("x1*x2 + 65537", 2)};
    CHECK_THROWS_AS(buchberger(big, MonomialOrder::grevlex(), small_bits), ResourceLimitError);
}

TEST_CASE("environment override parses") {
    const GroebnerLimits def = GroebnerLimits::from_env();
    CHECK(def.max_coeff_bits >= 1);
}

TEST_CASE("computed bases pass the exhaustive Buchberger criterion") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 25; ++trial) {
        std::vector<Polynomial> gens;
        const std::size_t k = 1 + trial % 3;
        for (std::size_t i = 0; i < k; ++i) {
            Polynomial g = random_polynomial(rng, 2, 3, 5, 5);
            if (!g.is_zero()) gens.push_back(g);
        }
        if (gens.empty()) continue;
        const auto gb = buchberger(gens, MonomialOrder::grevlex());
        CHECK(verify_groebner(gb));
    }
}

TEST_CASE("normal form is linear over random rational combinations") {
    std::mt19937_64 rng(17);
    std::uniform_int_distribution<int> num(-9, 9);
    std::uniform_int_distribution<int> den(1, 9);
    const auto gb = buchberger(gradient(poly("x1^4 - 2*x1^2 + x2^2", 2)), MonomialOrder::grevlex());
    for (int trial = 0; trial < 30; ++trial) {
        const Polynomial p = random_polynomial(rng, 2, 5, 8, 10);
        const Polynomial q = random_polynomial(rng, 2, 5, 8, 10);
        const Rational a(num(rng), den(rng));
        const Rational b(num(rng), den(rng));
        const Polynomial lhs = normal_form(p * a + q * b, gb);
        const Polynomial rhs = normal_form(p, gb) * a + normal_form(q, gb) * b;
        CHECK(lhs == rhs);
    }
}

TEST_CASE("quotient dimension is independent of the monomial order") {
    std::mt19937_64 rng(23);
    const std::vector<MonomialOrder> orders = {MonomialOrder::grevlex(), MonomialOrder::lex(),
                                               MonomialOrder::grlex()};
    int checked = 0;
    for (int trial = 0; trial < 40 && checked < 12; ++trial) {
        const Polynomial f = random_polynomial(rng, 2, 4, 8, 5);
        if (!f.degree() || *f.degree() < 1) continue;
        std::vector<std::optional<std::size_t>> mus;
        bool ok = true;
        for (const auto& ord : orders) {
            try {
                mus.push_back(total_milnor_number(f, ord));
            } catch (const ResourceLimitError&) {
                ok = false;
                break;
            }
        }
        if (!ok) continue;
        CHECK(mus[0] == mus[1]);
        CHECK(mus[0] == mus[2]);
        ++checked;
    }
    CHECK(checked >= 5);
}

TEST_CASE("univariate Milnor numbers match the derivative-degree oracle") {
    std::mt19937_64 rng(41);
    for (int trial = 0; trial < 30; ++trial) {
        const Polynomial f = random_polynomial(rng, 1, 6, 7, 10);
        const auto d = f.degree();
        if (!d || *d < 1) continue;
        const Polynomial fp = f.derivative(0);
        if (fp.is_zero()) continue;

        // dim C[x]/<f'> is deg f' for any nonzero univariate f'.
        const auto mu = total_milnor_number(f);
        REQUIRE(mu.has_value());
        CHECK(*mu == *fp.degree());

        // With f' squarefree (gcd(f', f'') constant), mu equals deg f'.
        const Polynomial g = univariate_gcd(fp, fp.derivative(0));
        if (g.degree() == 0u) CHECK(*mu == *fp.degree());
    }
}

TEST_CASE("lex and permuted orders produce valid bases") {
    const Polynomial f = poly("x1^2 + (x1*x2 - 1)^2", 2);
    const auto gb_lex = buchberger(gradient(f), MonomialOrder::lex());
    CHECK(verify_groebner(gb_lex));
    CHECK(quotient_basis(gb_lex).size() == 1);

    MonomialOrder swapped{OrderKind::grevlex, {1, 0}};
    const auto gb_sw = buchberger(gradient(f), swapped);
    CHECK(verify_groebner(gb_sw));
    CHECK(quotient_basis(gb_sw).size() == 1);
}

TEST_CASE("basis computation is deterministic") {
    const Polynomial f = poly("x1^3 - 2*x1*x2 + x2^4 - 1", 2);
    const auto a = buchberger(gradient(f), MonomialOrder::grevlex());
    const auto b = buchberger(gradient(f), MonomialOrder::grevlex());
    REQUIRE(a.generators.size() == b.generators.size());
    for (std::size_t i = 0; i < a.generators.size(); ++i) CHECK(a.generators[i] == b.generators[i]);
}
