#include <doctest.h>

#include <random>

#include "helpers.hpp"
#include "morseopt/polynomial.hpp"

using namespace morseopt;
using morseopt::testing::random_polynomial;

TEST_CASE("parsing the running example expands to four canonical terms") {
    const Polynomial f = parse_polynomial("x1^2 + (x1*x2 - 1)^2");
    CHECK(f.nvars() == 2);
    CHECK(f.num_terms() == 4);
    CHECK(f.coefficient(Monomial({2, 0})) == Rational(1));
    CHECK(f.coefficient(Monomial({2, 2})) == Rational(1));
    CHECK(f.coefficient(Monomial({1, 1})) == Rational(-2));
    CHECK(f.coefficient(Monomial({0, 0})) == Rational(1));
    CHECK(f.degree() == 4u);
}

TEST_CASE("zero polynomial has an empty term map and no degree") {
    const Polynomial z = parse_polynomial("0");
    CHECK(z.is_zero());
    CHECK(z.num_terms() == 0);
    CHECK(!z.degree().has_value());
}

TEST_CASE("binomial cube expands with coefficients 1,3,3,1") {
    const Polynomial f = parse_polynomial("(x1+x2)^3");
    CHECK(f.num_terms() == 4);
    CHECK(f.coefficient(Monomial({3, 0})) == Rational(1));
    CHECK(f.coefficient(Monomial({2, 1})) == Rational(3));
    CHECK(f.coefficient(Monomial({1, 2})) == Rational(3));
    CHECK(f.coefficient(Monomial({0, 3})) == Rational(1));
}

TEST_CASE("decimal literals are read exactly by their literal denominator") {
    CHECK(parse_polynomial("0.5").constant_term() == Rational(1, 2));
    CHECK(parse_polynomial("0.1").constant_term() == Rational(1, 10));
    CHECK(parse_polynomial("2.25*x1").coefficient(Monomial({1})) == Rational(9, 4));
}

TEST_CASE("rational coefficients and implicit multiplication") {
    const Polynomial f = parse_polynomial("1/2*x1*(1 - x2^2)", 2);
    CHECK(f.coefficient(Monomial({1, 0})) == Rational(1, 2));
    CHECK(f.coefficient(Monomial({1, 2})) == Rational(-1, 2));
    CHECK(parse_polynomial("3x1", 1) == parse_polynomial("3*x1", 1));
}

TEST_CASE("parse errors carry positions and codes") {
    CHECK_THROWS_AS(parse_polynomial("x1 + + x2"), ParseError);
    CHECK_THROWS_AS(parse_polynomial("y + 1"), ParseError);
    CHECK_THROWS_AS(parse_polynomial("x0 + 1"), ParseError);
    CHECK_THROWS_AS(parse_polynomial("x3", 2), ParseError);
    CHECK_THROWS_AS(parse_polynomial("x1^99999999"), ParseError);
    CHECK_THROWS_AS(parse_polynomial("(x1"), ParseError);
    try {
        parse_polynomial("x1 + @");
        CHECK(false);
    } catch (const ParseError& e) {
        CHECK(e.code() == "parse_error");
        CHECK(e.position() > 0);
    }
}

TEST_CASE("gradient of the running example") {
    const Polynomial f = parse_polynomial("x1^2 + (x1*x2 - 1)^2");
    const auto g = gradient(f);
    REQUIRE(g.size() == 2);
    CHECK(g[0] == parse_polynomial("2*x1 + 2*x2*(x1*x2 - 1)", 2));
    CHECK(g[1] == parse_polynomial("2*x1*(x1*x2 - 1)", 2));
}

TEST_CASE("gradient of a constant is a vector of zero polynomials") {
    const auto g = gradient(parse_polynomial("7/3", 2));
    REQUIRE(g.size() == 2);
    CHECK(g[0].is_zero());
    CHECK(g[1].is_zero());
}

TEST_CASE("power rule") {
    const auto g = gradient(parse_polynomial("x1^4"));
    REQUIRE(g.size() == 1);
    CHECK(g[0] == parse_polynomial("4*x1^3"));
}

TEST_CASE("evaluation along the escape path x = 1/y") {
    const Polynomial f = parse_polynomial("x1^2 + (x1*x2 - 1)^2");
    Point p(2);
    p << Complex(1e-3, 0), Complex(1e3, 0);
    const Complex v = f.evaluate(p);
    CHECK(std::abs(v.imag()) == 0.0);
    CHECK(v.real() == doctest::Approx(1e-6).epsilon(1e-6));
    CHECK(v.real() < 1e-5);
}

TEST_CASE("evaluation at the origin returns the constant term") {
    const Polynomial f = parse_polynomial("x1^3*x2 - 5*x1 + 3/4", 2);
    Point p = Point::Zero(2);
    CHECK(f.evaluate(p) == Complex(0.75, 0.0));
}

TEST_CASE("complex evaluation: x1*x2 at (i, i) is -1") {
    const Polynomial f = parse_polynomial("x1*x2");
    Point p(2);
    p << Complex(0, 1), Complex(0, 1);
    const Complex v = f.evaluate(p);
    CHECK(v.real() == doctest::Approx(-1.0));
    CHECK(v.imag() == doctest::Approx(0.0));
}

TEST_CASE("hessian of the running example at the origin") {
    const Polynomial f = parse_polynomial("x1^2 + (x1*x2 - 1)^2");
    const Eigen::MatrixXcd h = hessian_at(f, Point::Zero(2));
    CHECK(h(0, 0).real() == doctest::Approx(2.0));
    CHECK(h(0, 1).real() == doctest::Approx(-2.0));
    CHECK(h(1, 0).real() == doctest::Approx(-2.0));
    CHECK(h(1, 1).real() == doctest::Approx(0.0));
    CHECK(h.determinant().real() == doctest::Approx(-4.0));
}

TEST_CASE("hessian of the sphere is twice the identity everywhere") {
    const Polynomial f = parse_polynomial("x1^2 + x2^2 + x3^2");
    Point p(3);
    p << Complex(0.3, 0), Complex(-1.7, 0), Complex(2.0, 0);
    const Eigen::MatrixXcd h = hessian_at(f, p);
    CHECK((h - 2.0 * Eigen::MatrixXcd::Identity(3, 3)).norm() == doctest::Approx(0.0));
}

TEST_CASE("univariate second derivative at zero") {
    const Polynomial f = parse_polynomial("x1^4 - 2*x1^2");
    const Eigen::MatrixXcd h = hessian_at(f, Point::Zero(1));
    CHECK(h(0, 0).real() == doctest::Approx(-4.0));
}

TEST_CASE("convenient support of the running example fails on the x2 axis") {
    const auto cs = is_convenient_support(parse_polynomial("x1^2 + (x1*x2 - 1)^2"));
    CHECK_FALSE(cs.convenient);
    CHECK(cs.axis_witness[0].has_value());  // x1^2 is a pure power
    CHECK_FALSE(cs.axis_witness[1].has_value());
}

TEST_CASE("convenient support with witnesses on both axes") {
    const auto cs = is_convenient_support(parse_polynomial("x1^2 + x2^2"));
    CHECK(cs.convenient);
    CHECK(*cs.axis_witness[0] == Monomial({2, 0}));
    CHECK(*cs.axis_witness[1] == Monomial({0, 2}));
}

TEST_CASE("a single mixed term is not convenient") {
    CHECK_FALSE(is_convenient_support(parse_polynomial("x1*x2")).convenient);
}

TEST_CASE("ring axioms hold exactly on random polynomials") {
    std::mt19937_64 rng(2024);
    for (int trial = 0; trial < 60; ++trial) {
        const std::size_t n = 1 + trial % 3;
        const Polynomial f = random_polynomial(rng, n, 4, 8, 10);
        const Polynomial g = random_polynomial(rng, n, 4, 8, 10);
        const Polynomial h = random_polynomial(rng, n, 4, 8, 10);
        CHECK((f + g) + h == f + (g + h));
        CHECK(f * (g + h) == f * g + f * h);
        CHECK(f * g == g * f);
        CHECK((f - f).is_zero());
    }
}

TEST_CASE("gradient matches central finite differences") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> coord(-1.0, 1.0);
    const double h = 1e-4;
    for (int trial = 0; trial < 40; ++trial) {
        const std::size_t n = 1 + trial % 3;
        const Polynomial f = random_polynomial(rng, n, 4, 8, 10);
        const auto grad = gradient(f);
        Point p(static_cast<Eigen::Index>(n));
        for (std::size_t i = 0; i < n; ++i) p(static_cast<Eigen::Index>(i)) = Complex(coord(rng), 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            Point pp = p, pm = p;
            pp(static_cast<Eigen::Index>(i)) += h;
            pm(static_cast<Eigen::Index>(i)) -= h;
            const double fd = (f.evaluate(pp).real() - f.evaluate(pm).real()) / (2 * h);
            CHECK(std::abs(grad[i].evaluate(p).real() - fd) <= 1e-5);
        }
    }
}

TEST_CASE("hessian equals the Jacobian of the gradient") {
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> coord(-1.0, 1.0);
    for (int trial = 0; trial < 25; ++trial) {
        const std::size_t n = 1 + trial % 3;
        const Polynomial f = random_polynomial(rng, n, 5, 8, 10);
        const auto grad = gradient(f);
        Point p(static_cast<Eigen::Index>(n));
        for (std::size_t i = 0; i < n; ++i) p(static_cast<Eigen::Index>(i)) = Complex(coord(rng), 0.0);
        const Eigen::MatrixXcd h = hessian_at(f, p);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                const Complex jac = grad[i].derivative(j).evaluate(p);
                CHECK(std::abs(h(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) - jac) <=
                      1e-10);
            }
    }
}

TEST_CASE("parse-print-parse is the identity") {
    std::mt19937_64 rng(31415);
    for (int trial = 0; trial < 60; ++trial) {
        const std::size_t n = 1 + trial % 3;
        const Polynomial f = random_polynomial(rng, n, 5, 10, 50);
        const Polynomial g = parse_polynomial(f.to_string(), n);
        CHECK(f == g);
        CHECK(f.to_string() == g.to_string());
    }
    CHECK(parse_polynomial(parse_polynomial("0").to_string()).is_zero());
}

TEST_CASE("hessians are exactly symmetric") {
    std::mt19937_64 rng(5);
    const Polynomial f = random_polynomial(rng, 3, 5, 10, 10);
    Point p(3);
    p << Complex(0.2, 0.1), Complex(-0.4, 0), Complex(1.1, -0.3);
    const Eigen::MatrixXcd h = hessian_at(f, p);
    CHECK((h - h.transpose()).norm() <= 1e-12 * (1.0 + h.norm()));
}
