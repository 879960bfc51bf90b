#ifndef MORSEOPT_POLYNOMIAL_HPP
#define MORSEOPT_POLYNOMIAL_HPP

#include <complex>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "morseopt/errors.hpp"
#include "morseopt/monomial.hpp"
#include "morseopt/rational.hpp"

namespace morseopt {

using Complex = std::complex<double>;

// A complex point in C^n. Real points carry zero imaginary parts.
using Point = Eigen::VectorXcd;

// Sparse multivariate polynomial with exact rational coefficients.
// Terms are stored in increasing graded-reverse-lexicographic order and
// never contain a zero coefficient. Values are immutable in spirit: all
// operations return new polynomials.
class Polynomial {
public:
    using TermMap = std::map<Monomial, Rational>;

    Polynomial() : nvars_(1) {}
    explicit Polynomial(std::size_t nvars) : nvars_(nvars) {}

    static Polynomial zero(std::size_t nvars) { return Polynomial(nvars); }
    static Polynomial constant(std::size_t nvars, const Rational& c);
    static Polynomial variable(std::size_t nvars, std::size_t index);
    static Polynomial term(std::size_t nvars, const Monomial& m, const Rational& c);

    std::size_t nvars() const { return nvars_; }
    const TermMap& terms() const { return terms_; }
    std::size_t num_terms() const { return terms_.size(); }
    bool is_zero() const { return terms_.empty(); }
    bool is_constant() const { return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.is_one()); }

    // Total degree; nullopt is the minus-infinity sentinel of the zero
    // polynomial (never -1 masquerading as a valid degree).
    std::optional<std::uint64_t> degree() const;

    Rational coefficient(const Monomial& m) const;
    Rational constant_term() const { return coefficient(Monomial(nvars_)); }

    Polynomial operator+(const Polynomial& other) const;
    Polynomial operator-(const Polynomial& other) const;
    Polynomial operator-() const;
    Polynomial operator*(const Polynomial& other) const;
    Polynomial operator*(const Rational& c) const;
    Polynomial pow(std::uint32_t e) const;

    bool operator==(const Polynomial& other) const {
        return nvars_ == other.nvars_ && terms_ == other.terms_;
    }
    bool operator!=(const Polynomial& other) const { return !(*this == other); }

    // Formal partial derivative with respect to variable `var`.
    Polynomial derivative(std::size_t var) const;

    // Deterministic floating-point evaluation: terms are accumulated in
    // increasing graded-lex order so results are bit-reproducible.
    Complex evaluate(const Point& p) const;

    double max_abs_coefficient() const;
    std::size_t max_coefficient_bits() const;

    std::string to_string() const;

    // Mutating helper used internally while building results; keeps the
    // no-zero-coefficient invariant.
    void add_term(const Monomial& m, const Rational& c);

private:
    std::size_t nvars_;
    TermMap terms_;

    void check_same_context(const Polynomial& other) const;
};

inline Polynomial operator*(const Rational& c, const Polynomial& p) { return p * c; }

// Parses the ASCII grammar
//   poly   := term (('+'|'-') term)*
//   term   := coeff ('*'? factor)* | factor ('*' factor)*
//   factor := var ('^' uint)? | '(' poly ')' ('^' uint)?
//   var    := 'x' uint            (1-based)
//   coeff  := int | int '/' uint | decimal
// into canonical expanded form. Decimal literals are read exactly by their
// literal denominator (0.5 -> 1/2). With nvars == nullopt the variable count
// is inferred from the highest index used.
Polynomial parse_polynomial(const std::string& text, std::optional<std::size_t> nvars = std::nullopt);

// All n formal partials, the generators of the gradient ideal.
std::vector<Polynomial> gradient(const Polynomial& f);

Complex evaluate(const Polynomial& f, const Point& p);

// Symmetric n x n matrix of second partials at p, symmetrized as
// (H + H^T)/2 to wash out evaluation round-off.
Eigen::MatrixXcd hessian_at(const Polynomial& f, const Point& p);

// Support-based Newton-polyhedron-at-infinity predicate: the support is
// convenient iff every coordinate axis carries a pure power x_i^k, k >= 1.
// axis_witness[i] holds one such monomial when present.
struct ConvenientSupport {
    bool convenient = false;
    std::vector<std::optional<Monomial>> axis_witness;
};

ConvenientSupport is_convenient_support(const Polynomial& f);

}  // namespace morseopt

#endif
