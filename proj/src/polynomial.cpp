#include "morseopt/polynomial.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

namespace morseopt {

Polynomial Polynomial::constant(std::size_t nvars, const Rational& c) {
    Polynomial p(nvars);
    p.add_term(Monomial(nvars), c);
    return p;
}

Polynomial Polynomial::variable(std::size_t nvars, std::size_t index) {
    std::vector<std::uint32_t> e(nvars, 0u);
    e.at(index) = 1;
    Polynomial p(nvars);
    p.add_term(Monomial(std::move(e)), Rational(1));
    return p;
}

Polynomial Polynomial::term(std::size_t nvars, const Monomial& m, const Rational& c) {
    Polynomial p(nvars);
    p.add_term(m, c);
    return p;
}

std::optional<std::uint64_t> Polynomial::degree() const {
    if (terms_.empty()) return std::nullopt;
    // Canonical order is graded, so the last term carries the total degree.
    return terms_.rbegin()->first.total_degree();
}

Rational Polynomial::coefficient(const Monomial& m) const {
    auto it = terms_.find(m);
    return it == terms_.end() ? Rational(0) : it->second;
}

void Polynomial::add_term(const Monomial& m, const Rational& c) {
    if (sgn(c) == 0) return;
    auto it = terms_.find(m);
    if (it == terms_.end()) {
        terms_.emplace(m, c);
    } else {
        it->second += c;
        if (sgn(it->second) == 0) terms_.erase(it);
    }
}

void Polynomial::check_same_context(const Polynomial& other) const {
    if (nvars_ != other.nvars_)
        throw DimensionMismatchError("polynomials live in different variable contexts (" +
                                     std::to_string(nvars_) + " vs " + std::to_string(other.nvars_) + ")");
}

Polynomial Polynomial::operator+(const Polynomial& other) const {
    check_same_context(other);
    Polynomial r(*this);
    for (const auto& [m, c] : other.terms_) r.add_term(m, c);
    return r;
}

Polynomial Polynomial::operator-(const Polynomial& other) const {
    check_same_context(other);
    Polynomial r(*this);
    for (const auto& [m, c] : other.terms_) r.add_term(m, -c);
    return r;
}

Polynomial Polynomial::operator-() const {
    Polynomial r(nvars_);
    for (const auto& [m, c] : terms_) r.terms_.emplace(m, -c);
    return r;
}

Polynomial Polynomial::operator*(const Polynomial& other) const {
    check_same_context(other);
    Polynomial r(nvars_);
    for (const auto& [ma, ca] : terms_)
        for (const auto& [mb, cb] : other.terms_) r.add_term(ma * mb, ca * cb);
    return r;
}

Polynomial Polynomial::operator*(const Rational& c) const {
    Polynomial r(nvars_);
    if (sgn(c) == 0) return r;
    for (const auto& [m, q] : terms_) r.terms_.emplace(m, q * c);
    return r;
}

Polynomial Polynomial::pow(std::uint32_t e) const {
    Polynomial result = Polynomial::constant(nvars_, Rational(1));
    Polynomial base(*this);
    while (e > 0) {
        if (e & 1u) result = result * base;
        e >>= 1u;
        if (e > 0) base = base * base;
    }
    return result;
}

Polynomial Polynomial::derivative(std::size_t var) const {
    Polynomial r(nvars_);
    for (const auto& [m, c] : terms_) {
        const std::uint32_t e = m.exponent(var);
        if (e == 0) continue;
        auto exps = m.exponents();
        exps[var] = e - 1;
        r.add_term(Monomial(std::move(exps)), c * Rational(static_cast<long>(e)));
    }
    return r;
}

Complex Polynomial::evaluate(const Point& p) const {
    if (static_cast<std::size_t>(p.size()) != nvars_)
        throw DimensionMismatchError("point dimension " + std::to_string(p.size()) +
                                     " does not match nvars " + std::to_string(nvars_));
    if (terms_.empty()) return Complex(0.0, 0.0);

    // Per-variable power tables, built by repeated multiplication so the
    // result is a deterministic function of the inputs.
    std::vector<std::uint32_t> max_exp(nvars_, 0u);
    for (const auto& [m, c] : terms_)
        for (std::size_t i = 0; i < nvars_; ++i) max_exp[i] = std::max(max_exp[i], m.exponent(i));
    std::vector<std::vector<Complex>> powers(nvars_);
    for (std::size_t i = 0; i < nvars_; ++i) {
        powers[i].resize(max_exp[i] + 1);
        powers[i][0] = Complex(1.0, 0.0);
        for (std::uint32_t e = 1; e <= max_exp[i]; ++e) powers[i][e] = powers[i][e - 1] * p(i);
    }

    // Accumulate in increasing graded-lex order for bit-reproducibility.
    std::vector<const Monomial*> order;
    order.reserve(terms_.size());
    for (const auto& [m, c] : terms_) order.push_back(&m);
    std::sort(order.begin(), order.end(),
              [](const Monomial* a, const Monomial* b) { return Monomial::grlex_less(*a, *b); });

    Complex sum(0.0, 0.0);
    for (const Monomial* m : order) {
        Complex v(to_double(terms_.at(*m)), 0.0);
        for (std::size_t i = 0; i < nvars_; ++i)
            if (m->exponent(i) > 0) v *= powers[i][m->exponent(i)];
        sum += v;
    }
    return sum;
}

double Polynomial::max_abs_coefficient() const {
    double m = 0.0;
    for (const auto& [mon, c] : terms_) m = std::max(m, std::abs(to_double(c)));
    return m;
}

std::size_t Polynomial::max_coefficient_bits() const {
    std::size_t m = 0;
    for (const auto& [mon, c] : terms_) m = std::max(m, rational_bits(c));
    return m;
}

std::string Polynomial::to_string() const {
    if (terms_.empty()) return "0";
    std::string s;
    // Leading term first: iterate the canonical order downward.
    for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
        const Monomial& m = it->first;
        const Rational& c = it->second;
        const bool neg = sgn(c) < 0;
        const Rational mag = neg ? Rational(-c) : c;
        if (s.empty()) {
            if (neg) s += "-";
        } else {
            s += neg ? " - " : " + ";
        }
        if (m.is_one()) {
            s += rational_to_string(mag);
        } else if (mag == 1) {
            s += m.to_string();
        } else {
            s += rational_to_string(mag) + "*" + m.to_string();
        }
    }
    return s;
}

std::vector<Polynomial> gradient(const Polynomial& f) {
    std::vector<Polynomial> g;
    g.reserve(f.nvars());
    for (std::size_t i = 0; i < f.nvars(); ++i) g.push_back(f.derivative(i));
    return g;
}

Complex evaluate(const Polynomial& f, const Point& p) { return f.evaluate(p); }

Eigen::MatrixXcd hessian_at(const Polynomial& f, const Point& p) {
    const auto n = static_cast<Eigen::Index>(f.nvars());
    if (p.size() != n)
        throw DimensionMismatchError("point dimension does not match polynomial context");
    Eigen::MatrixXcd h(n, n);
    std::vector<Polynomial> grad = gradient(f);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = i; j < n; ++j) {
            const Complex v = grad[static_cast<std::size_t>(i)].derivative(static_cast<std::size_t>(j)).evaluate(p);
            h(i, j) = v;
            h(j, i) = v;
        }
    }
    return 0.5 * (h + h.transpose().eval());
}

ConvenientSupport is_convenient_support(const Polynomial& f) {
    ConvenientSupport r;
    r.axis_witness.assign(f.nvars(), std::nullopt);
    for (const auto& [m, c] : f.terms()) {
        for (std::size_t i = 0; i < f.nvars(); ++i) {
            if (m.exponent(i) >= 1 && m.is_pure_power(i) && !r.axis_witness[i])
                r.axis_witness[i] = m;
        }
    }
    r.convenient = true;
    for (const auto& w : r.axis_witness)
        if (!w) r.convenient = false;
    return r;
}

// ---------------------------------------------------------------------------
// Parser

namespace {

constexpr std::uint32_t kMaxExponent = 1u << 20;

class Parser {
public:
    Parser(const std::string& text, std::size_t nvars) : text_(text), nvars_(nvars) {}

    Polynomial parse() {
        Polynomial p = parse_poly();
        skip_ws();
        if (pos_ != text_.size()) throw ParseError("unexpected trailing input", pos_);
        return p;
    }

private:
    const std::string& text_;
    std::size_t nvars_;
    std::size_t pos_ = 0;

    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    char peek() {
        skip_ws();
        return pos_ < text_.size() ? text_[pos_] : '\0';
    }

    bool consume(char c) {
        if (peek() == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    Polynomial parse_poly() {
        Polynomial acc(nvars_);
        bool first = true;
        for (;;) {
            int sign = 1;
            char c = peek();
            if (c == '+' || c == '-') {
                ++pos_;
                sign = (c == '-') ? -1 : 1;
            } else if (!first) {
                break;
            }
            Polynomial t = parse_term();
            acc = (sign < 0) ? acc - t : acc + t;
            first = false;
            c = peek();
            if (c != '+' && c != '-') break;
        }
        return acc;
    }

    // term := coeff ('*'? factor)* | factor ('*' factor)*
    Polynomial parse_term() {
        Polynomial acc = Polynomial::constant(nvars_, Rational(1));
        bool any = false;
        char c = peek();
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            acc = acc * parse_coeff();
            any = true;
        }
        for (;;) {
            skip_ws();
            std::size_t before = pos_;
            bool star = consume('*');
            c = peek();
            if (c == 'x' || c == '(') {
                acc = acc * parse_factor();
                any = true;
            } else if (star) {
                // allow "2 * 3" style numeric products
                if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
                    acc = acc * parse_coeff();
                    any = true;
                } else {
                    throw ParseError("expected factor after '*'", pos_);
                }
            } else {
                pos_ = before;
                break;
            }
        }
        if (!any) throw ParseError("expected term", pos_);
        return acc;
    }

    Polynomial parse_factor() {
        char c = peek();
        if (c == '(') {
            ++pos_;
            Polynomial inner = parse_poly();
            if (!consume(')')) throw ParseError("expected ')'", pos_);
            if (consume('^')) return inner.pow(parse_uint("exponent"));
            return inner;
        }
        if (c == 'x') {
            ++pos_;
            if (pos_ >= text_.size() || !std::isdigit(static_cast<unsigned char>(text_[pos_])))
                throw ParseError("variable index expected after 'x'", pos_);
            const std::uint32_t idx = parse_uint("variable index");
            if (idx == 0) throw ParseError("unknown variable x0: indices are 1-based", pos_);
            if (idx > nvars_)
                throw ParseError("unknown variable x" + std::to_string(idx) + " in a " +
                                     std::to_string(nvars_) + "-variable context",
                                 pos_);
            std::uint32_t e = 1;
            if (consume('^')) e = parse_uint("exponent");
            if (e > kMaxExponent) throw ParseError("exponent overflow", pos_);
            std::vector<std::uint32_t> exps(nvars_, 0u);
            exps[idx - 1] = e;
            return Polynomial::term(nvars_, Monomial(std::move(exps)), Rational(1));
        }
        if (std::isalpha(static_cast<unsigned char>(c)))
            throw ParseError(std::string("unknown variable name '") + c + "'", pos_);
        throw ParseError("expected factor", pos_);
    }

    std::uint32_t parse_uint(const std::string& what) {
        skip_ws();
        if (pos_ >= text_.size() || !std::isdigit(static_cast<unsigned char>(text_[pos_])))
            throw ParseError("expected " + what, pos_);
        std::uint64_t v = 0;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
            v = v * 10 + static_cast<std::uint64_t>(text_[pos_] - '0');
            if (v > kMaxExponent) throw ParseError(what + " overflow", pos_);
            ++pos_;
        }
        return static_cast<std::uint32_t>(v);
    }

    // coeff := int | int '/' uint | decimal ; sign is handled by the caller.
    Rational parse_coeff() {
        skip_ws();
        std::size_t start = pos_;
        std::string digits;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
            digits += text_[pos_];
            ++pos_;
        }
        if (pos_ < text_.size() && text_[pos_] == '.') {
            ++pos_;
            std::string frac;
            while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
                frac += text_[pos_];
                ++pos_;
            }
            if (digits.empty() && frac.empty()) throw ParseError("malformed decimal literal", start);
            // Exact decimal: digits.frac == digitsfrac / 10^len(frac).
            mpz_class num((digits.empty() ? "0" : digits) + frac);
            mpz_class den(1);
            for (std::size_t i = 0; i < frac.size(); ++i) den *= 10;
            Rational q(num, den);
            q.canonicalize();
            return q;
        }
        if (digits.empty()) throw ParseError("expected coefficient", start);
        if (pos_ < text_.size() && text_[pos_] == '/') {
            // Only treat '/' as a rational separator when followed by digits.
            std::size_t save = pos_;
            ++pos_;
            skip_ws();
            std::string den_digits;
            while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
                den_digits += text_[pos_];
                ++pos_;
            }
            if (den_digits.empty()) {
                pos_ = save;
            } else {
                mpz_class den(den_digits);
                if (den == 0) throw ParseError("zero denominator", save);
                Rational q(mpz_class(digits), den);
                q.canonicalize();
                return q;
            }
        }
        return Rational(mpz_class(digits));
    }
};

std::size_t infer_nvars(const std::string& text) {
    std::size_t max_idx = 0;
    for (std::size_t i = 0; i < text.size(); ++i) {
        if (text[i] != 'x') continue;
        std::size_t j = i + 1;
        std::uint64_t v = 0;
        bool any = false;
        while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) {
            v = v * 10 + static_cast<std::uint64_t>(text[j] - '0');
            any = true;
            if (v > kMaxExponent) break;
            ++j;
        }
        if (any) max_idx = std::max<std::size_t>(max_idx, v);
    }
    return std::max<std::size_t>(max_idx, 1);
}

}  // namespace

Polynomial parse_polynomial(const std::string& text, std::optional<std::size_t> nvars) {
    const std::size_t n = nvars.value_or(infer_nvars(text));
    if (n == 0) throw ParseError("variable count must be positive", 0);
    return Parser(text, n).parse();
}

}  // namespace morseopt
